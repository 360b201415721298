#pragma once

#include <string>
#include <vector>

#include "linstate/syntax.hpp"

namespace linstate {

// S-expression layer. `.lst` files are UTF-8; `;` starts a line comment.
struct SExpr {
  bool is_atom = true;
  std::string atom;
  std::vector<SExpr> kids;
  int line = 1, col = 1;
};

SExpr read_sexpr(const std::string& text, const std::string& origin = "<string>");
std::vector<SExpr> read_sexprs(const std::string& text, const std::string& origin = "<string>");

// Which grammar to parse a term against. Producer-only derived forms
// (case/inl/inr/absurd over producers) are macro-expanded here.
enum class TermFamily { Fg, Ecbv, Cps };
enum class Mode { Value, Producer, Computation };

struct ParsedTerm {
  Term term;
  Mode mode;  // Fg: Value|Producer; Ecbv/Cps: Value|Computation
};

Type parse_type(const std::string& text, TypeSort sort);
Type type_of_sexpr(const SExpr& s, TypeSort sort);

// `fragment` restricts to the first-order effect-equation grammar
// (no lambdas or applications; generic effects allowed).
ParsedTerm parse_term(const std::string& text, TermFamily family, bool fragment = false);
ParsedTerm term_of_sexpr(const SExpr& s, TermFamily family, bool fragment = false);

std::string print_type(const Type& t);
std::string print_term(const Term& t);

}  // namespace linstate
