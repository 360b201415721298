#ifndef LINSTATE_TERMFILE_HPP
#define LINSTATE_TERMFILE_HPP

#include <optional>
#include <string>

#include "linstate/effects.hpp"
#include "linstate/surface.hpp"

namespace linstate {

// Term files:
//   (term fg|ecbv|cps [(context (name type)*)] [(linear name compType)] body)
struct TermFile {
  TermFamily family = TermFamily::Fg;
  ValueCtx ctx;
  std::optional<LinearVar> lin;
  ParsedTerm parsed{Term{}, Mode::Value};
};

std::string family_name(TermFamily f);
std::string mode_name(Mode m);

TermFile parse_term_file(const std::string& text, const std::string& origin = "");
std::string show_term_file(TermFamily fam, const ValueCtx& ctx,
                           const std::optional<LinearVar>& lin, const Term& t);

// Typing judgement of the file's body under its declared context.
Judgement judge(const EffectTheory& th, const TermFile& tf);

// Theory whose signature accepts any sort and declares no effects.
EffectTheory permissive_theory();

// A name based on `base` that is free in the term and the context.
std::string fresh_var(const std::string& base, const ValueCtx& ctx, const Term& t);

}  // namespace linstate

#endif
