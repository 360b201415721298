#include "linstate/termfile.hpp"

#include <set>

namespace linstate {

std::string family_name(TermFamily f) {
  switch (f) {
    case TermFamily::Fg:
      return "fg";
    case TermFamily::Ecbv:
      return "ecbv";
    case TermFamily::Cps:
      return "cps";
  }
  return "?";
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Value:
      return "value";
    case Mode::Producer:
      return "producer";
    case Mode::Computation:
      return "computation";
  }
  return "?";
}

TermFile parse_term_file(const std::string& text, const std::string& origin) {
  SExpr s = read_sexpr(text, origin);
  if (s.is_atom || s.kids.size() < 2 || !s.kids[0].is_atom || s.kids[0].atom != "term")
    throw Error("ParseError", "expected (term fg|ecbv|cps [items] body)", s.line, s.col);
  TermFile tf;
  const std::string& fam = s.kids[1].atom;
  if (!s.kids[1].is_atom || (fam != "fg" && fam != "ecbv" && fam != "cps"))
    throw Error("ParseError", "term family must be fg, ecbv or cps", s.kids[1].line,
                s.kids[1].col);
  tf.family = fam == "fg" ? TermFamily::Fg : fam == "ecbv" ? TermFamily::Ecbv : TermFamily::Cps;
  TypeSort vsort = tf.family == TermFamily::Fg     ? TypeSort::FgType
                   : tf.family == TermFamily::Ecbv ? TypeSort::EcbvVal
                                                   : TypeSort::CpsVal;
  TypeSort csort = tf.family == TermFamily::Ecbv ? TypeSort::EcbvComp : TypeSort::CpsComp;
  size_t i = 2;
  for (; i + 1 < s.kids.size(); ++i) {
    const SExpr& item = s.kids[i];
    if (item.is_atom || item.kids.empty() || !item.kids[0].is_atom) break;
    if (item.kids[0].atom == "context") {
      for (size_t j = 1; j < item.kids.size(); ++j) {
        const SExpr& b = item.kids[j];
        if (b.is_atom || b.kids.size() != 2 || !b.kids[0].is_atom)
          throw Error("ParseError", "context entries are (name type)", b.line, b.col);
        tf.ctx.emplace_back(b.kids[0].atom, type_of_sexpr(b.kids[1], vsort));
      }
    } else if (item.kids[0].atom == "linear") {
      if (tf.family == TermFamily::Fg)
        throw Error("ParseError", "fine-grain terms have no linear variable", item.line, item.col);
      if (item.kids.size() != 3 || !item.kids[1].is_atom)
        throw Error("ParseError", "(linear name compType)", item.line, item.col);
      tf.lin = LinearVar{item.kids[1].atom, type_of_sexpr(item.kids[2], csort)};
    } else {
      break;
    }
  }
  if (i != s.kids.size() - 1)
    throw Error("ParseError", "term file needs exactly one body term", s.line, s.col);
  // A bare atom is read as a value variable; when it names the declared
  // linear variable the body is the linear axiom instead.
  if (tf.lin && s.kids[i].is_atom && s.kids[i].atom == tf.lin->name)
    tf.parsed = ParsedTerm{l_var(tf.lin->name), Mode::Computation};
  else
    tf.parsed = term_of_sexpr(s.kids[i], tf.family);
  return tf;
}

std::string show_term_file(TermFamily fam, const ValueCtx& ctx,
                           const std::optional<LinearVar>& lin, const Term& t) {
  std::string out = "(term " + family_name(fam);
  if (!ctx.empty()) {
    out += " (context";
    for (const auto& [n, ty] : ctx) out += " (" + n + " " + print_type(ty) + ")";
    out += ")";
  }
  if (lin) out += " (linear " + lin->name + " " + print_type(lin->type) + ")";
  out += " " + print_term(t) + ")";
  return out;
}

Judgement judge(const EffectTheory& th, const TermFile& tf) {
  switch (tf.family) {
    case TermFamily::Fg:
      return check_fg(th.sig, tf.ctx, tf.parsed.term);
    case TermFamily::Ecbv:
      return check_ecbv(th.sig, tf.ctx, tf.lin, tf.parsed.term);
    case TermFamily::Cps:
      return check_cps(th.sig, tf.ctx, tf.lin, tf.parsed.term);
  }
  throw Error("TypeError", "unknown term family");
}

EffectTheory permissive_theory() {
  EffectTheory th;
  th.sig.restrict_sorts = false;
  return th;
}

std::string fresh_var(const std::string& base, const ValueCtx& ctx, const Term& t) {
  std::set<std::string> used = all_names(t);
  for (const auto& [n, ty] : ctx) used.insert(n);
  std::string v = base;
  for (int i = 0; used.count(v); ++i) v = base + std::to_string(i);
  return v;
}

}  // namespace linstate
