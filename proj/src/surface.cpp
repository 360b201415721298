#include "linstate/surface.hpp"

#include <cctype>
#include <sstream>

namespace linstate {

namespace {

[[noreturn]] void perr(const std::string& msg, int line, int col) {
  throw Error("ParseError", msg, line, col);
}

struct Reader {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Reader(const std::string& t) : text(t) {}

  int peek() const { return pos < text.size() ? (unsigned char)text[pos] : -1; }
  int get() {
    if (pos >= text.size()) return -1;
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return (unsigned char)c;
  }
  void skip_ws() {
    for (;;) {
      int c = peek();
      if (c == ';') {
        while (peek() != -1 && peek() != '\n') get();
        continue;
      }
      if (c == -1 || !std::isspace(c)) return;
      get();
    }
  }
  bool atom_char(int c) const {
    return c != -1 && !std::isspace(c) && c != '(' && c != ')' && c != ';';
  }
  SExpr read() {
    skip_ws();
    SExpr s;
    s.line = line;
    s.col = col;
    int c = peek();
    if (c == -1) perr("unexpected end of input", line, col);
    if (c == ')') perr("unmatched ')'", line, col);
    if (c == '(') {
      get();
      s.is_atom = false;
      for (;;) {
        skip_ws();
        if (peek() == -1) perr("unterminated '('", s.line, s.col);
        if (peek() == ')') {
          get();
          return s;
        }
        s.kids.push_back(read());
      }
    }
    s.is_atom = true;
    while (atom_char(peek())) s.atom.push_back((char)get());
    if (s.atom.empty()) perr("empty atom", line, col);
    return s;
  }
};

const char* kReserved[] = {
    "star",   "unit", "empty", "ozero",  "oone",    "pair",    "fst",     "snd",  "lam",
    "app",    "return", "let", "inl",    "inr",     "case",    "absurd",  "geff", "const",
    "llam",   "lapp", "tens",  "lettens", "oinl",   "oinr",    "ocase",   "oabsurd",
    "plam",   "papp", "sacc",  "prod",   "sum",     "parr",    "lolli",   "tensor",
    "power",  "osum", "oprod", "theory", "model",   "comodel", "eq",      "sort",
    "effect", "op",   "state", "base",   "dist",
};

bool is_reserved(const std::string& s) {
  for (auto* r : kReserved)
    if (s == r) return true;
  return false;
}

void check_len(const SExpr& s, size_t n, const std::string& what) {
  if (s.kids.size() != n)
    perr(what + " expects " + std::to_string(n - 1) + " argument(s)", s.line, s.col);
}

const std::string& head(const SExpr& s) {
  if (s.is_atom || s.kids.empty() || !s.kids[0].is_atom)
    perr("expected a form '(keyword ...)'", s.line, s.col);
  return s.kids[0].atom;
}

Type parse_type_rec(const SExpr& s, TypeSort sort) {
  bool fg = sort == TypeSort::FgType;
  bool val = fg || sort == TypeSort::EcbvVal || sort == TypeSort::CpsVal;
  TypeSort subval = fg       ? TypeSort::FgType
                    : (sort == TypeSort::EcbvVal || sort == TypeSort::EcbvComp)
                        ? TypeSort::EcbvVal
                        : TypeSort::CpsVal;
  TypeSort subcomp = (sort == TypeSort::EcbvVal || sort == TypeSort::EcbvComp)
                         ? TypeSort::EcbvComp
                         : TypeSort::CpsComp;
  if (s.is_atom) {
    const std::string& a = s.atom;
    if (val) {
      if (a == "unit") return t_unit();
      if (a == "empty") return t_empty();
      if (is_reserved(a)) perr("'" + a + "' is not a value type here", s.line, s.col);
      return t_base(a);
    }
    if (a == "ozero") {
      if (sort != TypeSort::EcbvComp) perr("'ozero' is not a CPS computation type", s.line, s.col);
      return t_ozero();
    }
    if (a == "oone") {
      if (sort != TypeSort::CpsComp) perr("'oone' is not an ECBV computation type", s.line, s.col);
      return t_oone();
    }
    if (is_reserved(a)) perr("'" + a + "' is not a computation type here", s.line, s.col);
    return t_comp(a);
  }
  const std::string& h = head(s);
  if (val) {
    if (h == "prod") {
      check_len(s, 3, "prod");
      return t_prod(parse_type_rec(s.kids[1], subval), parse_type_rec(s.kids[2], subval));
    }
    if (h == "sum") {
      check_len(s, 3, "sum");
      return t_sum(parse_type_rec(s.kids[1], subval), parse_type_rec(s.kids[2], subval));
    }
    if (h == "parr" && fg) {
      check_len(s, 3, "parr");
      return t_parr(parse_type_rec(s.kids[1], subval), parse_type_rec(s.kids[2], subval));
    }
    if (h == "lolli" && !fg) {
      check_len(s, 3, "lolli");
      return t_lolli(parse_type_rec(s.kids[1], subcomp), parse_type_rec(s.kids[2], subcomp));
    }
    perr("'" + h + "' is not a value type constructor here", s.line, s.col);
  }
  if (sort == TypeSort::EcbvComp) {
    if (h == "tensor") {
      check_len(s, 3, "tensor");
      return t_tensor(parse_type_rec(s.kids[1], subval), parse_type_rec(s.kids[2], sort));
    }
    if (h == "osum") {
      check_len(s, 3, "osum");
      return t_osum(parse_type_rec(s.kids[1], sort), parse_type_rec(s.kids[2], sort));
    }
    perr("'" + h + "' is not an ECBV computation type constructor", s.line, s.col);
  }
  if (h == "power") {
    check_len(s, 3, "power");
    return t_power(parse_type_rec(s.kids[1], subval), parse_type_rec(s.kids[2], sort));
  }
  if (h == "oprod") {
    check_len(s, 3, "oprod");
    return t_oprod(parse_type_rec(s.kids[1], sort), parse_type_rec(s.kids[2], sort));
  }
  perr("'" + h + "' is not a CPS computation type constructor", s.line, s.col);
}

void collect_atoms(const SExpr& s, std::set<std::string>& out) {
  if (s.is_atom)
    out.insert(s.atom);
  else
    for (auto& k : s.kids) collect_atoms(k, out);
}

struct TermParser {
  TermFamily family;
  bool fragment;
  std::set<std::string> scope;
  std::set<std::string> seen;

  std::string fresh(const std::string& base) {
    if (!seen.count(base)) {
      seen.insert(base);
      return base;
    }
    for (int i = 1;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!seen.count(cand)) {
        seen.insert(cand);
        return cand;
      }
    }
  }

  void check_binder(const SExpr& at, const std::string& name) {
    if (is_reserved(name)) perr("'" + name + "' is a reserved word", at.line, at.col);
    if (scope.count(name))
      perr("binder '" + name + "' shadows a variable in scope", at.line, at.col);
  }

  const std::string& binder_atom(const SExpr& s) {
    if (!s.is_atom) perr("expected a variable name", s.line, s.col);
    return s.atom;
  }

  Type ann(const SExpr& s, TypeSort sort) { return parse_type_rec(s, sort); }

  TypeSort val_sort() const {
    return family == TermFamily::Fg     ? TypeSort::FgType
           : family == TermFamily::Ecbv ? TypeSort::EcbvVal
                                        : TypeSort::CpsVal;
  }
  TypeSort comp_sort() const {
    return family == TermFamily::Ecbv ? TypeSort::EcbvComp : TypeSort::CpsComp;
  }

  // ---------- fine-grain terms: bottom-up mode inference ----------

  ParsedTerm fg(const SExpr& s) {
    if (s.is_atom) {
      if (s.atom == "star") {
        Term t = m_star();
        t.line = s.line;
        t.col = s.col;
        return {t, Mode::Value};
      }
      if (is_reserved(s.atom)) perr("'" + s.atom + "' cannot be a variable", s.line, s.col);
      Term t = v_var(s.atom);
      t.line = s.line;
      t.col = s.col;
      return {t, Mode::Value};
    }
    const std::string& h = head(s);
    auto loc = [&](Term t) {
      t.line = s.line;
      t.col = s.col;
      return t;
    };
    auto want_value = [&](const SExpr& k, const std::string& what) {
      ParsedTerm p = fg(k);
      if (p.mode != Mode::Value)
        perr(what + " expects a value argument", k.line, k.col);
      return p.term;
    };
    if (h == "pair") {
      check_len(s, 3, "pair");
      return {loc(m_pair(want_value(s.kids[1], "pair"), want_value(s.kids[2], "pair"))),
              Mode::Value};
    }
    if (h == "fst") {
      check_len(s, 2, "fst");
      return {loc(m_fst(want_value(s.kids[1], "fst"))), Mode::Value};
    }
    if (h == "snd") {
      check_len(s, 2, "snd");
      return {loc(m_snd(want_value(s.kids[1], "snd"))), Mode::Value};
    }
    if (h == "lam") {
      if (fragment) throw Error("FragmentViolation", "lambda is outside the effect-equation fragment",
                                s.line, s.col);
      check_len(s, 3, "lam");
      const SExpr& b = s.kids[1];
      if (b.is_atom || b.kids.size() != 2)
        perr("lam binder must be '(name type)'", b.line, b.col);
      const std::string& x = binder_atom(b.kids[0]);
      check_binder(b.kids[0], x);
      Type ty = ann(b.kids[1], val_sort());
      scope.insert(x);
      ParsedTerm body = fg(s.kids[2]);
      scope.erase(x);
      if (body.mode != Mode::Producer)
        perr("lam body must be a producer", s.kids[2].line, s.kids[2].col);
      return {loc(m_lam(x, ty, body.term)), Mode::Value};
    }
    if (h == "app") {
      if (fragment) throw Error("FragmentViolation",
                                "application is outside the effect-equation fragment", s.line,
                                s.col);
      check_len(s, 3, "app");
      return {loc(m_app(want_value(s.kids[1], "app"), want_value(s.kids[2], "app"))),
              Mode::Producer};
    }
    if (h == "return") {
      check_len(s, 2, "return");
      return {loc(m_return(want_value(s.kids[1], "return"))), Mode::Producer};
    }
    if (h == "let") {
      check_len(s, 3, "let");
      const SExpr& b = s.kids[1];
      if (b.is_atom || b.kids.size() != 2)
        perr("let binder must be '(name producer)'", b.line, b.col);
      const std::string& x = binder_atom(b.kids[0]);
      check_binder(b.kids[0], x);
      ParsedTerm m = fg(b.kids[1]);
      if (m.mode != Mode::Producer)
        perr("let expects a producer; write (return V) to lift a value", b.kids[1].line,
             b.kids[1].col);
      scope.insert(x);
      ParsedTerm n = fg(s.kids[2]);
      scope.erase(x);
      if (n.mode != Mode::Producer)
        perr("let body must be a producer", s.kids[2].line, s.kids[2].col);
      return {loc(m_let(x, m.term, n.term)), Mode::Producer};
    }
    if (h == "inl" || h == "inr") {
      check_len(s, 3, h);
      Type other = ann(s.kids[1], val_sort());
      ParsedTerm v = fg(s.kids[2]);
      if (v.mode == Mode::Value)
        return {loc(h == "inl" ? m_inl(other, v.term) : m_inr(other, v.term)), Mode::Value};
      // derived producer injection: let x = M in return (in_i x)
      std::string x = fresh("x");
      Term inj = h == "inl" ? m_inl(other, v_var(x)) : m_inr(other, v_var(x));
      return {loc(m_let(x, v.term, m_return(inj))), Mode::Producer};
    }
    if (h == "absurd") {
      check_len(s, 3, "absurd");
      Type res = ann(s.kids[1], val_sort());
      ParsedTerm v = fg(s.kids[2]);
      if (v.mode == Mode::Value) return {loc(m_absurd(res, v.term)), Mode::Value};
      std::string x = fresh("x");
      return {loc(m_let(x, v.term, m_return(m_absurd(res, v_var(x))))), Mode::Producer};
    }
    if (h == "case") {
      check_len(s, 4, "case");
      ParsedTerm v = fg(s.kids[1]);
      auto branch = [&](const SExpr& b, std::string& x, ParsedTerm& w) {
        if (b.is_atom || b.kids.size() != 2)
          perr("case branch must be '(name term)'", b.line, b.col);
        x = binder_atom(b.kids[0]);
        check_binder(b.kids[0], x);
        scope.insert(x);
        w = fg(b.kids[1]);
        scope.erase(x);
      };
      std::string x1, x2;
      ParsedTerm w1, w2;
      branch(s.kids[2], x1, w1);
      branch(s.kids[3], x2, w2);
      if (v.mode == Mode::Value && w1.mode == Mode::Value && w2.mode == Mode::Value)
        return {loc(m_case(v.term, x1, w1.term, x2, w2.term)), Mode::Value};
      if (v.mode == Mode::Producer && w1.mode == Mode::Producer && w2.mode == Mode::Producer) {
        // derived producer case:
        //   let z = M in (case z of (x1. lam w:1. N1 | x2. lam w:1. N2)) star
        std::string z = fresh("z");
        std::string w = fresh("w");
        Term fn = m_case(v_var(z), x1, m_lam(w, t_unit(), w1.term), x2,
                         m_lam(w, t_unit(), w2.term));
        return {loc(m_let(z, v.term, m_app(fn, m_star()))), Mode::Producer};
      }
      perr("case parts must be all values or all producers", s.line, s.col);
    }
    if (h == "geff") {
      if (s.kids.size() < 2 || !s.kids[1].is_atom)
        perr("geff expects an effect name", s.line, s.col);
      std::vector<Term> args;
      for (size_t i = 2; i < s.kids.size(); ++i) args.push_back(want_value(s.kids[i], "geff"));
      return {loc(m_geff(s.kids[1].atom, std::move(args))), Mode::Producer};
    }
    if (h == "const") {
      if (s.kids.size() < 2 || !s.kids[1].is_atom)
        perr("const expects a constant name", s.line, s.col);
      std::vector<Term> args;
      for (size_t i = 2; i < s.kids.size(); ++i) args.push_back(want_value(s.kids[i], "const"));
      return {loc(m_const(s.kids[1].atom, std::move(args))), Mode::Value};
    }
    perr("'" + h + "' is not a fine-grain call-by-value term", s.line, s.col);
  }

  // ---------- enriched / CPS terms: top-down with expected mode ----------

  Term ec(const SExpr& s, Mode mode) {
    bool cps = family == TermFamily::Cps;
    if (s.is_atom) {
      if (s.atom == "star") {
        if (mode != Mode::Value) perr("'star' is a value, not a computation", s.line, s.col);
        Term t = m_star();
        t.line = s.line;
        t.col = s.col;
        return t;
      }
      if (is_reserved(s.atom)) perr("'" + s.atom + "' cannot be a variable", s.line, s.col);
      Term t = mode == Mode::Computation ? l_var(s.atom) : v_var(s.atom);
      t.line = s.line;
      t.col = s.col;
      return t;
    }
    const std::string& h = head(s);
    auto loc = [&](Term t) {
      t.line = s.line;
      t.col = s.col;
      return t;
    };
    auto val = [&](const SExpr& k) { return ec(k, Mode::Value); };
    auto comp = [&](const SExpr& k) { return ec(k, Mode::Computation); };
    if (mode == Mode::Value) {
      if (h == "pair") {
        check_len(s, 3, "pair");
        return loc(m_pair(val(s.kids[1]), val(s.kids[2])));
      }
      if (h == "fst") {
        check_len(s, 2, "fst");
        return loc(m_fst(val(s.kids[1])));
      }
      if (h == "snd") {
        check_len(s, 2, "snd");
        return loc(m_snd(val(s.kids[1])));
      }
      if (h == "llam") {
        check_len(s, 3, "llam");
        const SExpr& b = s.kids[1];
        if (b.is_atom || b.kids.size() != 2)
          perr("llam binder must be '(name comptype)'", b.line, b.col);
        const std::string& z = binder_atom(b.kids[0]);
        check_binder(b.kids[0], z);
        Type ty = ann(b.kids[1], comp_sort());
        scope.insert(z);
        Term body = comp(s.kids[2]);
        scope.erase(z);
        return loc(m_llam(z, ty, body));
      }
      if (h == "inl" || h == "inr") {
        check_len(s, 3, h);
        Type other = ann(s.kids[1], val_sort());
        Term v = val(s.kids[2]);
        return loc(h == "inl" ? m_inl(other, v) : m_inr(other, v));
      }
      if (h == "case") {
        check_len(s, 4, "case");
        Term v = val(s.kids[1]);
        auto branch = [&](const SExpr& b, std::string& x, Term& w) {
          if (b.is_atom || b.kids.size() != 2)
            perr("case branch must be '(name term)'", b.line, b.col);
          x = binder_atom(b.kids[0]);
          check_binder(b.kids[0], x);
          scope.insert(x);
          w = val(b.kids[1]);
          scope.erase(x);
        };
        std::string x1, x2;
        Term w1, w2;
        branch(s.kids[2], x1, w1);
        branch(s.kids[3], x2, w2);
        return loc(m_case(v, x1, w1, x2, w2));
      }
      if (h == "absurd") {
        check_len(s, 3, "absurd");
        return loc(m_absurd(ann(s.kids[1], val_sort()), val(s.kids[2])));
      }
      if (h == "sacc") {
        check_len(s, 2, "sacc");
        if (!s.kids[1].is_atom) perr("sacc expects an effect name", s.line, s.col);
        return loc(m_sacc(s.kids[1].atom));
      }
      if (h == "const") {
        if (s.kids.size() < 2 || !s.kids[1].is_atom)
          perr("const expects a constant name", s.line, s.col);
        std::vector<Term> args;
        for (size_t i = 2; i < s.kids.size(); ++i) args.push_back(val(s.kids[i]));
        return loc(m_const(s.kids[1].atom, std::move(args)));
      }
      perr("'" + h + "' is not a value term here", s.line, s.col);
    }
    // computation mode
    if (h == "lapp") {
      check_len(s, 3, "lapp");
      return loc(m_lapp(val(s.kids[1]), comp(s.kids[2])));
    }
    if (!cps) {
      if (h == "tens") {
        check_len(s, 3, "tens");
        return loc(m_tens(val(s.kids[1]), comp(s.kids[2])));
      }
      if (h == "lettens") {
        check_len(s, 3, "lettens");
        const SExpr& b = s.kids[1];
        if (b.is_atom || b.kids.size() != 3)
          perr("lettens binder must be '(x z comp)'", b.line, b.col);
        const std::string& x = binder_atom(b.kids[0]);
        const std::string& z = binder_atom(b.kids[1]);
        check_binder(b.kids[0], x);
        check_binder(b.kids[1], z);
        if (x == z) perr("lettens binders must be distinct", b.line, b.col);
        Term t = comp(b.kids[2]);
        scope.insert(x);
        scope.insert(z);
        Term u = comp(s.kids[2]);
        scope.erase(x);
        scope.erase(z);
        return loc(m_lettens(x, z, t, u));
      }
      if (h == "oinl" || h == "oinr") {
        check_len(s, 3, h);
        Type other = ann(s.kids[1], comp_sort());
        Term t = comp(s.kids[2]);
        return loc(h == "oinl" ? m_oinl(other, t) : m_oinr(other, t));
      }
      if (h == "ocase") {
        check_len(s, 4, "ocase");
        Term t = comp(s.kids[1]);
        auto branch = [&](const SExpr& b, std::string& z, Term& u) {
          if (b.is_atom || b.kids.size() != 2)
            perr("ocase branch must be '(name comp)'", b.line, b.col);
          z = binder_atom(b.kids[0]);
          check_binder(b.kids[0], z);
          scope.insert(z);
          u = comp(b.kids[1]);
          scope.erase(z);
        };
        std::string z1, z2;
        Term u1, u2;
        branch(s.kids[2], z1, u1);
        branch(s.kids[3], z2, u2);
        return loc(m_ocase(t, z1, u1, z2, u2));
      }
      if (h == "oabsurd") {
        check_len(s, 3, "oabsurd");
        return loc(m_oabsurd(ann(s.kids[1], comp_sort()), comp(s.kids[2])));
      }
    } else {
      if (h == "plam") {
        check_len(s, 3, "plam");
        const SExpr& b = s.kids[1];
        if (b.is_atom || b.kids.size() != 2)
          perr("plam binder must be '(name valtype)'", b.line, b.col);
        const std::string& x = binder_atom(b.kids[0]);
        check_binder(b.kids[0], x);
        Type ty = ann(b.kids[1], val_sort());
        scope.insert(x);
        Term body = comp(s.kids[2]);
        scope.erase(x);
        return loc(m_plam(x, ty, body));
      }
      if (h == "papp") {
        check_len(s, 3, "papp");
        return loc(m_papp(comp(s.kids[1]), val(s.kids[2])));
      }
    }
    perr("'" + h + "' is not a computation term here", s.line, s.col);
  }

  Mode infer_top_mode(const SExpr& s) const {
    if (s.is_atom) return Mode::Value;  // bare identifier defaults to a value variable
    if (s.kids.empty() || !s.kids[0].is_atom) return Mode::Value;
    const std::string& h = s.kids[0].atom;
    if (h == "lapp" || h == "tens" || h == "lettens" || h == "oinl" || h == "oinr" ||
        h == "ocase" || h == "oabsurd" || h == "plam" || h == "papp")
      return Mode::Computation;
    return Mode::Value;
  }
};

}  // namespace

SExpr read_sexpr(const std::string& text, const std::string& origin) {
  Reader r(text);
  SExpr s = r.read();
  r.skip_ws();
  if (r.peek() != -1) perr("trailing input after expression in " + origin, r.line, r.col);
  return s;
}

std::vector<SExpr> read_sexprs(const std::string& text, const std::string& origin) {
  (void)origin;
  Reader r(text);
  std::vector<SExpr> out;
  for (;;) {
    r.skip_ws();
    if (r.peek() == -1) return out;
    out.push_back(r.read());
  }
}

Type type_of_sexpr(const SExpr& s, TypeSort sort) { return parse_type_rec(s, sort); }

Type parse_type(const std::string& text, TypeSort sort) {
  return type_of_sexpr(read_sexpr(text), sort);
}

ParsedTerm term_of_sexpr(const SExpr& s, TermFamily family, bool fragment) {
  TermParser p;
  p.family = family;
  p.fragment = fragment;
  collect_atoms(s, p.seen);
  if (family == TermFamily::Fg) return p.fg(s);
  Mode m = p.infer_top_mode(s);
  Term t = p.ec(s, m);
  return {t, m};
}

ParsedTerm parse_term(const std::string& text, TermFamily family, bool fragment) {
  return term_of_sexpr(read_sexpr(text), family, fragment);
}

std::string print_type(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
    case TypeTag::CompConst:
      return t.name;
    case TypeTag::Unit:
      return "unit";
    case TypeTag::Empty:
      return "empty";
    case TypeTag::OZero:
      return "ozero";
    case TypeTag::OOne:
      return "oone";
    case TypeTag::Prod:
      return "(prod " + print_type(t.kids[0]) + " " + print_type(t.kids[1]) + ")";
    case TypeTag::Parr:
      return "(parr " + print_type(t.kids[0]) + " " + print_type(t.kids[1]) + ")";
    case TypeTag::Sum:
      return "(sum " + print_type(t.kids[0]) + " " + print_type(t.kids[1]) + ")";
    case TypeTag::Lolli:
      return "(lolli " + print_type(t.kids[0]) + " " + print_type(t.kids[1]) + ")";
    case TypeTag::Tensor:
      return "(tensor " + print_type(t.kids[0]) + " " + print_type(t.kids[1]) + ")";
    case TypeTag::OSum:
      return "(osum " + print_type(t.kids[0]) + " " + print_type(t.kids[1]) + ")";
    case TypeTag::Power:
      return "(power " + print_type(t.kids[0]) + " " + print_type(t.kids[1]) + ")";
    case TypeTag::OProd:
      return "(oprod " + print_type(t.kids[0]) + " " + print_type(t.kids[1]) + ")";
  }
  return "?";
}

std::string print_term(const Term& t) {
  auto p = print_term;
  switch (t.tag) {
    case TermTag::Var:
      return t.name;
    case TermTag::Star:
      return "star";
    case TermTag::Pair:
      return "(pair " + p(t.kids[0]) + " " + p(t.kids[1]) + ")";
    case TermTag::Fst:
      return "(fst " + p(t.kids[0]) + ")";
    case TermTag::Snd:
      return "(snd " + p(t.kids[0]) + ")";
    case TermTag::Lam:
      return "(lam (" + t.name + " " + print_type(t.ann[0]) + ") " + p(t.kids[0]) + ")";
    case TermTag::App:
      return "(app " + p(t.kids[0]) + " " + p(t.kids[1]) + ")";
    case TermTag::Return:
      return "(return " + p(t.kids[0]) + ")";
    case TermTag::Let:
      return "(let (" + t.name + " " + p(t.kids[0]) + ") " + p(t.kids[1]) + ")";
    case TermTag::Inl:
      return "(inl " + print_type(t.ann[0]) + " " + p(t.kids[0]) + ")";
    case TermTag::Inr:
      return "(inr " + print_type(t.ann[0]) + " " + p(t.kids[0]) + ")";
    case TermTag::Case:
      return "(case " + p(t.kids[0]) + " (" + t.binders[0] + " " + p(t.kids[1]) + ") (" +
             t.binders[1] + " " + p(t.kids[2]) + "))";
    case TermTag::Absurd:
      return "(absurd " + print_type(t.ann[0]) + " " + p(t.kids[0]) + ")";
    case TermTag::Const: {
      std::string out = "(const " + t.name;
      for (auto& k : t.kids) out += " " + p(k);
      return out + ")";
    }
    case TermTag::Geff: {
      std::string out = "(geff " + t.name;
      for (auto& k : t.kids) out += " " + p(k);
      return out + ")";
    }
    case TermTag::Llam:
      return "(llam (" + t.name + " " + print_type(t.ann[0]) + ") " + p(t.kids[0]) + ")";
    case TermTag::Lapp:
      return "(lapp " + p(t.kids[0]) + " " + p(t.kids[1]) + ")";
    case TermTag::Tens:
      return "(tens " + p(t.kids[0]) + " " + p(t.kids[1]) + ")";
    case TermTag::Lettens:
      return "(lettens (" + t.binders[0] + " " + t.binders[1] + " " + p(t.kids[0]) + ") " +
             p(t.kids[1]) + ")";
    case TermTag::Oinl:
      return "(oinl " + print_type(t.ann[0]) + " " + p(t.kids[0]) + ")";
    case TermTag::Oinr:
      return "(oinr " + print_type(t.ann[0]) + " " + p(t.kids[0]) + ")";
    case TermTag::Ocase:
      return "(ocase " + p(t.kids[0]) + " (" + t.binders[0] + " " + p(t.kids[1]) + ") (" +
             t.binders[1] + " " + p(t.kids[2]) + "))";
    case TermTag::Oabsurd:
      return "(oabsurd " + print_type(t.ann[0]) + " " + p(t.kids[0]) + ")";
    case TermTag::Plam:
      return "(plam (" + t.name + " " + print_type(t.ann[0]) + ") " + p(t.kids[0]) + ")";
    case TermTag::Papp:
      return "(papp " + p(t.kids[0]) + " " + p(t.kids[1]) + ")";
    case TermTag::Sacc:
      return "(sacc " + t.name + ")";
  }
  return "?";
}

}  // namespace linstate
