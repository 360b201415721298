#include <functional>

#include "doctest.h"
#include "linstate/surface.hpp"

using namespace linstate;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  return "";
}

void roundtrip(const std::string& src, TermFamily fam) {
  ParsedTerm a = parse_term(src, fam);
  std::string printed = print_term(a.term);
  ParsedTerm b = parse_term(printed, fam);
  CHECK(b.mode == a.mode);
  CHECK(alpha_eq(a.term, b.term));
  CHECK(print_term(b.term) == printed);  // printer is stable under reparse
}

}  // namespace

TEST_CASE("reader tracks comments and locations") {
  SExpr s = read_sexpr("; a comment\n  (pair star\n    star)");
  CHECK_FALSE(s.is_atom);
  CHECK(s.line == 2);
  CHECK(s.col == 3);
  CHECK(s.kids.size() == 3);
  CHECK(s.kids[2].line == 3);
  CHECK(code_of([] { read_sexpr("(pair star star) junk"); }) == "ParseError");
  CHECK(code_of([] { read_sexpr("(pair star"); }) == "ParseError");
  CHECK(code_of([] { read_sexpr(")"); }) == "ParseError");
}

TEST_CASE("type grammar per language") {
  CHECK(parse_type("(parr (sum unit unit) (prod a b))", TypeSort::FgType) ==
        t_parr(t_sum(t_unit(), t_unit()), t_prod(t_base("a"), t_base("b"))));
  CHECK(parse_type("(lolli (tensor a S) (tensor b S))", TypeSort::EcbvVal) ==
        t_lolli(t_tensor(t_base("a"), t_comp("S")), t_tensor(t_base("b"), t_comp("S"))));
  CHECK(parse_type("(osum ozero (tensor unit S))", TypeSort::EcbvComp) ==
        t_osum(t_ozero(), t_tensor(t_unit(), t_comp("S"))));
  CHECK(parse_type("(oprod oone (power a R))", TypeSort::CpsComp) ==
        t_oprod(t_oone(), t_power(t_base("a"), t_comp("R"))));
  CHECK(code_of([] { parse_type("(parr a b)", TypeSort::EcbvVal); }) == "ParseError");
  CHECK(code_of([] { parse_type("(power a R)", TypeSort::EcbvComp); }) == "ParseError");
  CHECK(code_of([] { parse_type("oone", TypeSort::EcbvComp); }) == "ParseError");
  CHECK(code_of([] { parse_type("(tensor a S)", TypeSort::CpsComp); }) == "ParseError");
}

TEST_CASE("type printing round-trips") {
  for (auto* src : {"(parr (sum unit unit) (prod a empty))", "unit", "a",
                    "(prod (sum a b) (parr unit unit))"}) {
    Type t = parse_type(src, TypeSort::FgType);
    CHECK(print_type(t) == src);
  }
  std::string lo = "(lolli (tensor (prod a b) S) (tensor unit S))";
  CHECK(print_type(parse_type(lo, TypeSort::EcbvVal)) == lo);
  std::string po = "(lolli (power b R) (power a R))";
  CHECK(print_type(parse_type(po, TypeSort::CpsVal)) == po);
}

TEST_CASE("fine-grain terms parse with mode inference") {
  ParsedTerm v = parse_term("(lam (x (sum unit unit)) (return x))", TermFamily::Fg);
  CHECK(v.mode == Mode::Value);
  CHECK(v.term.tag == TermTag::Lam);
  ParsedTerm p = parse_term("(let (x (geff deref star)) (return x))", TermFamily::Fg);
  CHECK(p.mode == Mode::Producer);
  CHECK(p.term.tag == TermTag::Let);
  CHECK(p.term.kids[0].tag == TermTag::Geff);
  ParsedTerm w = parse_term("(app (lam (x a) (return x)) y)", TermFamily::Fg);
  CHECK(w.mode == Mode::Producer);
}

TEST_CASE("producer-mode sum forms expand to their derived core forms") {
  // in_i^p(M) = let x = M in return (in_i x)
  ParsedTerm p = parse_term("(inl unit (geff deref star))", TermFamily::Fg);
  CHECK(p.mode == Mode::Producer);
  REQUIRE(p.term.tag == TermTag::Let);
  CHECK(p.term.kids[0].tag == TermTag::Geff);
  const Term& ret = p.term.kids[1];
  REQUIRE(ret.tag == TermTag::Return);
  CHECK(ret.kids[0].tag == TermTag::Inl);
  CHECK(ret.kids[0].kids[0].name == p.term.name);

  // case^p M of (x1. N1 | x2. N2) = let z = M in (case z of (xi. lam w:1. Ni)) star
  ParsedTerm c = parse_term(
      "(case (geff deref star) (x1 (return star)) (x2 (geff flip star)))", TermFamily::Fg);
  CHECK(c.mode == Mode::Producer);
  REQUIRE(c.term.tag == TermTag::Let);
  const Term& app = c.term.kids[1];
  REQUIRE(app.tag == TermTag::App);
  CHECK(app.kids[1].tag == TermTag::Star);
  const Term& cs = app.kids[0];
  REQUIRE(cs.tag == TermTag::Case);
  CHECK(cs.kids[0].name == c.term.name);
  CHECK(cs.kids[1].tag == TermTag::Lam);
  CHECK(cs.kids[1].ann[0] == t_unit());
  CHECK(cs.kids[2].kids[0].tag == TermTag::Geff);

  // absurd^p
  ParsedTerm a = parse_term("(absurd unit (geff deref star))", TermFamily::Fg);
  CHECK(a.mode == Mode::Producer);
  REQUIRE(a.term.tag == TermTag::Let);
  CHECK(a.term.kids[1].kids[0].tag == TermTag::Absurd);

  // mixed modes are rejected rather than silently coerced
  CHECK(code_of([] {
          parse_term("(case x (x1 (return star)) (x2 star))", TermFamily::Fg);
        }) == "ParseError");
}

TEST_CASE("expansion binders avoid names present in the source") {
  ParsedTerm c = parse_term(
      "(case (geff deref star) (z (return z)) (x (let (w (geff flip star)) (return x))))",
      TermFamily::Fg);
  REQUIRE(c.term.tag == TermTag::Let);
  CHECK(c.term.name != "z");
  CHECK(c.term.name != "x");
  CHECK(c.term.name != "w");
  const Term& cs = c.term.kids[1].kids[0];
  CHECK(cs.kids[1].name != "w");
  CHECK(cs.kids[1].name != "z");
}

TEST_CASE("enriched terms parse with linear variables") {
  ParsedTerm id = parse_term("(llam (z S) z)", TermFamily::Ecbv);
  CHECK(id.mode == Mode::Value);
  CHECK(id.term.kids[0].kind == VarKind::Linear);
  ParsedTerm t = parse_term("(lettens (x s z) (tens x s))", TermFamily::Ecbv);
  CHECK(t.mode == Mode::Computation);
  CHECK(t.term.kids[0].kind == VarKind::Linear);
  CHECK(t.term.kids[1].tag == TermTag::Tens);
  CHECK(t.term.kids[1].kids[0].kind == VarKind::Value);
  ParsedTerm oc = parse_term("(ocase z (z1 (oinr (tensor a S) z1)) (z2 z2))", TermFamily::Ecbv);
  CHECK(oc.mode == Mode::Computation);
  CHECK(oc.term.kids[1].ann[0] == t_tensor(t_base("a"), t_comp("S")));
  // snapback-style reuse of a linear variable is a typing error, not a parse error
  CHECK_NOTHROW(parse_term("(lettens (x s z) (lettens (y t z) (tens y t)))", TermFamily::Ecbv));
}

TEST_CASE("cps terms parse plam and papp") {
  ParsedTerm t = parse_term("(llam (k (power a R)) (plam (x a) (papp k x)))", TermFamily::Cps);
  CHECK(t.mode == Mode::Value);
  const Term& pl = t.term.kids[0];
  REQUIRE(pl.tag == TermTag::Plam);
  CHECK(pl.kids[0].tag == TermTag::Papp);
  CHECK(pl.kids[0].kids[0].kind == VarKind::Linear);
  CHECK(pl.kids[0].kids[1].kind == VarKind::Value);
  CHECK(code_of([] { parse_term("(tens x z)", TermFamily::Cps); }) == "ParseError");
  CHECK(code_of([] { parse_term("(plam (x a) (papp k x))", TermFamily::Ecbv); }) == "ParseError");
}

TEST_CASE("shadowing is rejected at parse time") {
  CHECK(code_of([] {
          parse_term("(lam (x unit) (let (x (return star)) (return x)))", TermFamily::Fg);
        }) == "ParseError");
  CHECK(code_of([] {
          parse_term("(llam (z S) (lettens (x z z) (tens x z)))", TermFamily::Ecbv);
        }) == "ParseError");
}

TEST_CASE("fragment mode excludes higher-order forms but keeps derived sums") {
  CHECK_NOTHROW(parse_term("(case (geff deref star) (x1 (return star)) (x2 (return star)))",
                           TermFamily::Fg, true));
  CHECK(code_of([] {
          parse_term("(lam (x unit) (return x))", TermFamily::Fg, true);
        }) == "FragmentViolation");
  CHECK(code_of([] {
          parse_term("(app f x)", TermFamily::Fg, true);
        }) == "FragmentViolation");
}

TEST_CASE("terms round-trip through the printer") {
  for (auto* src : {
           "(lam (x (sum unit unit)) (return x))",
           "(let (x (geff deref star)) (let (y (geff deref star)) (return (pair x y))))",
           "(case v (x1 (inl unit x1)) (x2 (inr unit x2)))",
           "(absurd (prod a b) v)",
           "(const f (fst p) (snd p))",
           "(app (lam (x a) (geff write x)) (const c0))",
       })
    roundtrip(src, TermFamily::Fg);
  for (auto* src : {
           "(llam (z S) z)",
           "(llam (z (tensor (sum unit unit) S)) (lettens (x s z) (tens x s)))",
           "(ocase z (z1 (oinr ozero z1)) (z2 (oabsurd (tensor unit S) z2)))",
           "(lapp (sacc write) (tens x s))",
       })
    roundtrip(src, TermFamily::Ecbv);
  for (auto* src : {
           "(llam (k (power a R)) (plam (x a) (papp k x)))",
           "(lapp (sacc read) k)",
           "(papp (lapp (sacc read) k) star)",
       })
    roundtrip(src, TermFamily::Cps);
}
