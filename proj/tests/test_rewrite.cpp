#include <cstdlib>
#include <functional>

#include "doctest.h"
#include "linstate/rewrite.hpp"
#include "linstate/surface.hpp"
#include "linstate/translate.hpp"

using namespace linstate;

namespace {

Term fg(const std::string& src) { return parse_term(src, TermFamily::Fg).term; }
Term ec(const std::string& src) { return parse_term(src, TermFamily::Ecbv).term; }
Term cp(const std::string& src) { return parse_term(src, TermFamily::Cps).term; }

Term norm(const Term& t) { return normalize(t).term; }

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  return "";
}

Signature flip_sig() {
  Signature sig;
  sig.effects["flip"] = EffectSig{{t_unit()}, {{}, {}}};
  return sig;
}

}  // namespace

TEST_CASE("beta rules reach the expected normal forms") {
  CHECK(alpha_eq(norm(fg("(app (lam (x unit) (return x)) star)")), fg("(return star)")));
  CHECK(alpha_eq(norm(fg("(fst (pair star (lam (x unit) (return x))))")), fg("star")));
  CHECK(alpha_eq(norm(fg("(snd (pair f g))")), fg("g")));
  CHECK(alpha_eq(norm(fg("(case (inl unit star) (a (pair a a)) (b b))")), fg("(pair star star)")));
  CHECK(alpha_eq(norm(fg("(case (inr unit star) (a (pair a a)) (b b))")), fg("star")));
  CHECK(alpha_eq(norm(ec("(lapp (llam (z S) z) w)")), l_var("w")));
  CHECK(alpha_eq(norm(ec("(lettens (x s (tens star z)) (tens x s))")), ec("(tens star z)")));
  CHECK(alpha_eq(norm(ec("(ocase (oinl ozero s) (z1 z1) (z2 (oabsurd S z2)))")), l_var("s")));
  CHECK(alpha_eq(norm(cp("(papp (plam (x a) (papp z x)) y)")), cp("(papp z y)")));
}

TEST_CASE("let chain normalizes through assoc, beta, eta") {
  Term t = fg("(let (y (let (x (geff flip star)) (return x))) (return y))");
  NormalizeResult r = normalize(t, -1, true);
  CHECK(alpha_eq(r.term, fg("(geff flip star)")));
  REQUIRE(r.steps.size() == 3);
  CHECK(r.steps[0].rule == "assoc-let");
  CHECK(r.steps[0].path.empty());
  CHECK(r.steps[1].rule == "beta-let");
  CHECK(r.steps[1].path == std::vector<int>{1});
  CHECK(r.steps[2].rule == "eta-let");
  CHECK(alpha_eq(r.steps[2].after, fg("(geff flip star)")));
}

TEST_CASE("value case commutes under projections and case") {
  Term t = fg("(fst (case (inl unit (pair star star)) (a a) (b (pair b b))))");
  CHECK(alpha_eq(norm(t), fg("star")));
  Term nested = fg(
      "(case (case (inl (sum unit unit) star) (a (inl unit a)) (b (inr unit b)))"
      " (p (pair p p)) (q q))");
  CHECK(alpha_eq(norm(nested), fg("(pair star star)")));
}

TEST_CASE("eta contractions") {
  CHECK(alpha_eq(norm(fg("(lam (x unit) (app f x))")), fg("f")));
  CHECK(alpha_eq(norm(ec("(llam (z S) (lapp f z))")), ec("f")));
  CHECK(alpha_eq(norm(ec("(llam (z (tensor a S)) (lettens (x s z) (lapp f (tens x s))))")),
                 ec("f")));
  CHECK(alpha_eq(norm(cp("(plam (x a) (papp z x))")), l_var("z")));
  CHECK(alpha_eq(norm(ec("(lettens (x s (lapp f z)) (tens x s))")), ec("(lapp f z)")));
  // x is consumed by the body, not returned as the pair: no contraction.
  Term stay = ec("(lettens (x s (lapp f z)) (tens star s))");
  CHECK(alpha_eq(norm(stay), stay));
}

TEST_CASE("commuting conversions lift sequencing out of frames") {
  CHECK(alpha_eq(norm(ec("(tens y (lettens (x s z) (tens x s)))")),
                 ec("(lettens (x s z) (tens y (tens x s)))")));
  CHECK(alpha_eq(norm(ec("(lapp f (lettens (x s z) (lapp g (tens x s))))")),
                 ec("(lettens (x s z) (lapp f (lapp g (tens x s))))")));
  CHECK(alpha_eq(norm(ec("(oinl ozero (lettens (x s z) (lapp g (tens x s))))")),
                 ec("(lettens (x s z) (oinl ozero (lapp g (tens x s))))")));
  CHECK(alpha_eq(norm(ec("(ocase (lettens (x s z) (oinl ozero s)) (z1 z1) (z2 z2))")),
                 ec("(lettens (x s z) s)")));
}

TEST_CASE("assoc-let renames the inner binder away from captured names") {
  Term inner = m_let("x", m_return(m_star()), m_return(v_var("x")));
  Term t = m_let("y", inner, m_return(v_var("x")));  // trailing x is free
  Term n = norm(t);
  CHECK(alpha_eq(n, m_return(v_var("x"))));
  CHECK(free_vars(n).count("x") == 1);
}

TEST_CASE("lettens lift renames binders away from the frame's free variables") {
  Term lt = m_lettens("x", "z", l_var("w"), m_tens(v_var("x"), l_var("z")));
  Term t = m_lapp(v_var("x"), lt);  // head x is free and clashes with the binder
  Term expect =
      m_lettens("q", "z", l_var("w"), m_lapp(v_var("x"), m_tens(v_var("q"), l_var("z"))));
  CHECK(alpha_eq(norm(t), expect));
}

TEST_CASE("fuel limits the number of rewrites") {
  Term t = fg("(let (y (let (x (geff flip star)) (return x))) (return y))");
  CHECK(code_of([&] { normalize(t, 2); }) == "FuelExhausted");
  CHECK(code_of([&] { normalize(t, 3); }) == "");
  ::setenv("LINSTATE_FUEL", "7", 1);
  CHECK(default_fuel() == 7);
  ::unsetenv("LINSTATE_FUEL");
  CHECK(default_fuel() == 10000);
}

TEST_CASE("normalization commutes with the state-passing translation") {
  Signature sig = flip_sig();
  Term m = parse_term("(let (x (return star)) (geff flip x))", TermFamily::Fg).term;
  Term image = norm(sps_term(m));
  ParsedTerm back = untranslate(sig, image);
  CHECK(back.mode == Mode::Producer);
  CHECK(alpha_eq(back.term, norm(m)));
}

TEST_CASE("contracted state accesses read back as lambdas") {
  Signature sig = flip_sig();
  Term m = fg("(lam (x unit) (geff flip x))");
  Term image = norm(sps_term(m));
  CHECK(image.tag == TermTag::Sacc);  // the split-and-apply wrapper contracts away
  ParsedTerm back = untranslate(sig, image);
  CHECK(back.mode == Mode::Value);
  CHECK(alpha_eq(back.term, norm(m)));
}

TEST_CASE("syntactic equality phase") {
  SUBCASE("beta-convertible terms are equal") {
    EqResult r = syntactic_eq({}, std::nullopt, fg("(let (x (return star)) (return x))"),
                              fg("(return star)"));
    CHECK(r.verdict == Verdict::Equal);
  }
  SUBCASE("eta instance over a state access") {
    EqResult r = syntactic_eq({}, std::nullopt,
                              cp("(llam (z (power unit R)) (lapp (sacc flip) z))"),
                              cp("(sacc flip)"));
    CHECK(r.verdict == Verdict::Equal);
  }
  SUBCASE("effect equations are not decided syntactically") {
    Term a = fg("(let (p (geff flip star)) (let (q (geff flip star)) (return star)))");
    Term b = fg("(return star)");
    CHECK(syntactic_eq({}, std::nullopt, a, b).verdict == Verdict::Unknown);
  }
  SUBCASE("uninhabited context collapses everything") {
    ValueCtx ctx{{"v", t_empty()}};
    EqResult r = syntactic_eq(ctx, std::nullopt, fg("(return (inl unit v))"),
                              fg("(return (inr unit v))"));
    CHECK(r.verdict == Verdict::Equal);
    ValueCtx ctx2{{"v", t_prod(t_base("b"), t_empty())}};
    CHECK(void_context(ctx2, std::nullopt));
    CHECK(void_context({}, LinearVar{"z", t_tensor(t_empty(), t_comp("S"))}));
    CHECK(!void_context({}, LinearVar{"z", t_tensor(t_base("b"), t_comp("S"))}));
  }
}
