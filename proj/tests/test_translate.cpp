#include <functional>

#include "doctest.h"
#include "linstate/translate.hpp"

using namespace linstate;

namespace {

Signature test_sig() {
  Signature sig;
  sig.effects["deref"] = EffectSig{{t_unit()}, {{}, {}}};
  sig.effects["flip"] = EffectSig{{t_unit()}, {{}}};
  sig.effects["read"] = EffectSig{{t_unit()}, {{t_base("val")}}};
  sig.effects["write"] = EffectSig{{t_base("val")}, {{}}};
  sig.effects["swap2"] = EffectSig{{t_base("val"), t_base("val")}, {{t_base("val")}}};
  sig.consts["c0"] = ConstSig{{}, t_base("val")};
  return sig;
}

Term fg(const std::string& src) { return parse_term(src, TermFamily::Fg).term; }
Term ec(const std::string& src) { return parse_term(src, TermFamily::Ecbv).term; }

// dualize(sps(t)) must match cps(t) once the state variable is renamed to the
// continuation variable.
void check_duality_square(const std::string& src, const ValueCtx& ctx) {
  Signature sig = test_sig();
  Term t = fg(src);
  Judgement j = check_fg(sig, ctx, t);
  Term sps = sps_term(t, "s");
  Term cps = cps_term(sig, ctx, t, "k");
  std::optional<LinearVar> lin;
  if (j.mode == Mode::Producer) lin = LinearVar{"s", t_comp("S")};
  Term dual = dualize(sig, sps_ctx(ctx), lin, sps);
  if (j.mode == Mode::Producer) dual = substitute(dual, "s", l_var("k"), VarKind::Linear);
  CHECK(alpha_eq(dual, cps));
}

void check_sps_types(const std::string& src, const ValueCtx& ctx) {
  Signature sig = test_sig();
  Term t = fg(src);
  Judgement j = check_fg(sig, ctx, t);
  Term sps = sps_term(t, "s");
  if (j.mode == Mode::Producer) {
    Judgement js = check_ecbv(sig, sps_ctx(ctx), LinearVar{"s", t_comp("S")}, sps);
    CHECK(js.type == t_tensor(sps_type(j.type), t_comp("S")));
  } else {
    Judgement js = check_ecbv(sig, sps_ctx(ctx), std::nullopt, sps);
    CHECK(js.type == sps_type(j.type));
  }
  Term cps = cps_term(sig, ctx, t, "k");
  if (j.mode == Mode::Producer) {
    Judgement jc = check_cps(sig, cps_ctx(ctx),
                             LinearVar{"k", t_power(cps_type(j.type), t_comp("R"))}, cps);
    CHECK(jc.type == t_comp("R"));
  } else {
    Judgement jc = check_cps(sig, cps_ctx(ctx), std::nullopt, cps);
    CHECK(jc.type == cps_type(j.type));
  }
}

}  // namespace

TEST_CASE("sps translation of types") {
  Type two = t_sum(t_unit(), t_unit());
  CHECK(sps_type(parse_type("(parr (sum unit unit) unit)", TypeSort::FgType)) ==
        t_lolli(t_tensor(two, t_comp("S")), t_tensor(t_unit(), t_comp("S"))));
  CHECK(sps_type(parse_type("(prod a (sum b empty))", TypeSort::FgType)) ==
        parse_type("(prod a (sum b empty))", TypeSort::EcbvVal));
  CHECK(invert_sps_type(sps_type(parse_type("(parr (parr a b) (prod b unit))",
                                            TypeSort::FgType))) ==
        parse_type("(parr (parr a b) (prod b unit))", TypeSort::FgType));
  CHECK(!invert_sps_type(t_tensor(t_base("a"), t_comp("S"))).has_value());
  CHECK(!invert_sps_type(t_lolli(t_comp("S"), t_comp("S"))).has_value());
}

TEST_CASE("sps translation of terms") {
  Term got = sps_term(fg("(lam (x (sum unit unit)) (return x))"));
  Term want = ec("(llam (z (tensor (sum unit unit) S)) (lettens (x s z) (tens x s)))");
  CHECK(alpha_eq(got, want));

  got = sps_term(fg("(let (x (geff deref star)) (return x))"), "s");
  want = ec("(lettens (x s1 (lapp (sacc deref) (tens star s))) (tens x s1))");
  CHECK(alpha_eq(got, want));

  got = sps_term(fg("(app f y)"), "s");
  want = ec("(lapp f (tens y s))");
  CHECK(alpha_eq(got, want));

  got = sps_term(fg("(geff swap2 (const c0) y)"), "s");
  want = ec("(lapp (sacc swap2) (tens (pair (const c0) y) s))");
  CHECK(alpha_eq(got, want));
}

TEST_CASE("cps translation of terms") {
  Signature sig = test_sig();
  Term got = cps_term(sig, {}, fg("(lam (x val) (geff write x))"));
  Term want = parse_term(
      "(llam (k (power unit R)) (plam (x val) (papp (lapp (sacc write) k) x)))",
      TermFamily::Cps).term;
  CHECK(alpha_eq(got, want));

  got = cps_term(sig, {}, fg("(let (x (geff read star)) (geff write x))"), "k");
  want = parse_term(
      "(lapp (llam (k2 (power val R)) (papp (lapp (sacc read) k2) star))"
      " (plam (x val) (papp (lapp (sacc write) k) x)))",
      TermFamily::Cps).term;
  CHECK(alpha_eq(got, want));
}

TEST_CASE("translations preserve typing") {
  ValueCtx ctx = {{"f", t_parr(t_base("val"), t_base("val"))}, {"y", t_base("val")}};
  for (auto* src : {
           "(return star)",
           "(app f y)",
           "(lam (x (sum unit unit)) (case (return x) (a (geff flip star)) (b (return star))))",
           "(let (x (geff read star)) (let (u (app f x)) (geff write u)))",
           "(geff swap2 y y)",
           "(lam (p (prod val val)) (geff swap2 (fst p) (snd p)))",
           "(inl unit (geff deref star))",
           "(case (geff deref star) (a (return (pair y a))) (b (return (pair y b))))",
       }) {
    check_sps_types(src, ctx);
    check_duality_square(src, ctx);
  }
}

TEST_CASE("type duality is an involution matching the translations") {
  for (auto* src : {"(parr a b)", "(parr (parr a b) (prod b (sum unit empty)))", "unit",
                    "(prod a (parr unit a))"}) {
    Type t = parse_type(src, TypeSort::FgType);
    CHECK(dual_type_val(sps_type(t)) == cps_type(t));
    CHECK(undual_type_val(cps_type(t)) == sps_type(t));
  }
  Type c = t_osum(t_ozero(), t_tensor(t_base("a"), t_comp("S")));
  CHECK(dual_type_comp(c) == t_oprod(t_oone(), t_power(t_base("a"), t_comp("R"))));
  CHECK(undual_type_comp(dual_type_comp(c)) == c);
}

TEST_CASE("term duality inverts on hand-written enriched terms") {
  Signature sig = test_sig();
  for (auto* src : {
           "(llam (z S) z)",
           "(llam (z (tensor val S)) (lettens (x s z) (lapp (sacc write) (tens x s))))",
           "(llam (z (tensor (sum unit unit) S)) (lettens (x s z) (tens x s)))",
           "(llam (z (tensor val S)) (lettens (x s z) (lettens (y t (lapp (sacc read) "
           "(tens star s))) (tens (pair x y) t))))",
       }) {
    Term t = ec(src);
    Term dual = dualize(sig, {}, std::nullopt, t);
    CHECK_NOTHROW(check_cps(sig, {}, std::nullopt, dual));
    Term back = dualize_inverse(sig, {}, std::nullopt, dual);
    CHECK(alpha_eq(back, t));
  }
  // computations dualize against their linear variable
  Term t = ec("(lettens (x s z) (tens x s))");
  LinearVar lin{"z", t_tensor(t_base("a"), t_comp("S"))};
  Term dual = dualize(sig, {}, lin, t);
  Term want = parse_term("(plam (x a) (papp z x))", TermFamily::Cps).term;
  CHECK(alpha_eq(dual, want));
  Term back = dualize_inverse(sig, {}, LinearVar{"z", dual_type_comp(lin.type)}, dual);
  CHECK(alpha_eq(back, t));
}

TEST_CASE("computation sums fall outside the dualizable fragment") {
  Signature sig = test_sig();
  Term t = ec("(oinl S z)");
  std::string code;
  try {
    dualize(sig, {}, LinearVar{"z", t_comp("S")}, t);
  } catch (const Error& e) {
    code = e.code;
  }
  CHECK(code == "NotInImageFragment");
}

TEST_CASE("type reflection collapses state shapes") {
  CHECK(reflect_type(parse_type("(lolli S S)", TypeSort::EcbvVal)) ==
        parse_type("(parr unit unit)", TypeSort::FgType));
  CHECK(reflect_type(parse_type("(lolli (tensor a (tensor b S)) S)", TypeSort::EcbvVal)) ==
        parse_type("(parr (prod a b) unit)", TypeSort::FgType));
  CHECK(reflect_type(parse_type("(lolli (tensor a S) (tensor b S))", TypeSort::EcbvVal)) ==
        parse_type("(parr a b)", TypeSort::FgType));
  std::string code;
  try {
    reflect_type(parse_type("(lolli (tensor a q) S)", TypeSort::EcbvVal));
  } catch (const Error& e) {
    code = e.code;
  }
  CHECK(code == "NotInImageFragment");
}

TEST_CASE("untranslate inverts the state-passing translation on raw images") {
  Signature sig = test_sig();
  ValueCtx ctx = {{"f", t_parr(t_base("val"), t_base("val"))}, {"y", t_base("val")}};
  for (auto* src : {
           "(lam (x (sum unit unit)) (return x))",
           "(let (x (geff deref star)) (return x))",
           "(app f y)",
           "(geff swap2 y y)",
           "(lam (x val) (geff write x))",
           "(let (x (geff read star)) (let (u (app f x)) (geff write u)))",
           "(case v (x1 (inl unit x1)) (x2 (inr unit x2)))",
           "(lam (p (prod val val)) (geff swap2 (fst p) (snd p)))",
       }) {
    Term t = fg(src);
    ParsedTerm back = untranslate(sig, sps_term(t, "s"));
    CHECK(alpha_eq(back.term, t));
  }
}

TEST_CASE("untranslate rejects terms outside the image") {
  Signature sig = test_sig();
  auto code_of = [&](const Term& t) {
    try {
      untranslate(sig, t);
    } catch (const Error& e) {
      return e.code;
    }
    return std::string();
  };
  CHECK(code_of(ec("(oinl S z)")) == "ReadbackIncomplete");
  CHECK(code_of(ec("(llam (z S) z)")) == "ReadbackIncomplete");
  CHECK(code_of(m_inl(t_tensor(t_base("a"), t_comp("S")), m_star())) == "NotInImageFragment");
}
