#include <functional>

#include "doctest.h"
#include "linstate/typecheck.hpp"

using namespace linstate;

namespace {

Signature test_sig() {
  Signature sig;
  Type two = t_sum(t_unit(), t_unit());
  sig.effects["deref"] = EffectSig{{t_unit()}, {{}, {}}};
  sig.effects["flip"] = EffectSig{{t_unit()}, {{}}};
  sig.effects["read"] = EffectSig{{t_unit()}, {{t_base("val")}}};
  sig.effects["write"] = EffectSig{{t_base("val")}, {{}}};
  sig.consts["c0"] = ConstSig{{}, t_base("val")};
  sig.consts["f"] = ConstSig{{t_base("val"), t_base("val")}, t_base("val")};
  (void)two;
  return sig;
}

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  return "";
}

Judgement jfg(const std::string& src, const ValueCtx& ctx = {}) {
  return check_fg(test_sig(), ctx, parse_term(src, TermFamily::Fg).term);
}

Judgement jec(const std::string& src, const ValueCtx& ctx = {},
              const std::optional<LinearVar>& lin = std::nullopt) {
  return check_ecbv(test_sig(), ctx, lin, parse_term(src, TermFamily::Ecbv).term);
}

Judgement jcps(const std::string& src, const ValueCtx& ctx = {},
               const std::optional<LinearVar>& lin = std::nullopt) {
  return check_cps(test_sig(), ctx, lin, parse_term(src, TermFamily::Cps).term);
}

}  // namespace

TEST_CASE("effect arities tuple into first-order types") {
  EffectSig e{{t_base("a"), t_base("b"), t_base("c")}, {{}, {t_base("a")}}};
  CHECK(e.param_type() == t_prod(t_base("a"), t_prod(t_base("b"), t_base("c"))));
  CHECK(e.result_type() == t_sum(t_unit(), t_base("a")));
  EffectSig n{{}, {{t_base("a"), t_base("b")}}};
  CHECK(n.param_type() == t_unit());
  CHECK(n.result_type() == t_prod(t_base("a"), t_base("b")));
}

TEST_CASE("fine-grain values and producers") {
  Judgement j = jfg("(lam (x (sum unit unit)) (return x))");
  CHECK(j.mode == Mode::Value);
  CHECK(j.type == t_parr(t_sum(t_unit(), t_unit()), t_sum(t_unit(), t_unit())));

  j = jfg("(let (x (geff deref star)) (return x))");
  CHECK(j.mode == Mode::Producer);
  CHECK(j.type == t_sum(t_unit(), t_unit()));

  j = jfg("(app (lam (x val) (geff write x)) (const c0))");
  CHECK(j.mode == Mode::Producer);
  CHECK(j.type == t_unit());

  j = jfg("(case v (x1 (inl unit x1)) (x2 (inr unit x2)))",
          {{"v", t_sum(t_unit(), t_unit())}});
  CHECK(j.mode == Mode::Value);
  CHECK(j.type == t_sum(t_unit(), t_unit()));

  j = jfg("(const f (const c0) y)", {{"y", t_base("val")}});
  CHECK(j.type == t_base("val"));
}

TEST_CASE("fine-grain type errors carry diagnostic codes") {
  CHECK(code_of([] { jfg("(return x)"); }) == "TypeError");
  CHECK(code_of([] { jfg("(app x star)", {{"x", t_unit()}}); }) == "TypeError");
  CHECK(code_of([] { jfg("(geff deref star star)"); }) == "TypeError");
  CHECK(code_of([] { jfg("(geff write star)"); }) == "TypeError");
  CHECK(code_of([] { jfg("(geff poke star)"); }) == "UnknownEffect");
  CHECK(code_of([] { jfg("(const g)"); }) == "UnknownConstant");
  CHECK(code_of([] {
          jfg("(case v (x1 star) (x2 (pair star star)))", {{"v", t_sum(t_unit(), t_unit())}});
        }) == "TypeError");
  CHECK(code_of([] { jfg("(fst star)"); }) == "TypeError");
}

TEST_CASE("enriched linear identity and state shuffling") {
  Judgement j = jec("(llam (z S) z)");
  CHECK(j.mode == Mode::Value);
  CHECK(j.type == t_lolli(t_comp("S"), t_comp("S")));

  j = jec("(llam (z (tensor a S)) (lettens (x s z) (tens x s)))");
  CHECK(j.type == t_lolli(t_tensor(t_base("a"), t_comp("S")),
                          t_tensor(t_base("a"), t_comp("S"))));

  j = jec("(tens x z)", {{"x", t_base("a")}}, LinearVar{"z", t_comp("S")});
  CHECK(j.mode == Mode::Computation);
  CHECK(j.type == t_tensor(t_base("a"), t_comp("S")));

  j = jec("(ocase z (z1 (oinr S z1)) (z2 (oinl S z2)))", {},
          LinearVar{"z", t_osum(t_comp("S"), t_comp("S"))});
  CHECK(j.type == t_osum(t_comp("S"), t_comp("S")));
}

TEST_CASE("state access constants have their translation types") {
  Type two = t_sum(t_unit(), t_unit());
  Judgement j = jec("(sacc deref)");
  CHECK(j.type == t_lolli(t_tensor(t_unit(), t_comp("S")), t_tensor(two, t_comp("S"))));
  j = jec("(sacc write)");
  CHECK(j.type ==
        t_lolli(t_tensor(t_base("val"), t_comp("S")), t_tensor(t_unit(), t_comp("S"))));
  j = jcps("(sacc read)");
  CHECK(j.type ==
        t_lolli(t_power(t_base("val"), t_comp("R")), t_power(t_unit(), t_comp("R"))));
}

TEST_CASE("linearity violations are rejected") {
  // the snapback candidate reuses a consumed linear variable
  CHECK(code_of([] {
          jec("(llam (z (tensor a S)) (lettens (x s z) (lettens (y t z) (tens y t))))");
        }) == "LinearityViolation");
  // a linear variable cannot sit in a value position
  CHECK(code_of([] {
          jec("(llam (z S) (tens z z))");
        }) == "LinearityViolation");
  // discarding the linear variable leaves a non-linear leaf
  CHECK(code_of([] {
          jec("(llam (z S) s)");
        }) == "LinearityViolation");
  // a value judgement has no linear context
  CHECK(code_of([] {
          jec("star", {}, LinearVar{"z", t_comp("S")});
        }) == "LinearityViolation");
  // computations need a linear variable
  CHECK(code_of([] { jec("(tens star z)"); }) == "LinearityViolation");
}

TEST_CASE("language families do not mix") {
  CHECK(code_of([] { jfg("(lam (x unit) (return x))", {}); }) == "");
  Term tens = m_tens(m_star(), l_var("z"));
  CHECK(code_of([&] {
          check_cps(test_sig(), {}, LinearVar{"z", t_comp("R")}, tens);
        }) == "TypeError");
  Term plam = m_plam("x", t_base("a"), l_var("z"));
  CHECK(code_of([&] {
          check_ecbv(test_sig(), {}, LinearVar{"z", t_comp("S")}, plam);
        }) == "TypeError");
  Term lam = m_lam("x", t_unit(), m_return(v_var("x")));
  CHECK(code_of([&] { check_ecbv(test_sig(), {}, std::nullopt, lam); }) == "TypeError");
}

TEST_CASE("cps computations") {
  Judgement j = jcps("(llam (k (power a R)) (plam (x a) (papp k x)))");
  CHECK(j.type == t_lolli(t_power(t_base("a"), t_comp("R")),
                          t_power(t_base("a"), t_comp("R"))));
  j = jcps("(papp (lapp (sacc read) k) star)", {},
           LinearVar{"k", t_power(t_base("val"), t_comp("R"))});
  CHECK(j.mode == Mode::Computation);
  CHECK(j.type == t_comp("R"));
  CHECK(code_of([] {
          jcps("(papp k star)", {}, LinearVar{"k", t_power(t_base("a"), t_comp("R"))});
        }) == "TypeError");
}

TEST_CASE("declared sorts restrict base types when requested") {
  Signature sig = test_sig();
  sig.restrict_sorts = true;
  sig.sorts = {"val"};
  Term ok = parse_term("(lam (x val) (return x))", TermFamily::Fg).term;
  CHECK_NOTHROW(check_fg(sig, {}, ok));
  Term bad = parse_term("(lam (x other) (return x))", TermFamily::Fg).term;
  CHECK(code_of([&] { check_fg(sig, {}, bad); }) == "TypeError");
}
