#include "doctest.h"
#include "linstate/syntax.hpp"

using namespace linstate;

TEST_CASE("alpha equivalence identifies renamed binders") {
  Term a = m_lam("x", t_unit(), m_return(v_var("x")));
  Term b = m_lam("y", t_unit(), m_return(v_var("y")));
  CHECK(alpha_eq(a, b));
  Term c = m_lam("y", t_base("b"), m_return(v_var("y")));
  CHECK_FALSE(alpha_eq(a, c));  // annotation differs
}

TEST_CASE("alpha equivalence distinguishes free variables") {
  CHECK(alpha_eq(v_var("x"), v_var("x")));
  CHECK_FALSE(alpha_eq(v_var("x"), v_var("y")));
  CHECK_FALSE(alpha_eq(v_var("x"), l_var("x")));  // value vs linear
  Term a = m_lam("x", t_unit(), m_return(v_var("y")));
  Term b = m_lam("x", t_unit(), m_return(v_var("z")));
  CHECK_FALSE(alpha_eq(a, b));
}

TEST_CASE("alpha equivalence on binders that swap positions") {
  Term a = m_lettens("x", "z", l_var("w"), m_tens(v_var("x"), l_var("z")));
  Term b = m_lettens("u", "v", l_var("w"), m_tens(v_var("u"), l_var("v")));
  Term c = m_lettens("u", "v", l_var("w"), m_tens(v_var("u"), l_var("w")));
  CHECK(alpha_eq(a, b));
  CHECK_FALSE(alpha_eq(a, c));
}

TEST_CASE("free variables respect binding structure") {
  Term t = m_let("x", m_return(v_var("y")), m_app(v_var("x"), v_var("z")));
  auto fv = free_vars(t);
  CHECK(fv == std::set<std::string>{"y", "z"});
  Term u = m_case(v_var("v"), "a", v_var("a"), "b", v_var("c"));
  CHECK(free_vars(u) == std::set<std::string>{"v", "c"});
}

TEST_CASE("count_free counts occurrences under shadowing") {
  Term u = m_pair(v_var("x"), m_fst(v_var("x")));
  CHECK(count_free(u, "x") == 2);
  Term sh = m_lam("x", t_unit(), m_return(v_var("x")));
  CHECK(count_free(sh, "x") == 0);
}

TEST_CASE("substitution avoids capture by freshening binders") {
  // (lam y. return (pair x y))[x := y]  must not capture y
  Term body = m_lam("y", t_unit(), m_return(m_pair(v_var("x"), v_var("y"))));
  Term out = substitute(body, "x", v_var("y"), VarKind::Value);
  CHECK(out.tag == TermTag::Lam);
  CHECK(out.name != "y");
  const Term& ret = out.kids[0];
  CHECK(ret.kids[0].kids[0].name == "y");        // substituted occurrence stays free
  CHECK(ret.kids[0].kids[1].name == out.name);   // bound occurrence renamed with binder
}

TEST_CASE("substituting for an absent linear variable is rejected") {
  Term t = m_tens(v_var("x"), l_var("z"));
  CHECK_NOTHROW(substitute(t, "z", l_var("s"), VarKind::Linear));
  Term pure = m_tens(v_var("x"), l_var("w"));
  std::string code;
  try {
    substitute(pure, "z", l_var("s"), VarKind::Linear);
  } catch (const Error& e) {
    code = e.code;
  }
  CHECK(code == "LinearityViolation");
}

TEST_CASE("substitution distinguishes value and linear namespaces") {
  Term t = m_tens(v_var("z"), l_var("z"));
  Term out = substitute(t, "z", v_var("v"), VarKind::Value);
  CHECK(out.kids[0].name == "v");
  CHECK(out.kids[1].name == "z");
  CHECK(out.kids[1].kind == VarKind::Linear);
}

TEST_CASE("name supply avoids everything it is told about") {
  NameSupply ns({"x", "x1", "x2"});
  std::string a = ns.fresh("x");
  std::string b = ns.fresh("x");
  CHECK(a != b);
  CHECK(a != "x");
  CHECK(a != "x1");
  CHECK(a != "x2");
}

TEST_CASE("well-formedness separates the three type languages") {
  CHECK(wf_type(t_parr(t_unit(), t_unit()), TypeSort::FgType));
  CHECK_FALSE(wf_type(t_parr(t_unit(), t_unit()), TypeSort::EcbvVal));
  Type lo = t_lolli(t_tensor(t_base("a"), t_comp("S")), t_comp("S"));
  CHECK(wf_type(lo, TypeSort::EcbvVal));
  CHECK_FALSE(wf_type(lo, TypeSort::FgType));
  // stratification: no tensor of two computations, no nested lolli on the left of tensor
  Type bad = t_tensor(t_base("a"), t_prod(t_unit(), t_unit()));
  CHECK_FALSE(wf_type(bad, TypeSort::EcbvComp));
  CHECK(wf_type(t_power(t_base("a"), t_comp("R")), TypeSort::CpsComp));
  CHECK_FALSE(wf_type(t_power(t_base("a"), t_comp("R")), TypeSort::EcbvComp));
  CHECK(wf_type(t_oprod(t_oone(), t_comp("R")), TypeSort::CpsComp));
  CHECK_FALSE(wf_type(t_osum(t_ozero(), t_comp("S")), TypeSort::CpsComp));
}
