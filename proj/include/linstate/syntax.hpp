#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace linstate {

// One Type tree and one Term tree serve all three term families
// (fine-grain call-by-value, enriched call-by-value, CPS variant).
// Family discipline is enforced by the well-formedness checks and the
// typecheckers, not by the representation.

enum class Family { Fg, Ecbv, Cps };

enum class TypeTag {
  Base,       // named value type constant
  Unit,
  Prod,       // kids: {left, right}
  Parr,       // FG partial arrow, kids: {arg, result}
  Empty,
  Sum,        // kids: {left, right}
  Lolli,      // value type, kids: {comp dom, comp cod}
  CompConst,  // named computation constant (state S, return R, user)
  Tensor,     // kids: {value, comp}
  OZero,
  OSum,       // kids: {comp, comp}
  Power,      // kids: {value, comp}
  OOne,
  OProd,      // kids: {comp, comp}
};

struct Type {
  TypeTag tag = TypeTag::Unit;
  std::string name;        // Base, CompConst
  std::vector<Type> kids;

  bool operator==(const Type& o) const;
  bool operator!=(const Type& o) const { return !(*this == o); }
};

// Factories.
Type t_base(const std::string& n);
Type t_unit();
Type t_prod(Type a, Type b);
Type t_parr(Type a, Type b);
Type t_empty();
Type t_sum(Type a, Type b);
Type t_lolli(Type c, Type d);
Type t_comp(const std::string& n);
Type t_tensor(Type a, Type c);
Type t_ozero();
Type t_osum(Type c, Type d);
Type t_power(Type a, Type c);
Type t_oone();
Type t_oprod(Type c, Type d);

// Total order usable as a map key. Types contain no binders.
bool type_less(const Type& a, const Type& b);

// Structural well-formedness per family. Value/computation strata are
// exactly the grammars; names are not resolved here.
enum class TypeSort { FgType, EcbvVal, EcbvComp, CpsVal, CpsComp };
bool wf_type(const Type& t, TypeSort sort);

enum class TermTag {
  Var,
  Star,
  Pair,     // kids {t, u}
  Fst,      // kids {t}
  Snd,      // kids {t}
  Lam,      // name binder, ann[0] arg type, kids {producer body}
  App,      // kids {V, W}
  Return,   // kids {V}
  Let,      // name binder, kids {M, N}
  Inl,      // ann[0] = other summand type, kids {V}
  Inr,      // ann[0] = other summand type, kids {V}
  Case,     // binders {x1, x2}, kids {V, W1, W2}
  Absurd,   // ann[0] = result type, kids {V}
  Const,    // name = value-theory constant, kids = value args
  Geff,     // name = effect constant, kids = value args
  Llam,     // name = linear binder, ann[0] = comp type, kids {comp body}
  Lapp,     // kids {value fn, comp arg}
  Tens,     // kids {value, comp}
  Lettens,  // binders {x, z}, kids {comp t, comp u}
  Oinl,     // ann[0] = other summand comp type, kids {comp}
  Oinr,     // ann[0] = other summand comp type, kids {comp}
  Ocase,    // binders {z1, z2}, kids {comp t, comp u1, comp u2}
  Oabsurd,  // ann[0] = result comp type, kids {comp}
  Plam,     // name = value binder, ann[0] = value type, kids {comp body}
  Papp,     // kids {comp t, value u}
  Sacc,     // name = effect constant
};

enum class VarKind { Value, Linear };

struct Term {
  TermTag tag = TermTag::Star;
  VarKind kind = VarKind::Value;     // Var only
  std::string name;                  // Var / binder / constant name
  std::vector<std::string> binders;  // Case, Lettens, Ocase
  std::vector<Type> ann;             // 0 or 1 entries
  std::vector<Term> kids;
  int line = 0, col = 0;
};

// Factories.
Term v_var(const std::string& n);
Term l_var(const std::string& n);
Term m_star();
Term m_pair(Term a, Term b);
Term m_fst(Term t);
Term m_snd(Term t);
Term m_lam(const std::string& x, Type ty, Term body);
Term m_app(Term f, Term a);
Term m_return(Term v);
Term m_let(const std::string& x, Term m, Term n);
Term m_inl(Type other, Term v);
Term m_inr(Type other, Term v);
Term m_case(Term v, const std::string& x1, Term w1, const std::string& x2, Term w2);
Term m_absurd(Type res, Term v);
Term m_const(const std::string& f, std::vector<Term> args);
Term m_geff(const std::string& e, std::vector<Term> args);
Term m_llam(const std::string& z, Type ty, Term body);
Term m_lapp(Term f, Term t);
Term m_tens(Term v, Term t);
Term m_lettens(const std::string& x, const std::string& z, Term t, Term u);
Term m_oinl(Type other, Term t);
Term m_oinr(Type other, Term t);
Term m_ocase(Term t, const std::string& z1, Term u1, const std::string& z2, Term u2);
Term m_oabsurd(Type res, Term t);
Term m_plam(const std::string& x, Type ty, Term body);
Term m_papp(Term t, Term u);
Term m_sacc(const std::string& e);

// Diagnostics: every user-visible failure carries a stable code plus a
// message and, when known, a source location.
struct Error : std::runtime_error {
  std::string code;
  int line = 0, col = 0;
  Error(std::string c, const std::string& msg, int ln = 0, int co = 0)
      : std::runtime_error(msg), code(std::move(c)), line(ln), col(co) {}
};

// Binding structure. Binder occurrences per tag:
//   Lam/Let/Llam/Plam bind `name` in the last kid;
//   Case binds binders[0] in kids[1] and binders[1] in kids[2];
//   Lettens binds binders[0] and binders[1] in kids[1];
//   Ocase binds binders[0] in kids[1] and binders[1] in kids[2].
// Value and linear variables share one name space for capture purposes.

std::set<std::string> free_vars(const Term& t);
// Occurrences of `name` free in t (any kind), shadow-aware.
int count_free(const Term& t, const std::string& name);
// All names occurring anywhere (free, bound, binders) — avoid-set builder.
std::set<std::string> all_names(const Term& t);

bool alpha_eq(const Term& a, const Term& b);

// Capture-avoiding substitution of `replacement` for the variable
// `var` of kind `kind`. For kind=Linear the variable must occur (a
// linear variable stands for exactly one hole).
Term substitute(const Term& target, const std::string& var, const Term& replacement,
                VarKind kind);

// True when the node forms a computation judgement (enriched or cps); a
// variable counts by its kind. Fine-grain producers use producer_form.
bool computation_form(const Term& t);
// True for the fine-grain producer forms (return, let, app, geff).
bool producer_form(const Term& t);

// Fresh-name supply. Never returns a name in `avoid`; returned names are
// remembered so later calls stay distinct.
struct NameSupply {
  std::set<std::string> avoid;
  int counter = 0;
  explicit NameSupply(std::set<std::string> init = {}) : avoid(std::move(init)) {}
  std::string fresh(const std::string& base);
};

}  // namespace linstate
