#pragma once

#include "linstate/models.hpp"

namespace linstate {

struct TheoryEq {
  std::string label;
  ValueCtx ctx;
  Term lhs, rhs;
  Type type;
  Mode mode = Mode::Producer;
};

// A value theory plus effect constants and equations between producers in the
// first-order fragment (no function types, no lambdas).
struct EffectTheory {
  std::string name;
  Signature sig;
  std::vector<TheoryEq> equations;        // producer equations
  std::vector<TheoryEq> value_equations;  // constant laws; not checkable against comodels
};

EffectTheory load_theory(const SExpr& s);
EffectTheory load_theory_text(const std::string& src, const std::string& name = "");

// Builtin specs: bit-store | global-store[:<n>] | printing | mean-value.
bool is_builtin_theory(const std::string& spec);
EffectTheory builtin_theory(const std::string& spec);
// The canonical carrier for a builtin: two-element bit store, |Val|-element
// global store, the free monoid writer, or the dyadic-distribution reading.
Model canonical_model(const std::string& spec);

// Comodel candidate files:
//   (comodel (model set|dyadic) (state n) (sort name n)*
//     (op name (IN OUT)*)*)
// IN = (argElem stateElem); OUT = (resElem stateElem)
//   or (dist ((resElem stateElem) num den)*).
Model load_comodel(const SExpr& s, const EffectTheory& th);
Model load_comodel_text(const std::string& src, const EffectTheory& th);

// Element literals: star | <int> | (pair e e) | (inl e) | (inr e).
Element element_of_sexpr(const SExpr& s);

struct ComodelEqReport {
  std::string label;
  bool pass = false;
  std::string counterexample;
};
struct ComodelReport {
  bool ok = true;
  std::vector<ComodelEqReport> equations;
};

// Interprets both sides of every theory equation through the state-passing
// translation in the candidate and compares them as morphisms, exhaustively
// over environments and carrier elements.
ComodelReport check_comodel(const EffectTheory& th, const Model& candidate);

// The same equations read in the Kleisli category: both sides evaluated by the
// monadic producer semantics with effects bound through sacc_to_geff.
ComodelReport kleisli_equations_hold(const EffectTheory& th, const Model& candidate);

// State access for effect e in a model: element of [[P (x) S]] -> M [[Q (x) S]].
Morphism sacc_morphism(const Model& m, const EffectTheory& th, const std::string& effect);

// Currying along the copower adjunction: f : P (x) S -> Q (x) S gives the
// generic effect g : P -> T Q with g(p) = s |-> f(p, s), and back.
Morphism sacc_to_geff(const Model& m, const EffectSig& e, const Morphism& f);
Morphism geff_to_sacc(const Model& m, const EffectSig& e, const Morphism& g);

// Splits an element of the encoded summand type into (row index, row tuple).
std::pair<int, Element> decode_sum(const Element& q, int n);

// Splits an element of the tupled context type into per-variable bindings.
void decode_env(const ValueCtx& ctx, const Element& tup, EvalEnv& env);

// The algebraic operation at object X induced by a state access:
// handlers h_i : [[A_i]] -> U(X) with U(X) = C(S, X) map to [[B]] -> U(X).
std::function<Element(const std::vector<Element>&)> algop_from_sacc(const Model& m,
                                                                    const EffectSig& e,
                                                                    const Morphism& f,
                                                                    const Type& x);

}  // namespace linstate
