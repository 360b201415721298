#pragma once

#include <functional>
#include <map>
#include <optional>

#include "linstate/typecheck.hpp"

namespace linstate {

// Exact dyadic rational: den is a power of two, num/den in lowest terms.
struct Rational {
  long long num = 0;
  long long den = 1;
  Rational() = default;
  Rational(long long n, long long d);
  Rational operator+(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;
  std::string show() const;
};

enum class ElemTag { Unit, Int, Str, Pair, Inl, Inr, Table, Dist, Fun };

// Canonical element trees with a total order (Fun excepted) so that tables
// can be keyed and objects enumerated.
struct Element {
  ElemTag tag = ElemTag::Unit;
  long long num = 0;
  std::string str;
  std::vector<Element> kids;
  std::vector<std::pair<Element, Element>> table;   // sorted by key
  std::vector<std::pair<Element, Rational>> dist;   // sorted support, weights sum to 1
  std::function<Element(const Element&)> fun;
};

Element e_unit();
Element e_int(long long n);
Element e_str(const std::string& s);
Element e_pair(Element a, Element b);
Element e_inl(Element a);
Element e_inr(Element a);
Element e_table(std::vector<std::pair<Element, Element>> entries);
Element e_dist(std::vector<std::pair<Element, Rational>> support);  // merges and checks sum = 1
Element e_fun(std::function<Element(const Element&)> f);

bool elem_eq(const Element& a, const Element& b);
bool elem_less(const Element& a, const Element& b);
std::string show_element(const Element& e);

// Function application: table lookup or closure call. Function elements map
// domain elements to ambient-monad elements (Kleisli style).
Element apply_elem(const Element& f, const Element& x);

enum class MonadKind { Store, Writer, Dyadic };

// store: T A = S -> (A x S); writer: T A = alphabet* x A;
// dyadic: T A = finite dyadic distributions on A.
struct Model {
  std::string name;
  MonadKind kind = MonadKind::Store;
  int state_size = 1;                    // store carrier {0..n-1}
  std::vector<std::string> alphabet{"0", "1"};  // writer symbols
  std::map<std::string, int> bases;      // base type sizes
  std::map<std::string, EffectSig> effect_sigs;
  // Per effect: element of [[P (x) S]] -> ambient [[Q (x) S]].
  std::map<std::string, std::function<Element(const Element&)>> sacc_fns;
};

Model build_model(const SExpr& s);
Model build_model_text(const std::string& src);

// Interprets a type as a finite set when possible. Computation constants
// denote the model's state object.
std::optional<std::vector<Element>> enumerate_type(const Model& m, const Type& t);
// First max_n elements, covering the writer's infinite state by length-lex strings.
std::vector<Element> sample_type(const Model& m, const Type& t, int max_n);

// The model's monad structure on elements.
Element monad_unit(const Model& m, const Element& a);
Element monad_bind(const Model& m, const Element& t,
                   const std::function<Element(const Element&)>& f);

using EvalEnv = std::map<std::string, Element>;

// Values yield elements; producers yield T-elements.
Element eval_fg(const Model& m, const EvalEnv& env, const Term& t);
// Values yield elements; computations consume the linear input and yield an
// element of the target object (a distribution under the dyadic model).
Element eval_ecbv(const Model& m, const EvalEnv& env, const std::optional<Element>& lin,
                  const Term& t);

struct Morphism {
  Type dom;
  Type cod;
  bool monadic_cod = false;  // codomain sits under T
  std::function<Element(const Element&)> fn;
};

enum class MorphVerdict { Equal, Unequal, SampledEqual };
struct MorphResult {
  MorphVerdict verdict;
  std::string witness;  // input where the morphisms differ
};

constexpr int kSampleCount = 64;

MorphResult morphisms_equal(const Model& m, const Morphism& f, const Morphism& g);

struct MonadCheckReport {
  bool ok = false;
  long long hom_count = 0;  // |C(S, A (x) S)|
  long long t_count = 0;    // |T A|
  std::string detail;
};

// Enumerates C(S, A (x) S) and T A, checks the counts agree, and checks the
// canonical bijection commutes with unit and bind on all enumerated elements.
MonadCheckReport linear_state_monad_check(const Model& m, const Type& a);

}  // namespace linstate
