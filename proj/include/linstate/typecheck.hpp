#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "linstate/surface.hpp"
#include "linstate/syntax.hpp"

namespace linstate {

// Effect constant e : (params ; summand_1 + ... + summand_n).
// Parameters and summand components are first-order value types.
struct EffectSig {
  std::vector<Type> params;
  std::vector<std::vector<Type>> summands;

  Type param_type() const;   // tupled parameter type
  Type result_type() const;  // sum of tupled summand rows
};

struct ConstSig {
  std::vector<Type> params;
  Type result;
};

// Tupling conventions shared by effect parameters and summand rows:
// zero components -> unit, one -> the type itself, more -> right-nested prod.
Type tuple_type(const std::vector<Type>& parts);
// Rows of a result arity: one row -> the row's tuple, more -> right-nested sum.
Type sum_type(const std::vector<std::vector<Type>>& rows);

struct Signature {
  std::map<std::string, ConstSig> consts;
  std::map<std::string, EffectSig> effects;
  std::set<std::string> sorts;  // declared base types; checked only when restrict_sorts
  bool restrict_sorts = false;

  const ConstSig* find_const(const std::string& name) const;
  const EffectSig* find_effect(const std::string& name) const;
};

using ValueCtx = std::vector<std::pair<std::string, Type>>;

struct LinearVar {
  std::string name;
  Type type;  // a computation type
};

struct Judgement {
  Mode mode;
  Type type;
};

// Fine-grain judgements: ctx |- t : type (value) or ctx |-p t : type (producer).
// The mode is read off the syntax. Throws Error on failure.
Judgement check_fg(const Signature& sig, const ValueCtx& ctx, const Term& t);

// Enriched judgements: ctx |- t : A (value, lin must be absent) or
// ctx ; z : C |- t : D (computation, lin must be present and is used exactly once).
Judgement check_ecbv(const Signature& sig, const ValueCtx& ctx,
                     const std::optional<LinearVar>& lin, const Term& t);

// The continuation-passing variant of the enriched judgements.
Judgement check_cps(const Signature& sig, const ValueCtx& ctx,
                    const std::optional<LinearVar>& lin, const Term& t);

// State-access type of an effect in the enriched language:
//   sacc e : (P (x) S) -o (Q (x) S)   with P, Q from the signature.
Type sacc_type_ecbv(const EffectSig& e);
// And in the CPS variant: sacc e : (Q -> R) -o (P -> R).
Type sacc_type_cps(const EffectSig& e);

}  // namespace linstate
