#pragma once

#include "linstate/typecheck.hpp"

namespace linstate {

// ---------- state-passing translation ----------

// Fine-grain value type -> enriched value type.
// Arrows become (A (x) S) -o (B (x) S); everything else is structural.
Type sps_type(const Type& fg_type);
ValueCtx sps_ctx(const ValueCtx& ctx);

// Fine-grain value -> enriched value, producer -> enriched computation whose
// free linear variable is `state_var : S`.
Term sps_term(const Term& t, const std::string& state_var = "s");

// Exact inverse of sps_type on its image; nullopt off the image.
std::optional<Type> invert_sps_type(const Type& ecbv_type);

// ---------- continuation-passing translation ----------

// Fine-grain value type -> cps value type.
// Arrows become (B -> R) -o (A -> R).
Type cps_type(const Type& fg_type);
ValueCtx cps_ctx(const ValueCtx& ctx);

// Needs the signature and context to type let heads and lambda bodies.
// Producers get the free linear variable `cont_var : type -> R`.
Term cps_term(const Signature& sig, const ValueCtx& ctx, const Term& t,
              const std::string& cont_var = "k");

// ---------- duality ----------

Type dual_type_val(const Type& ecbv_val);    // enriched -> cps value types
Type dual_type_comp(const Type& ecbv_comp);  // S -> R, (x) -> arrow, swap lolli
Type undual_type_val(const Type& cps_val);
Type undual_type_comp(const Type& cps_comp);

// Enriched term -> cps term over the dual types. Computations keep their free
// linear variable's name; its type dualizes to the dual of the RESULT type.
// Terms using the computation sums are outside the dualizable fragment.
Term dualize(const Signature& sig, const ValueCtx& ctx,
             const std::optional<LinearVar>& lin, const Term& t);
Term dualize_inverse(const Signature& sig, const ValueCtx& ctx,
                     const std::optional<LinearVar>& lin, const Term& t);

// ---------- type reflection ----------

// Collapses an enriched value type that is isomorphic to the image of a
// fine-grain type back to that fine-grain type, using C ~ 1 (x) C and
// A (x) (B (x) C) ~ (A x B) (x) C.
Type reflect_type(const Type& ecbv_val);

// ---------- readback ----------

// Partial inverse of sps_term on (normal forms of) its image.
// Values read back to values, computations to producers.
ParsedTerm untranslate(const Signature& sig, const Term& t);

}  // namespace linstate
