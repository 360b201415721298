#pragma once

#include "linstate/effects.hpp"
#include "linstate/rewrite.hpp"

namespace linstate {

struct DecideResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::string witness;  // distinguishing input when Unequal
};

// Decides equality of two terms under a theory, in three phases: shared
// judgement, normal forms (with collapse at uninhabited contexts), then
// concrete models. Equal is claimed only from joinable normal forms, an
// uninhabited context, or exhaustive agreement in a canonical builtin carrier;
// Unequal only from a concrete distinguishing input; otherwise Unknown.
DecideResult decide_eq(const EffectTheory& th, const ValueCtx& ctx,
                       const std::optional<LinearVar>& lin, const Term& a, const Term& b,
                       TermFamily family);

}  // namespace linstate
