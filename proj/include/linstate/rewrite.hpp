#pragma once

#include "linstate/typecheck.hpp"

namespace linstate {

struct RewriteStep {
  std::string rule;
  std::vector<int> path;  // child indices from the root to the redex
  Term before, after;     // the redex itself
};

struct NormalizeResult {
  Term term;
  std::vector<RewriteStep> steps;  // filled only when tracing
};

// Rewrite budget: LINSTATE_FUEL from the environment, else 10000.
int default_fuel();

// Leftmost-outermost reduction to normal form under the beta rules, the
// oriented commuting conversions, and the eta contractions. The rules are
// family-agnostic: each fires only on its own language's forms. Throws
// Error("FuelExhausted") when the budget runs out with redexes remaining.
// Input is assumed well-typed.
NormalizeResult normalize(const Term& t, int fuel = -1, bool trace = false);

enum class Verdict { Equal, Unequal, Unknown };

struct EqResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::string witness;  // counterexample description when unequal
};

// A variable of one of these types makes the judgement hold vacuously.
bool void_value_type(const Type& t);
bool void_comp_type(const Type& t);
bool void_context(const ValueCtx& ctx, const std::optional<LinearVar>& lin);

// The purely syntactic phase of equality: void-context collapse, then
// normalize-and-compare. Never answers Unequal.
EqResult syntactic_eq(const ValueCtx& ctx, const std::optional<LinearVar>& lin, const Term& a,
                      const Term& b);

}  // namespace linstate
