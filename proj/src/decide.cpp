#include "linstate/decide.hpp"

namespace linstate {

namespace {

template <class P>
bool term_any(const Term& t, P p) {
  if (p(t)) return true;
  for (const auto& k : t.kids)
    if (term_any(k, p)) return true;
  return false;
}

bool ground_type(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
    case TypeTag::Unit:
    case TypeTag::Empty:
      return true;
    case TypeTag::Prod:
    case TypeTag::Sum:
      return ground_type(t.kids[0]) && ground_type(t.kids[1]);
    default:
      return false;
  }
}

Judgement judge(const EffectTheory& th, const ValueCtx& ctx, const std::optional<LinearVar>& lin,
                const Term& t, TermFamily family) {
  switch (family) {
    case TermFamily::Fg:
      return check_fg(th.sig, ctx, t);
    case TermFamily::Ecbv:
      return check_ecbv(th.sig, ctx, lin, t);
    case TermFamily::Cps:
      return check_cps(th.sig, ctx, lin, t);
  }
  throw Error("TypeError", "unknown term family");
}

struct Probe {
  Model model;
  bool complete;  // exhaustive agreement here decides ground equality
};

std::vector<Probe> probes_for(const EffectTheory& th, bool effectful) {
  std::vector<Probe> out;
  if (is_builtin_theory(th.name)) {
    out.push_back({canonical_model(th.name), true});
    return out;
  }
  if (effectful) return out;  // no trusted carrier for user effects
  for (int k : {2, 3}) {
    Model m;
    m.name = "set(" + std::to_string(k) + ")";
    m.kind = MonadKind::Store;
    m.state_size = 1;
    for (const auto& s : th.sig.sorts) m.bases[s] = k;
    m.effect_sigs = th.sig.effects;
    out.push_back({std::move(m), false});
  }
  return out;
}

}  // namespace

DecideResult decide_eq(const EffectTheory& th, const ValueCtx& ctx,
                       const std::optional<LinearVar>& lin, const Term& a, const Term& b,
                       TermFamily family) {
  Judgement ja = judge(th, ctx, lin, a, family);
  Judgement jb = judge(th, ctx, lin, b, family);
  if (ja.mode != jb.mode || !(ja.type == jb.type))
    throw Error("TypeError", "the sides do not share a judgement");

  EqResult syn = syntactic_eq(ctx, lin, a, b);
  if (syn.verdict == Verdict::Equal) return {Verdict::Equal, syn.reason, ""};

  auto eff = [](const Term& t) { return t.tag == TermTag::Geff || t.tag == TermTag::Sacc; };
  bool effectful = term_any(a, eff) || term_any(b, eff);
  auto is_sacc = [](const Term& t) { return t.tag == TermTag::Sacc; };
  if (family == TermFamily::Cps && (term_any(a, is_sacc) || term_any(b, is_sacc)))
    return {Verdict::Unknown, "continuation state accesses have no concrete reading", ""};

  std::vector<Type> parts;
  for (const auto& [n, t] : ctx) parts.push_back(t);
  Type dom = tuple_type(parts);
  if (ja.mode == Mode::Computation) dom = t_tensor(dom, lin->type);
  bool ground = ground_type(ja.type);
  for (const auto& p : parts) ground = ground && ground_type(p);

  bool some_agreement = false;
  for (const Probe& p : probes_for(th, effectful)) {
    const Model& m = p.model;
    auto run = [&m, &ctx, mode = ja.mode, family](const Term& t) {
      return [&m, &ctx, mode, family, t](const Element& e) {
        EvalEnv env;
        if (mode == Mode::Computation) {
          decode_env(ctx, e.kids[0], env);
          return eval_ecbv(m, env, e.kids[1], t);
        }
        decode_env(ctx, e, env);
        return family == TermFamily::Fg ? eval_fg(m, env, t) : eval_ecbv(m, env, std::nullopt, t);
      };
    };
    auto fa = run(a);
    auto fb = run(b);
    try {
      auto all = enumerate_type(m, dom);
      bool exhaustive = all && all->size() <= 20000;
      std::vector<Element> points = exhaustive ? *all : sample_type(m, dom, kSampleCount);
      for (const auto& e : points) {
        Element la = fa(e), lb = fb(e);
        if (!elem_eq(la, lb))
          return {Verdict::Unequal, "the " + m.name + " reading distinguishes the sides",
                  "at " + show_element(e) + ": lhs = " + show_element(la) +
                      ", rhs = " + show_element(lb)};
      }
      if (exhaustive && p.complete && family == TermFamily::Fg && ground)
        return {Verdict::Equal,
                "the sides agree everywhere in the canonical " + m.name + " carrier", ""};
      if (!points.empty()) some_agreement = true;
    } catch (const Error&) {
      continue;  // this carrier cannot read the terms
    }
  }
  std::string reason = syn.reason;
  if (some_agreement) reason += "; no tested carrier distinguishes the sides";
  return {Verdict::Unknown, reason, ""};
}

}  // namespace linstate
