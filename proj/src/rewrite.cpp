#include "linstate/rewrite.hpp"

#include <cstdlib>
#include <set>

namespace linstate {

namespace {

bool is_value_var(const Term& t, const std::string& name) {
  return t.tag == TermTag::Var && t.kind == VarKind::Value && t.name == name;
}

bool is_linear_var(const Term& t, const std::string& name) {
  return t.tag == TermTag::Var && t.kind == VarKind::Linear && t.name == name;
}

std::string fresh_avoid(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// Renames `name` (of kind `k`) to a name outside `conflicts` before `body`
// moves under new binders. Returns the possibly renamed pair.
void avoid_capture(std::string& name, VarKind k, Term& body, const std::set<std::string>& conflicts,
                   const Term& whole) {
  if (!conflicts.count(name)) return;
  std::set<std::string> avoid = conflicts;
  for (const auto& n : all_names(whole)) avoid.insert(n);
  std::string renamed = fresh_avoid(name, avoid);
  Term repl = k == VarKind::Value ? v_var(renamed) : l_var(renamed);
  if (k == VarKind::Linear && count_free(body, name) == 0) {
    name = renamed;
    return;
  }
  body = substitute(body, name, repl, k);
  name = renamed;
}

std::set<std::string> union_fv(const Term& a, const Term& b) {
  std::set<std::string> s = free_vars(a);
  for (const auto& n : free_vars(b)) s.insert(n);
  return s;
}

struct Engine {
  int fuel;
  bool trace;
  std::vector<RewriteStep> steps;

  // Tries every rule at the root of t; returns (rule name, contractum).
  std::optional<std::pair<std::string, Term>> try_root(const Term& t, const Term& whole) {
    switch (t.tag) {
      case TermTag::Fst:
      case TermTag::Snd: {
        const Term& v = t.kids[0];
        if (v.tag == TermTag::Pair)
          return std::make_pair(t.tag == TermTag::Fst ? "beta-fst" : "beta-snd",
                                v.kids[t.tag == TermTag::Fst ? 0 : 1]);
        if (v.tag == TermTag::Case) {
          Term r = v;
          r.kids[1] = t.tag == TermTag::Fst ? m_fst(v.kids[1]) : m_snd(v.kids[1]);
          r.kids[2] = t.tag == TermTag::Fst ? m_fst(v.kids[2]) : m_snd(v.kids[2]);
          return std::make_pair(t.tag == TermTag::Fst ? "commute-fst-case" : "commute-snd-case", r);
        }
        return std::nullopt;
      }
      case TermTag::Case: {
        const Term& v = t.kids[0];
        if (v.tag == TermTag::Inl)
          return std::make_pair("beta-case-inl",
                                substitute(t.kids[1], t.binders[0], v.kids[0], VarKind::Value));
        if (v.tag == TermTag::Inr)
          return std::make_pair("beta-case-inr",
                                substitute(t.kids[2], t.binders[1], v.kids[0], VarKind::Value));
        if (v.tag == TermTag::Case) {
          // case (case V of x1.W1 | x2.W2) of y1.U1 | y2.U2
          //   -> case V of x1. case W1 of y1.U1 | y2.U2 | x2. ...
          std::set<std::string> conflicts = union_fv(t.kids[1], t.kids[2]);
          Term r = v;
          for (int i = 0; i < 2; ++i) {
            std::string x = v.binders[i];
            Term w = v.kids[1 + i];
            avoid_capture(x, VarKind::Value, w, conflicts, whole);
            r.binders[i] = x;
            r.kids[1 + i] = m_case(w, t.binders[0], t.kids[1], t.binders[1], t.kids[2]);
          }
          return std::make_pair("commute-case-case", r);
        }
        return std::nullopt;
      }
      case TermTag::Lam: {
        const Term& body = t.kids[0];
        if (body.tag == TermTag::App && is_value_var(body.kids[1], t.name) &&
            !free_vars(body.kids[0]).count(t.name))
          return std::make_pair("eta-lam", body.kids[0]);
        return std::nullopt;
      }
      case TermTag::App: {
        const Term& f = t.kids[0];
        if (f.tag == TermTag::Lam)
          return std::make_pair("beta-lam",
                                substitute(f.kids[0], f.name, t.kids[1], VarKind::Value));
        return std::nullopt;
      }
      case TermTag::Let: {
        const Term& m = t.kids[0];
        if (m.tag == TermTag::Return)
          return std::make_pair("beta-let",
                                substitute(t.kids[1], t.name, m.kids[0], VarKind::Value));
        if (m.tag == TermTag::Let) {
          // let y = (let x = M in N) in P -> let x = M in let y = N in P
          std::set<std::string> conflicts = free_vars(t.kids[1]);
          conflicts.insert(t.name);
          std::string x = m.name;
          Term n = m.kids[1];
          avoid_capture(x, VarKind::Value, n, conflicts, whole);
          return std::make_pair("assoc-let",
                                m_let(x, m.kids[0], m_let(t.name, n, t.kids[1])));
        }
        if (t.kids[1].tag == TermTag::Return && is_value_var(t.kids[1].kids[0], t.name))
          return std::make_pair("eta-let", m);
        return std::nullopt;
      }
      case TermTag::Llam: {
        const Term& body = t.kids[0];
        if (body.tag == TermTag::Lapp && is_linear_var(body.kids[1], t.name) &&
            !free_vars(body.kids[0]).count(t.name))
          return std::make_pair("eta-llam", body.kids[0]);
        // llam z. lettens (x,z') = z in lapp V (tens x z') -> V
        if (body.tag == TermTag::Lettens && is_linear_var(body.kids[0], t.name) &&
            body.kids[1].tag == TermTag::Lapp) {
          const Term& la = body.kids[1];
          const Term& arg = la.kids[1];
          if (arg.tag == TermTag::Tens && is_value_var(arg.kids[0], body.binders[0]) &&
              is_linear_var(arg.kids[1], body.binders[1])) {
            std::set<std::string> fv = free_vars(la.kids[0]);
            if (!fv.count(body.binders[0]) && !fv.count(body.binders[1]) && !fv.count(t.name))
              return std::make_pair("eta-llam-split", la.kids[0]);
          }
        }
        return std::nullopt;
      }
      case TermTag::Lapp: {
        const Term& f = t.kids[0];
        const Term& u = t.kids[1];
        if (f.tag == TermTag::Llam)
          return std::make_pair("beta-llam", substitute(f.kids[0], f.name, u, VarKind::Linear));
        if (u.tag == TermTag::Lettens) return lift_lettens("commute-lapp-lettens", t, u, whole);
        if (u.tag == TermTag::Ocase) return lift_ocase("commute-lapp-ocase", t, u, whole);
        return std::nullopt;
      }
      case TermTag::Tens: {
        const Term& u = t.kids[1];
        if (u.tag == TermTag::Lettens) return lift_lettens("commute-tens-lettens", t, u, whole);
        if (u.tag == TermTag::Ocase) return lift_ocase("commute-tens-ocase", t, u, whole);
        return std::nullopt;
      }
      case TermTag::Oinl:
      case TermTag::Oinr: {
        const Term& u = t.kids[0];
        if (u.tag == TermTag::Lettens) return lift_lettens("commute-oin-lettens", t, u, whole);
        if (u.tag == TermTag::Ocase) return lift_ocase("commute-oin-ocase", t, u, whole);
        return std::nullopt;
      }
      case TermTag::Lettens: {
        const Term& scrut = t.kids[0];
        if (scrut.tag == TermTag::Tens) {
          Term r = substitute(t.kids[1], t.binders[0], scrut.kids[0], VarKind::Value);
          r = substitute(r, t.binders[1], scrut.kids[1], VarKind::Linear);
          return std::make_pair("beta-lettens", r);
        }
        if (scrut.tag == TermTag::Lettens) {
          // lettens (y,z2) = (lettens (x,z1) = t in u) in v
          //   -> lettens (x,z1) = t in lettens (y,z2) = u in v
          std::set<std::string> conflicts = free_vars(t.kids[1]);
          conflicts.insert(t.binders[0]);
          conflicts.insert(t.binders[1]);
          std::string x = scrut.binders[0], z1 = scrut.binders[1];
          Term u = scrut.kids[1];
          avoid_capture(x, VarKind::Value, u, conflicts, whole);
          avoid_capture(z1, VarKind::Linear, u, conflicts, whole);
          return std::make_pair(
              "assoc-lettens",
              m_lettens(x, z1, scrut.kids[0],
                        m_lettens(t.binders[0], t.binders[1], u, t.kids[1])));
        }
        if (scrut.tag == TermTag::Ocase) {
          // lettens (x,z) = (ocase ...) in v -> push the lettens into the branches
          Term r = scrut;
          for (int i = 0; i < 2; ++i) {
            std::string zi = scrut.binders[i];
            Term ui = scrut.kids[1 + i];
            avoid_capture(zi, VarKind::Linear, ui, free_vars(t.kids[1]), whole);
            r.binders[i] = zi;
            r.kids[1 + i] = m_lettens(t.binders[0], t.binders[1], ui, t.kids[1]);
          }
          return std::make_pair("commute-lettens-ocase", r);
        }
        if (t.kids[1].tag == TermTag::Tens && is_value_var(t.kids[1].kids[0], t.binders[0]) &&
            is_linear_var(t.kids[1].kids[1], t.binders[1]))
          return std::make_pair("eta-lettens", scrut);
        return std::nullopt;
      }
      case TermTag::Ocase: {
        const Term& scrut = t.kids[0];
        if (scrut.tag == TermTag::Oinl)
          return std::make_pair("beta-ocase-inl",
                                substitute(t.kids[1], t.binders[0], scrut.kids[0], VarKind::Linear));
        if (scrut.tag == TermTag::Oinr)
          return std::make_pair("beta-ocase-inr",
                                substitute(t.kids[2], t.binders[1], scrut.kids[0], VarKind::Linear));
        if (scrut.tag == TermTag::Lettens) {
          // ocase (lettens (x,z) = t in u) ... -> lettens (x,z) = t in ocase u ...
          std::set<std::string> conflicts = union_fv(t.kids[1], t.kids[2]);
          std::string x = scrut.binders[0], z = scrut.binders[1];
          Term u = scrut.kids[1];
          avoid_capture(x, VarKind::Value, u, conflicts, whole);
          avoid_capture(z, VarKind::Linear, u, conflicts, whole);
          return std::make_pair("commute-ocase-lettens",
                                m_lettens(x, z, scrut.kids[0],
                                          m_ocase(u, t.binders[0], t.kids[1], t.binders[1],
                                                  t.kids[2])));
        }
        if (scrut.tag == TermTag::Ocase) {
          std::set<std::string> conflicts = union_fv(t.kids[1], t.kids[2]);
          Term r = scrut;
          for (int i = 0; i < 2; ++i) {
            std::string zi = scrut.binders[i];
            Term ui = scrut.kids[1 + i];
            avoid_capture(zi, VarKind::Linear, ui, conflicts, whole);
            r.binders[i] = zi;
            r.kids[1 + i] = m_ocase(ui, t.binders[0], t.kids[1], t.binders[1], t.kids[2]);
          }
          return std::make_pair("commute-ocase-ocase", r);
        }
        return std::nullopt;
      }
      case TermTag::Papp: {
        const Term& f = t.kids[0];
        if (f.tag == TermTag::Plam)
          return std::make_pair("beta-plam",
                                substitute(f.kids[0], f.name, t.kids[1], VarKind::Value));
        return std::nullopt;
      }
      case TermTag::Plam: {
        const Term& body = t.kids[0];
        if (body.tag == TermTag::Papp && is_value_var(body.kids[1], t.name) &&
            !free_vars(body.kids[0]).count(t.name))
          return std::make_pair("eta-plam", body.kids[0]);
        return std::nullopt;
      }
      default:
        return std::nullopt;
    }
  }

  // frame[lettens (x,z) = t in u] -> lettens (x,z) = t in frame[u]
  // where the lettens sits at the frame's computation slot.
  std::optional<std::pair<std::string, Term>> lift_lettens(const char* rule, const Term& frame,
                                                           const Term& lt, const Term& whole) {
    std::set<std::string> conflicts;
    Term rebuilt = frame;
    int slot = frame.tag == TermTag::Oinl || frame.tag == TermTag::Oinr ? 0 : 1;
    if (slot == 1) conflicts = free_vars(frame.kids[0]);
    std::string x = lt.binders[0], z = lt.binders[1];
    Term u = lt.kids[1];
    avoid_capture(x, VarKind::Value, u, conflicts, whole);
    avoid_capture(z, VarKind::Linear, u, conflicts, whole);
    rebuilt.kids[slot] = u;
    return std::make_pair(std::string(rule), m_lettens(x, z, lt.kids[0], rebuilt));
  }

  // frame[ocase t of z1.u1 | z2.u2] -> ocase t of z1.frame[u1] | z2.frame[u2]
  std::optional<std::pair<std::string, Term>> lift_ocase(const char* rule, const Term& frame,
                                                         const Term& oc, const Term& whole) {
    std::set<std::string> conflicts;
    int slot = frame.tag == TermTag::Oinl || frame.tag == TermTag::Oinr ? 0 : 1;
    if (slot == 1) conflicts = free_vars(frame.kids[0]);
    Term r = oc;
    for (int i = 0; i < 2; ++i) {
      std::string zi = oc.binders[i];
      Term ui = oc.kids[1 + i];
      avoid_capture(zi, VarKind::Linear, ui, conflicts, whole);
      Term rebuilt = frame;
      rebuilt.kids[slot] = ui;
      r.binders[i] = zi;
      r.kids[1 + i] = rebuilt;
    }
    return std::make_pair(std::string(rule), r);
  }

  bool rewrite_once(Term& t, const Term& whole, std::vector<int>& path) {
    if (auto hit = try_root(t, whole)) {
      if (trace) steps.push_back({hit->first, path, t, hit->second});
      t = hit->second;
      return true;
    }
    for (size_t i = 0; i < t.kids.size(); ++i) {
      path.push_back(static_cast<int>(i));
      if (rewrite_once(t.kids[i], whole, path)) return true;
      path.pop_back();
    }
    return false;
  }
};

}  // namespace

int default_fuel() {
  if (const char* env = std::getenv("LINSTATE_FUEL")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 10000;
}

NormalizeResult normalize(const Term& t, int fuel, bool trace) {
  if (fuel < 0) fuel = default_fuel();
  Engine eng{fuel, trace, {}};
  Term cur = t;
  int used = 0;
  for (;;) {
    std::vector<int> path;
    if (!eng.rewrite_once(cur, cur, path)) break;
    if (++used > fuel) throw Error("FuelExhausted", "rewrite budget exceeded");
  }
  return {cur, std::move(eng.steps)};
}

bool void_value_type(const Type& t) {
  switch (t.tag) {
    case TypeTag::Empty:
      return true;
    case TypeTag::Prod:
      return void_value_type(t.kids[0]) || void_value_type(t.kids[1]);
    case TypeTag::Sum:
      return void_value_type(t.kids[0]) && void_value_type(t.kids[1]);
    default:
      return false;
  }
}

bool void_comp_type(const Type& t) {
  switch (t.tag) {
    case TypeTag::OZero:
      return true;
    case TypeTag::Tensor:
      return void_value_type(t.kids[0]) || void_comp_type(t.kids[1]);
    case TypeTag::OSum:
      return void_comp_type(t.kids[0]) && void_comp_type(t.kids[1]);
    default:
      return false;
  }
}

bool void_context(const ValueCtx& ctx, const std::optional<LinearVar>& lin) {
  for (const auto& [name, ty] : ctx)
    if (void_value_type(ty)) return true;
  return lin && void_comp_type(lin->type);
}

EqResult syntactic_eq(const ValueCtx& ctx, const std::optional<LinearVar>& lin, const Term& a,
                      const Term& b) {
  if (void_context(ctx, lin)) return {Verdict::Equal, "context has an uninhabited type", ""};
  Term na = normalize(a).term;
  Term nb = normalize(b).term;
  if (alpha_eq(na, nb)) return {Verdict::Equal, "normal forms are alpha-equal", ""};
  return {Verdict::Unknown, "normal forms differ", ""};
}

}  // namespace linstate
