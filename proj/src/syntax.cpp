#include "linstate/syntax.hpp"

#include <algorithm>
#include <map>

namespace linstate {

bool Type::operator==(const Type& o) const {
  if (tag != o.tag || name != o.name || kids.size() != o.kids.size()) return false;
  for (size_t i = 0; i < kids.size(); ++i)
    if (!(kids[i] == o.kids[i])) return false;
  return true;
}

Type t_base(const std::string& n) { return Type{TypeTag::Base, n, {}}; }
Type t_unit() { return Type{TypeTag::Unit, "", {}}; }
Type t_prod(Type a, Type b) { return Type{TypeTag::Prod, "", {std::move(a), std::move(b)}}; }
Type t_parr(Type a, Type b) { return Type{TypeTag::Parr, "", {std::move(a), std::move(b)}}; }
Type t_empty() { return Type{TypeTag::Empty, "", {}}; }
Type t_sum(Type a, Type b) { return Type{TypeTag::Sum, "", {std::move(a), std::move(b)}}; }
Type t_lolli(Type c, Type d) { return Type{TypeTag::Lolli, "", {std::move(c), std::move(d)}}; }
Type t_comp(const std::string& n) { return Type{TypeTag::CompConst, n, {}}; }
Type t_tensor(Type a, Type c) { return Type{TypeTag::Tensor, "", {std::move(a), std::move(c)}}; }
Type t_ozero() { return Type{TypeTag::OZero, "", {}}; }
Type t_osum(Type c, Type d) { return Type{TypeTag::OSum, "", {std::move(c), std::move(d)}}; }
Type t_power(Type a, Type c) { return Type{TypeTag::Power, "", {std::move(a), std::move(c)}}; }
Type t_oone() { return Type{TypeTag::OOne, "", {}}; }
Type t_oprod(Type c, Type d) { return Type{TypeTag::OProd, "", {std::move(c), std::move(d)}}; }

bool type_less(const Type& a, const Type& b) {
  if (a.tag != b.tag) return a.tag < b.tag;
  if (a.name != b.name) return a.name < b.name;
  if (a.kids.size() != b.kids.size()) return a.kids.size() < b.kids.size();
  for (size_t i = 0; i < a.kids.size(); ++i) {
    if (type_less(a.kids[i], b.kids[i])) return true;
    if (type_less(b.kids[i], a.kids[i])) return false;
  }
  return false;
}

bool wf_type(const Type& t, TypeSort sort) {
  switch (sort) {
    case TypeSort::FgType:
      switch (t.tag) {
        case TypeTag::Base:
        case TypeTag::Unit:
        case TypeTag::Empty:
          return t.kids.empty();
        case TypeTag::Prod:
        case TypeTag::Parr:
        case TypeTag::Sum:
          return t.kids.size() == 2 && wf_type(t.kids[0], sort) && wf_type(t.kids[1], sort);
        default:
          return false;
      }
    case TypeSort::EcbvVal:
      switch (t.tag) {
        case TypeTag::Base:
        case TypeTag::Unit:
        case TypeTag::Empty:
          return t.kids.empty();
        case TypeTag::Prod:
        case TypeTag::Sum:
          return t.kids.size() == 2 && wf_type(t.kids[0], sort) && wf_type(t.kids[1], sort);
        case TypeTag::Lolli:
          return t.kids.size() == 2 && wf_type(t.kids[0], TypeSort::EcbvComp) &&
                 wf_type(t.kids[1], TypeSort::EcbvComp);
        default:
          return false;
      }
    case TypeSort::EcbvComp:
      switch (t.tag) {
        case TypeTag::CompConst:
        case TypeTag::OZero:
          return t.kids.empty();
        case TypeTag::Tensor:
          return t.kids.size() == 2 && wf_type(t.kids[0], TypeSort::EcbvVal) &&
                 wf_type(t.kids[1], TypeSort::EcbvComp);
        case TypeTag::OSum:
          return t.kids.size() == 2 && wf_type(t.kids[0], sort) && wf_type(t.kids[1], sort);
        default:
          return false;
      }
    case TypeSort::CpsVal:
      switch (t.tag) {
        case TypeTag::Base:
        case TypeTag::Unit:
        case TypeTag::Empty:
          return t.kids.empty();
        case TypeTag::Prod:
        case TypeTag::Sum:
          return t.kids.size() == 2 && wf_type(t.kids[0], sort) && wf_type(t.kids[1], sort);
        case TypeTag::Lolli:
          return t.kids.size() == 2 && wf_type(t.kids[0], TypeSort::CpsComp) &&
                 wf_type(t.kids[1], TypeSort::CpsComp);
        default:
          return false;
      }
    case TypeSort::CpsComp:
      switch (t.tag) {
        case TypeTag::CompConst:
        case TypeTag::OOne:
          return t.kids.empty();
        case TypeTag::Power:
          return t.kids.size() == 2 && wf_type(t.kids[0], TypeSort::CpsVal) &&
                 wf_type(t.kids[1], TypeSort::CpsComp);
        case TypeTag::OProd:
          return t.kids.size() == 2 && wf_type(t.kids[0], sort) && wf_type(t.kids[1], sort);
        default:
          return false;
      }
  }
  return false;
}

Term v_var(const std::string& n) {
  Term t;
  t.tag = TermTag::Var;
  t.kind = VarKind::Value;
  t.name = n;
  return t;
}
Term l_var(const std::string& n) {
  Term t = v_var(n);
  t.kind = VarKind::Linear;
  return t;
}
Term m_star() { return Term{}; }
static Term node(TermTag tag, std::vector<Term> kids) {
  Term t;
  t.tag = tag;
  t.kids = std::move(kids);
  return t;
}
Term m_pair(Term a, Term b) { return node(TermTag::Pair, {std::move(a), std::move(b)}); }
Term m_fst(Term t) { return node(TermTag::Fst, {std::move(t)}); }
Term m_snd(Term t) { return node(TermTag::Snd, {std::move(t)}); }
Term m_lam(const std::string& x, Type ty, Term body) {
  Term t = node(TermTag::Lam, {std::move(body)});
  t.name = x;
  t.ann.push_back(std::move(ty));
  return t;
}
Term m_app(Term f, Term a) { return node(TermTag::App, {std::move(f), std::move(a)}); }
Term m_return(Term v) { return node(TermTag::Return, {std::move(v)}); }
Term m_let(const std::string& x, Term m, Term n) {
  Term t = node(TermTag::Let, {std::move(m), std::move(n)});
  t.name = x;
  return t;
}
Term m_inl(Type other, Term v) {
  Term t = node(TermTag::Inl, {std::move(v)});
  t.ann.push_back(std::move(other));
  return t;
}
Term m_inr(Type other, Term v) {
  Term t = node(TermTag::Inr, {std::move(v)});
  t.ann.push_back(std::move(other));
  return t;
}
Term m_case(Term v, const std::string& x1, Term w1, const std::string& x2, Term w2) {
  Term t = node(TermTag::Case, {std::move(v), std::move(w1), std::move(w2)});
  t.binders = {x1, x2};
  return t;
}
Term m_absurd(Type res, Term v) {
  Term t = node(TermTag::Absurd, {std::move(v)});
  t.ann.push_back(std::move(res));
  return t;
}
Term m_const(const std::string& f, std::vector<Term> args) {
  Term t = node(TermTag::Const, std::move(args));
  t.name = f;
  return t;
}
Term m_geff(const std::string& e, std::vector<Term> args) {
  Term t = node(TermTag::Geff, std::move(args));
  t.name = e;
  return t;
}
Term m_llam(const std::string& z, Type ty, Term body) {
  Term t = node(TermTag::Llam, {std::move(body)});
  t.name = z;
  t.ann.push_back(std::move(ty));
  return t;
}
Term m_lapp(Term f, Term a) { return node(TermTag::Lapp, {std::move(f), std::move(a)}); }
Term m_tens(Term v, Term c) { return node(TermTag::Tens, {std::move(v), std::move(c)}); }
Term m_lettens(const std::string& x, const std::string& z, Term t0, Term u) {
  Term t = node(TermTag::Lettens, {std::move(t0), std::move(u)});
  t.binders = {x, z};
  return t;
}
Term m_oinl(Type other, Term c) {
  Term t = node(TermTag::Oinl, {std::move(c)});
  t.ann.push_back(std::move(other));
  return t;
}
Term m_oinr(Type other, Term c) {
  Term t = node(TermTag::Oinr, {std::move(c)});
  t.ann.push_back(std::move(other));
  return t;
}
Term m_ocase(Term s, const std::string& z1, Term u1, const std::string& z2, Term u2) {
  Term t = node(TermTag::Ocase, {std::move(s), std::move(u1), std::move(u2)});
  t.binders = {z1, z2};
  return t;
}
Term m_oabsurd(Type res, Term c) {
  Term t = node(TermTag::Oabsurd, {std::move(c)});
  t.ann.push_back(std::move(res));
  return t;
}
Term m_plam(const std::string& x, Type ty, Term body) {
  Term t = node(TermTag::Plam, {std::move(body)});
  t.name = x;
  t.ann.push_back(std::move(ty));
  return t;
}
Term m_papp(Term c, Term v) { return node(TermTag::Papp, {std::move(c), std::move(v)}); }
Term m_sacc(const std::string& e) {
  Term t;
  t.tag = TermTag::Sacc;
  t.name = e;
  return t;
}

namespace {

// Binder layout: for kid index i, the names bound inside kids[i].
std::vector<std::string> bound_in_kid(const Term& t, size_t i) {
  switch (t.tag) {
    case TermTag::Lam:
    case TermTag::Let:
    case TermTag::Llam:
    case TermTag::Plam:
      if (i + 1 == t.kids.size()) return {t.name};
      return {};
    case TermTag::Case:
    case TermTag::Ocase:
      if (i == 1) return {t.binders[0]};
      if (i == 2) return {t.binders[1]};
      return {};
    case TermTag::Lettens:
      if (i == 1) return {t.binders[0], t.binders[1]};
      return {};
    default:
      return {};
  }
}

void free_vars_into(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.tag == TermTag::Var) {
    if (!bound.count(t.name)) out.insert(t.name);
    return;
  }
  for (size_t i = 0; i < t.kids.size(); ++i) {
    auto bs = bound_in_kid(t, i);
    std::vector<std::string> added;
    for (auto& b : bs)
      if (bound.insert(b).second) added.push_back(b);
    free_vars_into(t.kids[i], bound, out);
    for (auto& b : added) bound.erase(b);
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

int count_free(const Term& t, const std::string& name) {
  if (t.tag == TermTag::Var) return t.name == name ? 1 : 0;
  int n = 0;
  for (size_t i = 0; i < t.kids.size(); ++i) {
    auto bs = bound_in_kid(t, i);
    if (std::find(bs.begin(), bs.end(), name) != bs.end()) continue;
    n += count_free(t.kids[i], name);
  }
  return n;
}

std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  if (t.tag == TermTag::Var || t.tag == TermTag::Lam || t.tag == TermTag::Let ||
      t.tag == TermTag::Llam || t.tag == TermTag::Plam)
    out.insert(t.name);
  for (auto& b : t.binders) out.insert(b);
  for (auto& k : t.kids) {
    auto s = all_names(k);
    out.insert(s.begin(), s.end());
  }
  return out;
}

namespace {

bool alpha_eq_rec(const Term& a, const Term& b, std::map<std::string, int>& ea,
                  std::map<std::string, int>& eb, int& next) {
  if (a.tag != b.tag) return false;
  if (a.tag == TermTag::Var) {
    if (a.kind != b.kind) return false;
    auto ia = ea.find(a.name);
    auto ib = eb.find(b.name);
    if (ia == ea.end() && ib == eb.end()) return a.name == b.name;  // both free
    if (ia == ea.end() || ib == eb.end()) return false;
    return ia->second == ib->second;
  }
  // Constant names must match; binder names may differ.
  if (a.tag == TermTag::Const || a.tag == TermTag::Geff || a.tag == TermTag::Sacc)
    if (a.name != b.name) return false;
  if (a.ann.size() != b.ann.size()) return false;
  for (size_t i = 0; i < a.ann.size(); ++i)
    if (a.ann[i] != b.ann[i]) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i) {
    auto bsa = bound_in_kid(a, i);
    auto bsb = bound_in_kid(b, i);
    if (bsa.size() != bsb.size()) return false;
    std::vector<std::pair<std::string, std::optional<int>>> savea, saveb;
    for (size_t j = 0; j < bsa.size(); ++j) {
      auto geta = ea.find(bsa[j]);
      savea.push_back({bsa[j], geta == ea.end() ? std::nullopt : std::optional<int>(geta->second)});
      auto getb = eb.find(bsb[j]);
      saveb.push_back({bsb[j], getb == eb.end() ? std::nullopt : std::optional<int>(getb->second)});
      ea[bsa[j]] = next;
      eb[bsb[j]] = next;
      ++next;
    }
    bool ok = alpha_eq_rec(a.kids[i], b.kids[i], ea, eb, next);
    for (size_t j = bsa.size(); j-- > 0;) {
      if (savea[j].second)
        ea[savea[j].first] = *savea[j].second;
      else
        ea.erase(savea[j].first);
      if (saveb[j].second)
        eb[saveb[j].first] = *saveb[j].second;
      else
        eb.erase(saveb[j].first);
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  std::map<std::string, int> ea, eb;
  int next = 0;
  return alpha_eq_rec(a, b, ea, eb, next);
}

namespace {

Term subst_rec(const Term& target, const std::string& var, const Term& repl, VarKind kind,
               const std::set<std::string>& repl_free);

void rename_binder(Term& t, size_t which, const std::string& fresh) {
  // which: index into the binder list (0 for name-binders).
  std::string old;
  if (t.tag == TermTag::Lam || t.tag == TermTag::Let || t.tag == TermTag::Llam ||
      t.tag == TermTag::Plam) {
    old = t.name;
    t.name = fresh;
    Term& body = t.kids.back();
    VarKind k = (t.tag == TermTag::Llam) ? VarKind::Linear : VarKind::Value;
    Term var = (k == VarKind::Linear) ? l_var(fresh) : v_var(fresh);
    body = subst_rec(body, old, var, k, {fresh});
    return;
  }
  old = t.binders[which];
  t.binders[which] = fresh;
  size_t kid = 0;
  VarKind k = VarKind::Value;
  if (t.tag == TermTag::Case) {
    kid = which + 1;
    k = VarKind::Value;
  } else if (t.tag == TermTag::Ocase) {
    kid = which + 1;
    k = VarKind::Linear;
  } else if (t.tag == TermTag::Lettens) {
    kid = 1;
    k = (which == 0) ? VarKind::Value : VarKind::Linear;
  }
  Term var = (k == VarKind::Linear) ? l_var(fresh) : v_var(fresh);
  t.kids[kid] = subst_rec(t.kids[kid], old, var, k, {fresh});
}

std::string pick_fresh(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

Term subst_rec(const Term& target, const std::string& var, const Term& repl, VarKind kind,
               const std::set<std::string>& repl_free) {
  if (target.tag == TermTag::Var) {
    if (target.name == var && target.kind == kind) return repl;
    return target;
  }
  Term out = target;
  for (size_t i = 0; i < out.kids.size(); ++i) {
    auto bs = bound_in_kid(out, i);
    if (std::find(bs.begin(), bs.end(), var) != bs.end()) continue;  // shadowed
    if (count_free(out.kids[i], var) == 0) continue;
    // Freshen any binder of this kid that would capture a free name of repl.
    for (size_t j = 0; j < bs.size(); ++j) {
      if (repl_free.count(bs[j])) {
        std::set<std::string> avoid = repl_free;
        auto names = all_names(out);
        avoid.insert(names.begin(), names.end());
        avoid.insert(var);
        size_t which = j;
        if (out.tag == TermTag::Case || out.tag == TermTag::Ocase)
          which = i - 1;  // per-kid single binder
        rename_binder(out, which, pick_fresh(bs[j], avoid));
      }
    }
    out.kids[i] = subst_rec(out.kids[i], var, repl, kind, repl_free);
  }
  return out;
}

}  // namespace

Term substitute(const Term& target, const std::string& var, const Term& replacement,
                VarKind kind) {
  if (kind == VarKind::Linear && count_free(target, var) == 0)
    throw Error("LinearityViolation",
                "linear variable '" + var + "' does not occur in the substitution target");
  return subst_rec(target, var, replacement, kind, free_vars(replacement));
}

bool computation_form(const Term& t) {
  switch (t.tag) {
    case TermTag::Var:
      return t.kind == VarKind::Linear;
    case TermTag::Lapp:
    case TermTag::Tens:
    case TermTag::Lettens:
    case TermTag::Oinl:
    case TermTag::Oinr:
    case TermTag::Ocase:
    case TermTag::Oabsurd:
    case TermTag::Plam:
    case TermTag::Papp:
      return true;
    default:
      return false;
  }
}

bool producer_form(const Term& t) {
  switch (t.tag) {
    case TermTag::Return:
    case TermTag::Let:
    case TermTag::App:
    case TermTag::Geff:
      return true;
    default:
      return false;
  }
}

std::string NameSupply::fresh(const std::string& base) {
  for (;;) {
    ++counter;
    std::string cand = base + std::to_string(counter);
    if (avoid.insert(cand).second) return cand;
  }
}

}  // namespace linstate
