#include "linstate/translate.hpp"

namespace linstate {

namespace {

[[noreturn]] void xerr(const std::string& code, const Term& t, const std::string& msg) {
  throw Error(code, msg, t.line, t.col);
}

Type state() { return t_comp("S"); }
Type answer() { return t_comp("R"); }

std::set<std::string> seed_names(const Term& t, const ValueCtx& ctx,
                                 const std::optional<LinearVar>& lin,
                                 const std::string& extra) {
  std::set<std::string> names = all_names(t);
  for (auto& [n, ty] : ctx) names.insert(n);
  if (lin) names.insert(lin->name);
  names.insert(extra);
  return names;
}

}  // namespace

// ---------- types ----------

Type sps_type(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
      return t;
    case TypeTag::Unit:
      return t_unit();
    case TypeTag::Empty:
      return t_empty();
    case TypeTag::Prod:
      return t_prod(sps_type(t.kids[0]), sps_type(t.kids[1]));
    case TypeTag::Sum:
      return t_sum(sps_type(t.kids[0]), sps_type(t.kids[1]));
    case TypeTag::Parr:
      return t_lolli(t_tensor(sps_type(t.kids[0]), state()),
                     t_tensor(sps_type(t.kids[1]), state()));
    default:
      throw Error("TypeError", "sps_type expects a fine-grain value type");
  }
}

Type cps_type(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
      return t;
    case TypeTag::Unit:
      return t_unit();
    case TypeTag::Empty:
      return t_empty();
    case TypeTag::Prod:
      return t_prod(cps_type(t.kids[0]), cps_type(t.kids[1]));
    case TypeTag::Sum:
      return t_sum(cps_type(t.kids[0]), cps_type(t.kids[1]));
    case TypeTag::Parr:
      return t_lolli(t_power(cps_type(t.kids[1]), answer()),
                     t_power(cps_type(t.kids[0]), answer()));
    default:
      throw Error("TypeError", "cps_type expects a fine-grain value type");
  }
}

ValueCtx sps_ctx(const ValueCtx& ctx) {
  ValueCtx out;
  for (auto& [n, ty] : ctx) out.emplace_back(n, sps_type(ty));
  return out;
}

ValueCtx cps_ctx(const ValueCtx& ctx) {
  ValueCtx out;
  for (auto& [n, ty] : ctx) out.emplace_back(n, cps_type(ty));
  return out;
}

std::optional<Type> invert_sps_type(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
      return t;
    case TypeTag::Unit:
      return t_unit();
    case TypeTag::Empty:
      return t_empty();
    case TypeTag::Prod: {
      auto a = invert_sps_type(t.kids[0]);
      auto b = invert_sps_type(t.kids[1]);
      if (!a || !b) return std::nullopt;
      return t_prod(*a, *b);
    }
    case TypeTag::Sum: {
      auto a = invert_sps_type(t.kids[0]);
      auto b = invert_sps_type(t.kids[1]);
      if (!a || !b) return std::nullopt;
      return t_sum(*a, *b);
    }
    case TypeTag::Lolli: {
      const Type& l = t.kids[0];
      const Type& r = t.kids[1];
      if (l.tag != TypeTag::Tensor || r.tag != TypeTag::Tensor) return std::nullopt;
      if (l.kids[1] != state() || r.kids[1] != state()) return std::nullopt;
      auto a = invert_sps_type(l.kids[0]);
      auto b = invert_sps_type(r.kids[0]);
      if (!a || !b) return std::nullopt;
      return t_parr(*a, *b);
    }
    default:
      return std::nullopt;
  }
}

// ---------- state-passing terms ----------

namespace {

struct Sps {
  NameSupply supply;

  Term tuple(std::vector<Term> parts) {
    if (parts.empty()) return m_star();
    Term out = parts.back();
    for (size_t i = parts.size() - 1; i-- > 0;) out = m_pair(parts[i], out);
    return out;
  }

  Term value(const Term& t) {
    switch (t.tag) {
      case TermTag::Var:
      case TermTag::Star:
        return t;
      case TermTag::Pair:
        return m_pair(value(t.kids[0]), value(t.kids[1]));
      case TermTag::Fst:
        return m_fst(value(t.kids[0]));
      case TermTag::Snd:
        return m_snd(value(t.kids[0]));
      case TermTag::Inl:
        return m_inl(sps_type(t.ann[0]), value(t.kids[0]));
      case TermTag::Inr:
        return m_inr(sps_type(t.ann[0]), value(t.kids[0]));
      case TermTag::Case:
        return m_case(value(t.kids[0]), t.binders[0], value(t.kids[1]), t.binders[1],
                      value(t.kids[2]));
      case TermTag::Absurd:
        return m_absurd(sps_type(t.ann[0]), value(t.kids[0]));
      case TermTag::Const: {
        std::vector<Term> args;
        for (auto& k : t.kids) args.push_back(value(k));
        return m_const(t.name, std::move(args));
      }
      case TermTag::Lam: {
        std::string z = supply.fresh("z");
        std::string s2 = supply.fresh("s");
        return m_llam(z, t_tensor(sps_type(t.ann[0]), state()),
                      m_lettens(t.name, s2, l_var(z), producer(t.kids[0], s2)));
      }
      default:
        xerr("TypeError", t, "sps_term expects a fine-grain term");
    }
  }

  Term producer(const Term& t, const std::string& s) {
    switch (t.tag) {
      case TermTag::Return:
        return m_tens(value(t.kids[0]), l_var(s));
      case TermTag::Let: {
        std::string s2 = supply.fresh("s");
        return m_lettens(t.name, s2, producer(t.kids[0], s), producer(t.kids[1], s2));
      }
      case TermTag::App:
        return m_lapp(value(t.kids[0]), m_tens(value(t.kids[1]), l_var(s)));
      case TermTag::Geff: {
        std::vector<Term> args;
        for (auto& k : t.kids) args.push_back(value(k));
        return m_lapp(m_sacc(t.name), m_tens(tuple(std::move(args)), l_var(s)));
      }
      default:
        xerr("TypeError", t, "sps_term expects a fine-grain term");
    }
  }
};

}  // namespace

Term sps_term(const Term& t, const std::string& state_var) {
  std::set<std::string> names = all_names(t);
  names.insert(state_var);
  Sps tr{NameSupply(std::move(names))};
  if (producer_form(t)) return tr.producer(t, state_var);
  return tr.value(t);
}

// ---------- continuation-passing terms ----------

namespace {

struct Cps {
  const Signature& sig;
  ValueCtx ctx;  // fine-grain types
  NameSupply supply;

  Term tuple(std::vector<Term> parts) {
    if (parts.empty()) return m_star();
    Term out = parts.back();
    for (size_t i = parts.size() - 1; i-- > 0;) out = m_pair(parts[i], out);
    return out;
  }

  Type type_of(const Term& t) { return check_fg(sig, ctx, t).type; }

  Term value(const Term& t) {
    switch (t.tag) {
      case TermTag::Var:
      case TermTag::Star:
        return t;
      case TermTag::Pair:
        return m_pair(value(t.kids[0]), value(t.kids[1]));
      case TermTag::Fst:
        return m_fst(value(t.kids[0]));
      case TermTag::Snd:
        return m_snd(value(t.kids[0]));
      case TermTag::Inl:
        return m_inl(cps_type(t.ann[0]), value(t.kids[0]));
      case TermTag::Inr:
        return m_inr(cps_type(t.ann[0]), value(t.kids[0]));
      case TermTag::Case: {
        Type sc = type_of(t.kids[0]);
        Term v = value(t.kids[0]);
        ctx.emplace_back(t.binders[0], sc.kids[0]);
        Term l = value(t.kids[1]);
        ctx.pop_back();
        ctx.emplace_back(t.binders[1], sc.kids[1]);
        Term r = value(t.kids[2]);
        ctx.pop_back();
        return m_case(v, t.binders[0], l, t.binders[1], r);
      }
      case TermTag::Absurd:
        return m_absurd(cps_type(t.ann[0]), value(t.kids[0]));
      case TermTag::Const: {
        std::vector<Term> args;
        for (auto& k : t.kids) args.push_back(value(k));
        return m_const(t.name, std::move(args));
      }
      case TermTag::Lam: {
        ctx.emplace_back(t.name, t.ann[0]);
        Type tau = type_of(t.kids[0]);
        std::string k = supply.fresh("k");
        Term body = producer(t.kids[0], k);
        ctx.pop_back();
        return m_llam(k, t_power(cps_type(tau), answer()),
                      m_plam(t.name, cps_type(t.ann[0]), body));
      }
      default:
        xerr("TypeError", t, "cps_term expects a fine-grain term");
    }
  }

  Term producer(const Term& t, const std::string& k) {
    switch (t.tag) {
      case TermTag::Return:
        return m_papp(l_var(k), value(t.kids[0]));
      case TermTag::Let: {
        Type sigma = type_of(t.kids[0]);
        std::string k2 = supply.fresh("k");
        Term m = producer(t.kids[0], k2);
        ctx.emplace_back(t.name, sigma);
        Term n = producer(t.kids[1], k);
        ctx.pop_back();
        return m_lapp(m_llam(k2, t_power(cps_type(sigma), answer()), m),
                      m_plam(t.name, cps_type(sigma), n));
      }
      case TermTag::App:
        return m_papp(m_lapp(value(t.kids[0]), l_var(k)), value(t.kids[1]));
      case TermTag::Geff: {
        std::vector<Term> args;
        for (auto& kid : t.kids) args.push_back(value(kid));
        return m_papp(m_lapp(m_sacc(t.name), l_var(k)), tuple(std::move(args)));
      }
      default:
        xerr("TypeError", t, "cps_term expects a fine-grain term");
    }
  }
};

}  // namespace

Term cps_term(const Signature& sig, const ValueCtx& ctx, const Term& t,
              const std::string& cont_var) {
  Cps tr{sig, ctx, NameSupply(seed_names(t, ctx, std::nullopt, cont_var))};
  if (producer_form(t)) return tr.producer(t, cont_var);
  return tr.value(t);
}

// ---------- type duality ----------

Type dual_type_val(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
    case TypeTag::Unit:
    case TypeTag::Empty:
      return t;
    case TypeTag::Prod:
      return t_prod(dual_type_val(t.kids[0]), dual_type_val(t.kids[1]));
    case TypeTag::Sum:
      return t_sum(dual_type_val(t.kids[0]), dual_type_val(t.kids[1]));
    case TypeTag::Lolli:
      return t_lolli(dual_type_comp(t.kids[1]), dual_type_comp(t.kids[0]));
    default:
      throw Error("TypeError", "dual_type_val expects an enriched value type");
  }
}

Type dual_type_comp(const Type& t) {
  switch (t.tag) {
    case TypeTag::CompConst:
      return t.name == "S" ? answer() : t;
    case TypeTag::Tensor:
      return t_power(dual_type_val(t.kids[0]), dual_type_comp(t.kids[1]));
    case TypeTag::OZero:
      return t_oone();
    case TypeTag::OSum:
      return t_oprod(dual_type_comp(t.kids[0]), dual_type_comp(t.kids[1]));
    default:
      throw Error("TypeError", "dual_type_comp expects an enriched computation type");
  }
}

Type undual_type_val(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
    case TypeTag::Unit:
    case TypeTag::Empty:
      return t;
    case TypeTag::Prod:
      return t_prod(undual_type_val(t.kids[0]), undual_type_val(t.kids[1]));
    case TypeTag::Sum:
      return t_sum(undual_type_val(t.kids[0]), undual_type_val(t.kids[1]));
    case TypeTag::Lolli:
      return t_lolli(undual_type_comp(t.kids[1]), undual_type_comp(t.kids[0]));
    default:
      throw Error("TypeError", "undual_type_val expects a cps value type");
  }
}

Type undual_type_comp(const Type& t) {
  switch (t.tag) {
    case TypeTag::CompConst:
      return t.name == "R" ? state() : t;
    case TypeTag::Power:
      return t_tensor(undual_type_val(t.kids[0]), undual_type_comp(t.kids[1]));
    case TypeTag::OOne:
      return t_ozero();
    case TypeTag::OProd:
      return t_osum(undual_type_comp(t.kids[0]), undual_type_comp(t.kids[1]));
    default:
      throw Error("TypeError", "undual_type_comp expects a cps computation type");
  }
}

// ---------- term duality ----------

namespace {

// Both directions share the shape: the dual of a computation is built around a
// "hole" term h standing for the dual of its continuation.
struct Dual {
  const Signature& sig;
  ValueCtx ctx;
  NameSupply supply;

  Type type_comp(const std::optional<LinearVar>& lin, const Term& t) {
    return check_ecbv(sig, ctx, lin, t).type;
  }

  Term value(const Term& t) {
    switch (t.tag) {
      case TermTag::Var:
      case TermTag::Star:
        return t;
      case TermTag::Pair:
        return m_pair(value(t.kids[0]), value(t.kids[1]));
      case TermTag::Fst:
        return m_fst(value(t.kids[0]));
      case TermTag::Snd:
        return m_snd(value(t.kids[0]));
      case TermTag::Inl:
        return m_inl(dual_type_val(t.ann[0]), value(t.kids[0]));
      case TermTag::Inr:
        return m_inr(dual_type_val(t.ann[0]), value(t.kids[0]));
      case TermTag::Case: {
        Type sc = check_ecbv(sig, ctx, std::nullopt, t.kids[0]).type;
        Term v = value(t.kids[0]);
        ctx.emplace_back(t.binders[0], sc.kids[0]);
        Term l = value(t.kids[1]);
        ctx.pop_back();
        ctx.emplace_back(t.binders[1], sc.kids[1]);
        Term r = value(t.kids[2]);
        ctx.pop_back();
        return m_case(v, t.binders[0], l, t.binders[1], r);
      }
      case TermTag::Absurd:
        return m_absurd(dual_type_val(t.ann[0]), value(t.kids[0]));
      case TermTag::Const: {
        std::vector<Term> args;
        for (auto& k : t.kids) args.push_back(value(k));
        return m_const(t.name, std::move(args));
      }
      case TermTag::Sacc:
        return t;
      case TermTag::Llam: {
        LinearVar lv{t.name, t.ann[0]};
        Type body = type_comp(lv, t.kids[0]);
        Term dual_body = comp(lv, t.kids[0], l_var(t.name));
        return m_llam(t.name, dual_type_comp(body), dual_body);
      }
      default:
        xerr("TypeError", t, "expected an enriched value term");
    }
  }

  // comp(lin, t, h): the dual of t with its free linear variable replaced by h.
  Term comp(const LinearVar& lin, const Term& t, const Term& h) {
    switch (t.tag) {
      case TermTag::Var:
        if (t.kind != VarKind::Linear || t.name != lin.name)
          xerr("TypeError", t, "expected the linear variable here");
        return h;
      case TermTag::Lapp:
        return comp(lin, t.kids[1], m_lapp(value(t.kids[0]), h));
      case TermTag::Tens:
        return comp(lin, t.kids[1], m_papp(h, value(t.kids[0])));
      case TermTag::Lettens: {
        Type sc = type_comp(lin, t.kids[0]);
        const std::string& x = t.binders[0];
        LinearVar inner{t.binders[1], sc.kids[1]};
        ctx.emplace_back(x, sc.kids[0]);
        Term body = comp(inner, t.kids[1], h);
        ctx.pop_back();
        Term branch = m_plam(x, dual_type_val(sc.kids[0]), body);
        if (t.kids[0].tag == TermTag::Var) return branch;
        std::string k2 = supply.fresh("k");
        Term head = m_llam(k2, dual_type_comp(sc), comp(lin, t.kids[0], l_var(k2)));
        return m_lapp(head, branch);
      }
      case TermTag::Oinl:
      case TermTag::Oinr:
      case TermTag::Ocase:
      case TermTag::Oabsurd:
        xerr("NotInImageFragment", t, "computation sums have no continuation-passing dual");
      default:
        xerr("TypeError", t, "expected an enriched computation term");
    }
  }
};

struct Undual {
  const Signature& sig;
  ValueCtx ctx;
  NameSupply supply;

  Type type_comp(const std::optional<LinearVar>& lin, const Term& t) {
    return check_cps(sig, ctx, lin, t).type;
  }

  Term value(const Term& t) {
    switch (t.tag) {
      case TermTag::Var:
      case TermTag::Star:
        return t;
      case TermTag::Pair:
        return m_pair(value(t.kids[0]), value(t.kids[1]));
      case TermTag::Fst:
        return m_fst(value(t.kids[0]));
      case TermTag::Snd:
        return m_snd(value(t.kids[0]));
      case TermTag::Inl:
        return m_inl(undual_type_val(t.ann[0]), value(t.kids[0]));
      case TermTag::Inr:
        return m_inr(undual_type_val(t.ann[0]), value(t.kids[0]));
      case TermTag::Case: {
        Type sc = check_cps(sig, ctx, std::nullopt, t.kids[0]).type;
        Term v = value(t.kids[0]);
        ctx.emplace_back(t.binders[0], sc.kids[0]);
        Term l = value(t.kids[1]);
        ctx.pop_back();
        ctx.emplace_back(t.binders[1], sc.kids[1]);
        Term r = value(t.kids[2]);
        ctx.pop_back();
        return m_case(v, t.binders[0], l, t.binders[1], r);
      }
      case TermTag::Absurd:
        return m_absurd(undual_type_val(t.ann[0]), value(t.kids[0]));
      case TermTag::Const: {
        std::vector<Term> args;
        for (auto& k : t.kids) args.push_back(value(k));
        return m_const(t.name, std::move(args));
      }
      case TermTag::Sacc:
        return t;
      case TermTag::Llam: {
        LinearVar lv{t.name, t.ann[0]};
        Type body = type_comp(lv, t.kids[0]);
        Term undual_body = comp(lv, t.kids[0], l_var(t.name));
        return m_llam(t.name, undual_type_comp(body), undual_body);
      }
      default:
        xerr("TypeError", t, "expected a cps value term");
    }
  }

  Term comp(const LinearVar& lin, const Term& t, const Term& h) {
    switch (t.tag) {
      case TermTag::Var:
        if (t.kind != VarKind::Linear || t.name != lin.name)
          xerr("TypeError", t, "expected the linear variable here");
        return h;
      case TermTag::Lapp: {
        // a let-image folds back into a lettens
        const Term& head = t.kids[0];
        const Term& arg = t.kids[1];
        if (head.tag == TermTag::Llam && arg.tag == TermTag::Plam) {
          LinearVar hv{head.name, head.ann[0]};
          Term scrutinee = comp(hv, head.kids[0], h);
          std::string z2 = supply.fresh("z");
          ctx.emplace_back(arg.name, arg.ann[0]);
          Term body = comp(lin, arg.kids[0], l_var(z2));
          ctx.pop_back();
          return m_lettens(arg.name, z2, scrutinee, body);
        }
        return comp(lin, arg, m_lapp(value(head), h));
      }
      case TermTag::Papp:
        return comp(lin, t.kids[0], m_tens(value(t.kids[1]), h));
      case TermTag::Plam: {
        std::string z2 = supply.fresh("z");
        ctx.emplace_back(t.name, t.ann[0]);
        Term body = comp(lin, t.kids[0], l_var(z2));
        ctx.pop_back();
        return m_lettens(t.name, z2, h, body);
      }
      default:
        xerr("TypeError", t, "expected a cps computation term");
    }
  }
};

}  // namespace

Term dualize(const Signature& sig, const ValueCtx& ctx, const std::optional<LinearVar>& lin,
             const Term& t) {
  Dual d{sig, ctx, NameSupply(seed_names(t, ctx, lin, "k"))};
  if (computation_form(t)) {
    if (!lin)
      throw Error("LinearityViolation", "dualizing a computation needs its linear variable",
                  t.line, t.col);
    return d.comp(*lin, t, l_var(lin->name));
  }
  return d.value(t);
}

Term dualize_inverse(const Signature& sig, const ValueCtx& ctx,
                     const std::optional<LinearVar>& lin, const Term& t) {
  Undual d{sig, ctx, NameSupply(seed_names(t, ctx, lin, "s"))};
  if (computation_form(t)) {
    if (!lin)
      throw Error("LinearityViolation", "dualizing a computation needs its linear variable",
                  t.line, t.col);
    return d.comp(*lin, t, l_var(lin->name));
  }
  return d.value(t);
}

// ---------- type reflection ----------

namespace {

Type collapse_state(const Type& c) {
  if (c.tag == TypeTag::CompConst && c.name == "S") return t_unit();
  if (c.tag == TypeTag::Tensor) {
    const Type& rest = c.kids[1];
    if (rest.tag == TypeTag::CompConst && rest.name == "S") return reflect_type(c.kids[0]);
    return t_prod(reflect_type(c.kids[0]), collapse_state(rest));
  }
  throw Error("NotInImageFragment",
              "computation type " + print_type(c) + " does not collapse to a state shape");
}

}  // namespace

Type reflect_type(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
    case TypeTag::Unit:
    case TypeTag::Empty:
      return t;
    case TypeTag::Prod:
      return t_prod(reflect_type(t.kids[0]), reflect_type(t.kids[1]));
    case TypeTag::Sum:
      return t_sum(reflect_type(t.kids[0]), reflect_type(t.kids[1]));
    case TypeTag::Lolli:
      return t_parr(collapse_state(t.kids[0]), collapse_state(t.kids[1]));
    default:
      throw Error("NotInImageFragment",
                  "type " + print_type(t) + " is outside the reflectable fragment");
  }
}

// ---------- readback ----------

namespace {

struct Readback {
  const Signature& sig;

  Type inv_ann(const Term& at, const Type& ty) {
    auto inv = invert_sps_type(ty);
    if (!inv)
      xerr("NotInImageFragment", at,
           "annotation " + print_type(ty) + " is not a translated type");
    return *inv;
  }

  std::vector<Term> untuple(const Term& at, const Term& w, size_t n) {
    std::vector<Term> out;
    if (n == 0) {
      if (w.tag != TermTag::Star)
        xerr("ReadbackIncomplete", at, "expected the unit tuple of effect arguments");
      return out;
    }
    const Term* cur = &w;
    for (size_t i = 0; i + 1 < n; ++i) {
      if (cur->tag != TermTag::Pair)
        xerr("ReadbackIncomplete", at, "cannot split tupled effect arguments");
      out.push_back(value(cur->kids[0]));
      cur = &cur->kids[1];
    }
    out.push_back(value(*cur));
    return out;
  }

  Term value(const Term& t) {
    switch (t.tag) {
      case TermTag::Var:
        if (t.kind == VarKind::Linear)
          xerr("ReadbackIncomplete", t, "linear variable in value position");
        return t;
      case TermTag::Star:
        return t;
      case TermTag::Pair:
        return m_pair(value(t.kids[0]), value(t.kids[1]));
      case TermTag::Fst:
        return m_fst(value(t.kids[0]));
      case TermTag::Snd:
        return m_snd(value(t.kids[0]));
      case TermTag::Inl:
        return m_inl(inv_ann(t, t.ann[0]), value(t.kids[0]));
      case TermTag::Inr:
        return m_inr(inv_ann(t, t.ann[0]), value(t.kids[0]));
      case TermTag::Case:
        return m_case(value(t.kids[0]), t.binders[0], value(t.kids[1]), t.binders[1],
                      value(t.kids[2]));
      case TermTag::Absurd:
        return m_absurd(inv_ann(t, t.ann[0]), value(t.kids[0]));
      case TermTag::Const: {
        std::vector<Term> args;
        for (auto& k : t.kids) args.push_back(value(k));
        return m_const(t.name, std::move(args));
      }
      case TermTag::Sacc: {
        // Bare state accesses arise when contraction removes the surrounding
        // lambda; read back as the lambda that re-splits its tupled argument.
        const EffectSig* e = sig.find_effect(t.name);
        if (!e) throw Error("UnknownEffect", "unknown effect '" + t.name + "'", t.line, t.col);
        size_t m = e->params.size();
        std::vector<Term> args;
        Term arg = v_var("x");
        for (size_t i = 0; i + 1 < m; ++i) {
          args.push_back(m_fst(arg));
          arg = m_snd(arg);
        }
        if (m > 0) args.push_back(arg);
        return m_lam("x", tuple_type(e->params), m_geff(t.name, std::move(args)));
      }
      case TermTag::Llam: {
        if (t.ann[0].tag != TypeTag::Tensor)
          xerr("ReadbackIncomplete", t, "function argument is not value-with-state");
        Type sigma = inv_ann(t, t.ann[0].kids[0]);
        const Term& body = t.kids[0];
        if (body.tag != TermTag::Lettens || body.kids[0].tag != TermTag::Var ||
            body.kids[0].kind != VarKind::Linear || body.kids[0].name != t.name)
          xerr("ReadbackIncomplete", t, "function body does not split its argument");
        return m_lam(body.binders[0], sigma, producer(body.kids[1], body.binders[1]));
      }
      default:
        xerr("ReadbackIncomplete", t, "value term outside the readback grammar");
    }
  }

  // One producer step "x <- E at state s", used for lettens scrutinees and tails.
  Term producer(const Term& t, const std::string& s) {
    switch (t.tag) {
      case TermTag::Tens: {
        const Term& st = t.kids[1];
        if (st.tag != TermTag::Var || st.kind != VarKind::Linear || st.name != s)
          xerr("ReadbackIncomplete", t, "result is not paired with the current state");
        return m_return(value(t.kids[0]));
      }
      case TermTag::Lapp: {
        const Term& head = t.kids[0];
        const Term& arg = t.kids[1];
        if (arg.tag != TermTag::Tens)
          xerr("ReadbackIncomplete", t, "application argument is not value-with-state");
        const Term& st = arg.kids[1];
        if (st.tag != TermTag::Var || st.kind != VarKind::Linear || st.name != s)
          xerr("ReadbackIncomplete", t, "application does not consume the current state");
        if (head.tag == TermTag::Sacc) {
          const EffectSig* e = sig.find_effect(head.name);
          if (!e)
            throw Error("UnknownEffect", "unknown effect '" + head.name + "'", head.line,
                        head.col);
          return m_geff(head.name, untuple(t, arg.kids[0], e->params.size()));
        }
        return m_app(value(head), value(arg.kids[0]));
      }
      case TermTag::Lettens:
        return m_let(t.binders[0], producer(t.kids[0], s),
                     producer(t.kids[1], t.binders[1]));
      default:
        xerr("ReadbackIncomplete", t, "computation outside the readback grammar");
    }
  }

  std::optional<std::string> find_state_var(const Term& t) {
    const Term* cur = &t;
    for (;;) {
      switch (cur->tag) {
        case TermTag::Var:
          return cur->kind == VarKind::Linear ? std::optional(cur->name) : std::nullopt;
        case TermTag::Tens:
        case TermTag::Lapp:
          cur = &cur->kids[1];
          break;
        case TermTag::Lettens:
        case TermTag::Oinl:
        case TermTag::Oinr:
        case TermTag::Ocase:
        case TermTag::Oabsurd:
        case TermTag::Papp:
        case TermTag::Plam:
          cur = &cur->kids[0];
          break;
        default:
          return std::nullopt;
      }
    }
  }
};

}  // namespace

ParsedTerm untranslate(const Signature& sig, const Term& t) {
  Readback rb{sig};
  if (computation_form(t)) {
    auto s = rb.find_state_var(t);
    if (!s)
      throw Error("ReadbackIncomplete", "computation has no threaded state variable", t.line,
                  t.col);
    return {rb.producer(t, *s), Mode::Producer};
  }
  return {rb.value(t), Mode::Value};
}

}  // namespace linstate
