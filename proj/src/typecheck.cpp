#include "linstate/typecheck.hpp"

namespace linstate {

Type tuple_type(const std::vector<Type>& parts) {
  if (parts.empty()) return t_unit();
  Type out = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) out = t_prod(parts[i], out);
  return out;
}

Type sum_type(const std::vector<std::vector<Type>>& rows) {
  if (rows.empty()) return t_empty();
  Type out = tuple_type(rows.back());
  for (size_t i = rows.size() - 1; i-- > 0;) out = t_sum(tuple_type(rows[i]), out);
  return out;
}

Type EffectSig::param_type() const { return tuple_type(params); }
Type EffectSig::result_type() const { return sum_type(summands); }

const ConstSig* Signature::find_const(const std::string& name) const {
  auto it = consts.find(name);
  return it == consts.end() ? nullptr : &it->second;
}

const EffectSig* Signature::find_effect(const std::string& name) const {
  auto it = effects.find(name);
  return it == effects.end() ? nullptr : &it->second;
}

Type sacc_type_ecbv(const EffectSig& e) {
  return t_lolli(t_tensor(e.param_type(), t_comp("S")),
                 t_tensor(e.result_type(), t_comp("S")));
}

Type sacc_type_cps(const EffectSig& e) {
  return t_lolli(t_power(e.result_type(), t_comp("R")),
                 t_power(e.param_type(), t_comp("R")));
}

namespace {

[[noreturn]] void terr(const Term& t, const std::string& msg) {
  throw Error("TypeError", msg, t.line, t.col);
}

[[noreturn]] void lerr(const Term& t, const std::string& msg) {
  throw Error("LinearityViolation", msg, t.line, t.col);
}

struct Checker {
  const Signature& sig;
  Family family;
  ValueCtx ctx;
  std::set<std::string> linear_names;  // every linear binder seen, for diagnostics

  TypeSort val_sort() const {
    return family == Family::Fg     ? TypeSort::FgType
           : family == Family::Ecbv ? TypeSort::EcbvVal
                                    : TypeSort::CpsVal;
  }
  TypeSort comp_sort() const {
    return family == Family::Ecbv ? TypeSort::EcbvComp : TypeSort::CpsComp;
  }

  void check_sorts(const Term& at, const Type& ty) {
    if (!sig.restrict_sorts) return;
    if (ty.tag == TypeTag::Base && !sig.sorts.count(ty.name))
      terr(at, "base type '" + ty.name + "' is not a declared sort");
    for (auto& k : ty.kids) check_sorts(at, k);
  }

  void check_ann(const Term& at, const Type& ty, TypeSort sort, const std::string& what) {
    if (!wf_type(ty, sort)) terr(at, what + " carries an ill-formed type annotation");
    check_sorts(at, ty);
  }

  const Type* lookup(const std::string& name) const {
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  // ---------- values (shared by all three languages) ----------

  Type value(const Term& t) {
    switch (t.tag) {
      case TermTag::Var: {
        if (t.kind == VarKind::Linear || (!lookup(t.name) && linear_names.count(t.name)))
          lerr(t, "linear variable '" + t.name + "' used in a value position");
        const Type* ty = lookup(t.name);
        if (!ty) terr(t, "unbound variable '" + t.name + "'");
        return *ty;
      }
      case TermTag::Star:
        return t_unit();
      case TermTag::Pair:
        return t_prod(value(t.kids[0]), value(t.kids[1]));
      case TermTag::Fst: {
        Type p = value(t.kids[0]);
        if (p.tag != TypeTag::Prod) terr(t, "fst expects a product");
        return p.kids[0];
      }
      case TermTag::Snd: {
        Type p = value(t.kids[0]);
        if (p.tag != TypeTag::Prod) terr(t, "snd expects a product");
        return p.kids[1];
      }
      case TermTag::Lam: {
        if (family != Family::Fg) terr(t, "lam is a fine-grain form");
        check_ann(t, t.ann[0], TypeSort::FgType, "lam");
        ctx.emplace_back(t.name, t.ann[0]);
        Judgement body = fg(t.kids[0]);
        ctx.pop_back();
        if (body.mode != Mode::Producer) terr(t, "lam body must be a producer");
        return t_parr(t.ann[0], body.type);
      }
      case TermTag::Inl: {
        check_ann(t, t.ann[0], val_sort(), "inl");
        return t_sum(value(t.kids[0]), t.ann[0]);
      }
      case TermTag::Inr: {
        check_ann(t, t.ann[0], val_sort(), "inr");
        return t_sum(t.ann[0], value(t.kids[0]));
      }
      case TermTag::Case: {
        Type s = value(t.kids[0]);
        if (s.tag != TypeTag::Sum) terr(t, "case scrutinee must have a sum type");
        ctx.emplace_back(t.binders[0], s.kids[0]);
        Type l = value(t.kids[1]);
        ctx.pop_back();
        ctx.emplace_back(t.binders[1], s.kids[1]);
        Type r = value(t.kids[2]);
        ctx.pop_back();
        if (l != r) terr(t, "case branches disagree: " + print_type(l) + " vs " + print_type(r));
        return l;
      }
      case TermTag::Absurd: {
        check_ann(t, t.ann[0], val_sort(), "absurd");
        Type s = value(t.kids[0]);
        if (s.tag != TypeTag::Empty) terr(t, "absurd expects the empty type");
        return t.ann[0];
      }
      case TermTag::Const: {
        const ConstSig* c = sig.find_const(t.name);
        if (!c) throw Error("UnknownConstant", "unknown constant '" + t.name + "'", t.line, t.col);
        if (c->params.size() != t.kids.size())
          terr(t, "constant '" + t.name + "' expects " + std::to_string(c->params.size()) +
                      " argument(s)");
        for (size_t i = 0; i < t.kids.size(); ++i) {
          Type a = value(t.kids[i]);
          if (a != c->params[i])
            terr(t.kids[i], "constant argument has type " + print_type(a) + ", expected " +
                                print_type(c->params[i]));
        }
        return c->result;
      }
      case TermTag::Llam: {
        if (family == Family::Fg) terr(t, "llam is an enriched form");
        check_ann(t, t.ann[0], comp_sort(), "llam");
        linear_names.insert(t.name);
        Type body = comp(t.kids[0], LinearVar{t.name, t.ann[0]});
        return t_lolli(t.ann[0], body);
      }
      case TermTag::Sacc: {
        if (family == Family::Fg) terr(t, "sacc is an enriched form");
        const EffectSig* e = sig.find_effect(t.name);
        if (!e) throw Error("UnknownEffect", "unknown effect '" + t.name + "'", t.line, t.col);
        return family == Family::Ecbv ? sacc_type_ecbv(*e) : sacc_type_cps(*e);
      }
      default:
        terr(t, "expected a value term");
    }
  }

  // ---------- fine-grain producers ----------

  Judgement fg(const Term& t) {
    switch (t.tag) {
      case TermTag::Return:
        return {Mode::Producer, value(t.kids[0])};
      case TermTag::Let: {
        Judgement m = fg(t.kids[0]);
        if (m.mode != Mode::Producer) terr(t.kids[0], "let expects a producer");
        ctx.emplace_back(t.name, m.type);
        Judgement n = fg(t.kids[1]);
        ctx.pop_back();
        if (n.mode != Mode::Producer) terr(t.kids[1], "let body must be a producer");
        return n;
      }
      case TermTag::App: {
        Type f = value(t.kids[0]);
        if (f.tag != TypeTag::Parr) terr(t, "application head must have an arrow type");
        Type a = value(t.kids[1]);
        if (a != f.kids[0])
          terr(t.kids[1], "argument has type " + print_type(a) + ", expected " +
                              print_type(f.kids[0]));
        return {Mode::Producer, f.kids[1]};
      }
      case TermTag::Geff: {
        const EffectSig* e = sig.find_effect(t.name);
        if (!e) throw Error("UnknownEffect", "unknown effect '" + t.name + "'", t.line, t.col);
        if (e->params.size() != t.kids.size())
          terr(t, "effect '" + t.name + "' expects " + std::to_string(e->params.size()) +
                      " argument(s)");
        for (size_t i = 0; i < t.kids.size(); ++i) {
          Type a = value(t.kids[i]);
          if (a != e->params[i])
            terr(t.kids[i], "effect argument has type " + print_type(a) + ", expected " +
                                print_type(e->params[i]));
        }
        return {Mode::Producer, e->result_type()};
      }
      default:
        return {Mode::Value, value(t)};
    }
  }

  // ---------- enriched / cps computations ----------

  Type comp(const Term& t, const LinearVar& lin) {
    bool cps = family == Family::Cps;
    switch (t.tag) {
      case TermTag::Var: {
        if (t.kind != VarKind::Linear)
          terr(t, "expected a computation term, found value variable '" + t.name + "'");
        if (t.name != lin.name)
          lerr(t, "linear variable '" + t.name + "' is not available here");
        return lin.type;
      }
      case TermTag::Lapp: {
        Type f = value(t.kids[0]);
        if (f.tag != TypeTag::Lolli) terr(t, "lapp head must have a lolli type");
        Type a = comp(t.kids[1], lin);
        if (a != f.kids[0])
          terr(t.kids[1],
               "lapp argument has type " + print_type(a) + ", expected " + print_type(f.kids[0]));
        return f.kids[1];
      }
      case TermTag::Tens: {
        if (cps) terr(t, "tens is not a continuation-passing form");
        Type v = value(t.kids[0]);
        Type u = comp(t.kids[1], lin);
        return t_tensor(v, u);
      }
      case TermTag::Lettens: {
        if (cps) terr(t, "lettens is not a continuation-passing form");
        Type s = comp(t.kids[0], lin);
        if (s.tag != TypeTag::Tensor) terr(t.kids[0], "lettens scrutinee must have a tensor type");
        ctx.emplace_back(t.binders[0], s.kids[0]);
        linear_names.insert(t.binders[1]);
        Type body = comp(t.kids[1], LinearVar{t.binders[1], s.kids[1]});
        ctx.pop_back();
        return body;
      }
      case TermTag::Oinl: {
        if (cps) terr(t, "oinl is not a continuation-passing form");
        check_ann(t, t.ann[0], comp_sort(), "oinl");
        return t_osum(comp(t.kids[0], lin), t.ann[0]);
      }
      case TermTag::Oinr: {
        if (cps) terr(t, "oinr is not a continuation-passing form");
        check_ann(t, t.ann[0], comp_sort(), "oinr");
        return t_osum(t.ann[0], comp(t.kids[0], lin));
      }
      case TermTag::Ocase: {
        if (cps) terr(t, "ocase is not a continuation-passing form");
        Type s = comp(t.kids[0], lin);
        if (s.tag != TypeTag::OSum) terr(t.kids[0], "ocase scrutinee must have an osum type");
        linear_names.insert(t.binders[0]);
        linear_names.insert(t.binders[1]);
        Type l = comp(t.kids[1], LinearVar{t.binders[0], s.kids[0]});
        Type r = comp(t.kids[2], LinearVar{t.binders[1], s.kids[1]});
        if (l != r) terr(t, "ocase branches disagree: " + print_type(l) + " vs " + print_type(r));
        return l;
      }
      case TermTag::Oabsurd: {
        if (cps) terr(t, "oabsurd is not a continuation-passing form");
        check_ann(t, t.ann[0], comp_sort(), "oabsurd");
        Type s = comp(t.kids[0], lin);
        if (s.tag != TypeTag::OZero) terr(t.kids[0], "oabsurd expects the zero computation type");
        return t.ann[0];
      }
      case TermTag::Plam: {
        if (!cps) terr(t, "plam is a continuation-passing form");
        check_ann(t, t.ann[0], TypeSort::CpsVal, "plam");
        ctx.emplace_back(t.name, t.ann[0]);
        Type body = comp(t.kids[0], lin);
        ctx.pop_back();
        return t_power(t.ann[0], body);
      }
      case TermTag::Papp: {
        if (!cps) terr(t, "papp is a continuation-passing form");
        Type f = comp(t.kids[0], lin);
        if (f.tag != TypeTag::Power) terr(t.kids[0], "papp head must have a power type");
        Type a = value(t.kids[1]);
        if (a != f.kids[0])
          terr(t.kids[1],
               "papp argument has type " + print_type(a) + ", expected " + print_type(f.kids[0]));
        return f.kids[1];
      }
      default:
        terr(t, "expected a computation term");
    }
  }

  Judgement enriched(const std::optional<LinearVar>& lin, const Term& t) {
    bool is_comp = t.tag == TermTag::Lapp || t.tag == TermTag::Tens ||
                   t.tag == TermTag::Lettens || t.tag == TermTag::Oinl ||
                   t.tag == TermTag::Oinr || t.tag == TermTag::Ocase ||
                   t.tag == TermTag::Oabsurd || t.tag == TermTag::Plam ||
                   t.tag == TermTag::Papp ||
                   (t.tag == TermTag::Var && t.kind == VarKind::Linear);
    if (lin) linear_names.insert(lin->name);
    if (is_comp) {
      if (!lin)
        lerr(t, "computation judgement requires a linear variable in context");
      return {Mode::Computation, comp(t, *lin)};
    }
    if (lin)
      lerr(t, "value judgement cannot consume the linear variable '" + lin->name + "'");
    return {Mode::Value, value(t)};
  }
};

void check_ctx_types(const Signature& sig, const ValueCtx& ctx, TypeSort sort) {
  for (auto& [name, ty] : ctx) {
    if (!wf_type(ty, sort))
      throw Error("TypeError", "context variable '" + name + "' has an ill-formed type");
    if (sig.restrict_sorts) {
      Checker c{sig, Family::Fg, {}};
      Term probe = v_var(name);
      c.check_sorts(probe, ty);
    }
  }
}

}  // namespace

Judgement check_fg(const Signature& sig, const ValueCtx& ctx, const Term& t) {
  check_ctx_types(sig, ctx, TypeSort::FgType);
  Checker c{sig, Family::Fg, ctx};
  return c.fg(t);
}

Judgement check_ecbv(const Signature& sig, const ValueCtx& ctx,
                     const std::optional<LinearVar>& lin, const Term& t) {
  check_ctx_types(sig, ctx, TypeSort::EcbvVal);
  if (lin && !wf_type(lin->type, TypeSort::EcbvComp))
    throw Error("TypeError", "linear variable '" + lin->name + "' has an ill-formed type");
  Checker c{sig, Family::Ecbv, ctx};
  return c.enriched(lin, t);
}

Judgement check_cps(const Signature& sig, const ValueCtx& ctx,
                    const std::optional<LinearVar>& lin, const Term& t) {
  check_ctx_types(sig, ctx, TypeSort::CpsVal);
  if (lin && !wf_type(lin->type, TypeSort::CpsComp))
    throw Error("TypeError", "linear variable '" + lin->name + "' has an ill-formed type");
  Checker c{sig, Family::Cps, ctx};
  return c.enriched(lin, t);
}

}  // namespace linstate
