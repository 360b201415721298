#include "linstate/effects.hpp"

#include <algorithm>
#include <cctype>

#include "linstate/translate.hpp"

namespace linstate {

namespace {

[[noreturn]] void serr(const std::string& code, const SExpr& at, const std::string& msg) {
  throw Error(code, msg, at.line, at.col);
}

bool is_int(const std::string& s) {
  size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// The first-order fragment: sorts, unit, empty, products, sums.
bool first_order(const Type& t) {
  switch (t.tag) {
    case TypeTag::Base:
    case TypeTag::Unit:
    case TypeTag::Empty:
      return true;
    case TypeTag::Prod:
    case TypeTag::Sum:
      return first_order(t.kids[0]) && first_order(t.kids[1]);
    default:
      return false;
  }
}

void verify_sorts(const Type& t, const std::set<std::string>& sorts, const SExpr& at) {
  if (t.tag == TypeTag::Base && !sorts.count(t.name))
    serr("UnknownBase", at, "sort '" + t.name + "' is not declared");
  for (const auto& k : t.kids) verify_sorts(k, sorts, at);
}

Type fo_type(const SExpr& s, const std::set<std::string>& sorts) {
  Type t = type_of_sexpr(s, TypeSort::FgType);
  if (!first_order(t))
    serr("FragmentViolation", s, "function types cannot appear in effect theories");
  verify_sorts(t, sorts, s);
  return t;
}

std::vector<Type> type_list(const SExpr& s, const std::set<std::string>& sorts) {
  if (s.is_atom) serr("ParseError", s, "expected a list of types");
  std::vector<Type> out;
  for (const auto& k : s.kids) out.push_back(fo_type(k, sorts));
  return out;
}

// A summand row is a type (atom or prod/sum form) or a list of types.
std::vector<Type> row_types(const SExpr& s, const std::set<std::string>& sorts) {
  if (s.is_atom) return {fo_type(s, sorts)};
  if (!s.kids.empty() && s.kids[0].is_atom &&
      (s.kids[0].atom == "prod" || s.kids[0].atom == "sum"))
    return {fo_type(s, sorts)};
  return type_list(s, sorts);
}

ValueCtx ctx_of_sexpr(const SExpr& s, const std::set<std::string>& sorts) {
  if (s.is_atom) serr("ParseError", s, "expected a context: ((name type) ...)");
  ValueCtx out;
  for (const auto& b : s.kids) {
    if (b.is_atom || b.kids.size() != 2 || !b.kids[0].is_atom)
      serr("ParseError", b, "context entries are (name type)");
    for (const auto& [n, ty] : out)
      if (n == b.kids[0].atom) serr("DuplicateName", b, "context repeats '" + n + "'");
    out.emplace_back(b.kids[0].atom, fo_type(b.kids[1], sorts));
  }
  return out;
}

TheoryEq parse_eq(const Signature& sig, const SExpr& item, int index) {
  size_t base = 1;
  std::string label = "eq" + std::to_string(index);
  if (item.kids.size() == 5 && item.kids[1].is_atom) {
    label = item.kids[1].atom;
    base = 2;
  }
  if (item.kids.size() != base + 3)
    serr("ParseError", item, "expected (eq [label] context lhs rhs)");
  ValueCtx ctx = ctx_of_sexpr(item.kids[base], sig.sorts);
  ParsedTerm lhs = term_of_sexpr(item.kids[base + 1], TermFamily::Fg, true);
  ParsedTerm rhs = term_of_sexpr(item.kids[base + 2], TermFamily::Fg, true);
  Judgement jl = check_fg(sig, ctx, lhs.term);
  Judgement jr = check_fg(sig, ctx, rhs.term);
  if (jl.mode != jr.mode)
    serr("TypeError", item, "equation '" + label + "' mixes a value with a producer");
  if (!(jl.type == jr.type))
    serr("TypeError", item, "equation '" + label + "' relates different types");
  return TheoryEq{label, std::move(ctx), lhs.term, rhs.term, jl.type, jl.mode};
}

}  // namespace

EffectTheory load_theory(const SExpr& s) {
  if (s.is_atom || s.kids.empty() || !s.kids[0].is_atom || s.kids[0].atom != "theory")
    serr("ParseError", s, "expected (theory ...)");
  EffectTheory th;
  th.sig.restrict_sorts = true;
  // Declarations first, then equations, so order inside the file is free.
  for (size_t i = 1; i < s.kids.size(); ++i) {
    const SExpr& item = s.kids[i];
    if (item.is_atom || item.kids.empty() || !item.kids[0].is_atom)
      serr("ParseError", item, "theory items are (sort ...), (const ...), (effect ...), (eq ...)");
    const std::string& head = item.kids[0].atom;
    if (head == "sort") {
      if (item.kids.size() != 2 || !item.kids[1].is_atom) serr("ParseError", item, "(sort name)");
      if (!th.sig.sorts.insert(item.kids[1].atom).second)
        serr("DuplicateName", item, "sort '" + item.kids[1].atom + "' declared twice");
    } else if (head == "eq") {
      continue;
    } else if (head != "const" && head != "effect") {
      serr("ParseError", item, "unknown theory item '" + head + "'");
    }
  }
  for (size_t i = 1; i < s.kids.size(); ++i) {
    const SExpr& item = s.kids[i];
    const std::string& head = item.kids[0].atom;
    if (head == "const") {
      if (item.kids.size() != 4 || !item.kids[1].is_atom)
        serr("ParseError", item, "(const name (param types) result)");
      const std::string& name = item.kids[1].atom;
      if (th.sig.consts.count(name) || th.sig.effects.count(name))
        serr("DuplicateName", item, "'" + name + "' declared twice");
      th.sig.consts[name] =
          ConstSig{type_list(item.kids[2], th.sig.sorts), fo_type(item.kids[3], th.sig.sorts)};
    } else if (head == "effect") {
      if (item.kids.size() != 4 || !item.kids[1].is_atom || item.kids[3].is_atom)
        serr("ParseError", item, "(effect name (param types) (summand rows))");
      const std::string& name = item.kids[1].atom;
      if (th.sig.consts.count(name) || th.sig.effects.count(name))
        serr("DuplicateName", item, "'" + name + "' declared twice");
      std::vector<std::vector<Type>> rows;
      for (const auto& r : item.kids[3].kids) rows.push_back(row_types(r, th.sig.sorts));
      th.sig.effects[name] = EffectSig{type_list(item.kids[2], th.sig.sorts), std::move(rows)};
    }
  }
  int eqn = 0;
  for (size_t i = 1; i < s.kids.size(); ++i) {
    const SExpr& item = s.kids[i];
    if (item.kids[0].atom != "eq") continue;
    TheoryEq eq = parse_eq(th.sig, item, ++eqn);
    (eq.mode == Mode::Producer ? th.equations : th.value_equations).push_back(std::move(eq));
  }
  return th;
}

EffectTheory load_theory_text(const std::string& src, const std::string& name) {
  EffectTheory th = load_theory(read_sexpr(src, name.empty() ? "<theory>" : name));
  th.name = name;
  return th;
}

// ---------- builtins ----------

namespace {

const char* kBitStore = R"((theory
  (effect deref (unit) (() ()))
  (effect flip (unit) (()))
  (eq copy ()
    (let (x (geff deref star)) (let (y (geff deref star)) (return (pair x y))))
    (let (x (geff deref star)) (return (pair x x))))
  (eq discard ()
    (let (x (geff deref star)) (return star))
    (return star))
  (eq involution ()
    (let (x (geff flip star)) (geff flip star))
    (return star))
  (eq flip-deref ()
    (let (x (geff flip star)) (geff deref star))
    (let (x (geff deref star)) (let (y (geff flip star))
      (return (case x (a (inr unit star)) (b (inl unit star)))))))))";

const char* kGlobalStore = R"((theory
  (sort val)
  (effect read (unit) ((val)))
  (effect write (val) (()))
  (eq read-write ()
    (return star)
    (let (x (geff read star)) (geff write x)))
  (eq write-read ((y val))
    (let (x (geff write y)) (geff read star))
    (let (x (geff write y)) (return y)))
  (eq write-write ((y val) (z val))
    (let (x (geff write y)) (geff write z))
    (geff write z))))";

const char* kPrinting = R"((theory
  (effect print0 (unit) (()))
  (effect print1 (unit) (()))))";

const char* kMeanValue = R"((theory
  (effect toss (unit) (() ()))
  (eq commute ()
    (let (x (geff toss star)) (let (y (geff toss star)) (return (pair x y))))
    (let (x (geff toss star)) (let (y (geff toss star)) (return (pair y x)))))
  (eq discard ()
    (let (x (geff toss star)) (return star))
    (return star))
  (eq balanced ()
    (geff toss star)
    (let (x (geff toss star))
      (return (case x (a (inr unit star)) (b (inl unit star))))))))";

int store_size(const std::string& spec) {
  const std::string prefix = "global-store:";
  if (spec == "global-store") return 2;
  std::string suffix = spec.substr(prefix.size());
  if (!is_int(suffix) || suffix[0] == '-')
    throw Error("ParseError", "store size must be a positive integer: '" + spec + "'");
  int n = std::atoi(suffix.c_str());
  if (n < 1) throw Error("EmptyBase", "state set must be nonempty");
  return n;
}

Element bit_elem(int b) { return b == 0 ? e_inl(e_unit()) : e_inr(e_unit()); }

}  // namespace

bool is_builtin_theory(const std::string& spec) {
  return spec == "bit-store" || spec == "printing" || spec == "mean-value" ||
         spec == "global-store" || spec.rfind("global-store:", 0) == 0;
}

EffectTheory builtin_theory(const std::string& spec) {
  if (!is_builtin_theory(spec)) throw Error("UnknownTheory", "not a builtin theory: '" + spec + "'");
  const char* src = kBitStore;
  if (spec == "printing") src = kPrinting;
  else if (spec == "mean-value") src = kMeanValue;
  else if (spec != "bit-store") {
    store_size(spec);  // validate the size suffix
    src = kGlobalStore;
  }
  return load_theory_text(src, spec);
}

Model canonical_model(const std::string& spec) {
  EffectTheory th = builtin_theory(spec);
  Model m;
  m.name = spec;
  m.effect_sigs = th.sig.effects;
  if (spec == "bit-store") {
    m.kind = MonadKind::Store;
    m.state_size = 2;
    m.sacc_fns["deref"] = [](const Element& in) {
      return e_pair(bit_elem(static_cast<int>(in.kids[1].num)), in.kids[1]);
    };
    m.sacc_fns["flip"] = [](const Element& in) {
      return e_pair(e_unit(), e_int(1 - in.kids[1].num));
    };
  } else if (spec == "printing") {
    m.kind = MonadKind::Writer;
    m.sacc_fns["print0"] = [](const Element& in) {
      return e_pair(e_unit(), e_str(in.kids[1].str + "0"));
    };
    m.sacc_fns["print1"] = [](const Element& in) {
      return e_pair(e_unit(), e_str(in.kids[1].str + "1"));
    };
  } else if (spec == "mean-value") {
    m.kind = MonadKind::Dyadic;
    m.state_size = 1;
    m.sacc_fns["toss"] = [](const Element&) {
      return e_dist({{e_pair(bit_elem(0), e_unit()), Rational(1, 2)},
                     {e_pair(bit_elem(1), e_unit()), Rational(1, 2)}});
    };
  } else {
    int n = store_size(spec);
    m.kind = MonadKind::Store;
    m.state_size = n;
    m.bases["val"] = n;
    m.sacc_fns["read"] = [](const Element& in) { return e_pair(in.kids[1], in.kids[1]); };
    m.sacc_fns["write"] = [](const Element& in) { return e_pair(e_unit(), in.kids[0]); };
  }
  return m;
}

// ---------- comodel files ----------

namespace {

long long int_of_sexpr(const SExpr& s);

}  // namespace

Element element_of_sexpr(const SExpr& s) {
  if (s.is_atom) {
    if (s.atom == "star") return e_unit();
    if (is_int(s.atom)) return e_int(std::stoll(s.atom));
    serr("ParseError", s, "unknown element '" + s.atom + "'");
  }
  if (!s.kids.empty() && s.kids[0].is_atom) {
    const std::string& h = s.kids[0].atom;
    if (h == "pair" && s.kids.size() == 3)
      return e_pair(element_of_sexpr(s.kids[1]), element_of_sexpr(s.kids[2]));
    if (h == "inl" && s.kids.size() == 2) return e_inl(element_of_sexpr(s.kids[1]));
    if (h == "inr" && s.kids.size() == 2) return e_inr(element_of_sexpr(s.kids[1]));
  }
  serr("ParseError", s, "malformed element");
}

namespace {

Element pair_of_sexpr(const SExpr& s) {
  if (s.is_atom || s.kids.size() != 2) serr("ParseError", s, "expected (elem stateElem)");
  return e_pair(element_of_sexpr(s.kids[0]), element_of_sexpr(s.kids[1]));
}

long long int_of_sexpr(const SExpr& s) {
  if (!s.is_atom || !is_int(s.atom)) serr("ParseError", s, "expected an integer");
  return std::stoll(s.atom);
}

bool member(const std::vector<Element>& xs, const Element& e) {
  return std::any_of(xs.begin(), xs.end(), [&e](const Element& x) { return elem_eq(x, e); });
}

}  // namespace

Model load_comodel(const SExpr& s, const EffectTheory& th) {
  if (s.is_atom || s.kids.empty() || !s.kids[0].is_atom || s.kids[0].atom != "comodel")
    serr("ParseError", s, "expected (comodel ...)");
  Model m;
  m.name = "comodel";
  bool kind_set = false;
  std::map<std::string, std::vector<std::pair<Element, Element>>> tables;
  std::map<std::string, const SExpr*> op_sites;
  for (size_t i = 1; i < s.kids.size(); ++i) {
    const SExpr& item = s.kids[i];
    if (item.is_atom || item.kids.empty() || !item.kids[0].is_atom)
      serr("ParseError", item, "comodel items are (model ...), (state n), (sort name n), (op ...)");
    const std::string& head = item.kids[0].atom;
    if (head == "model") {
      if (item.kids.size() != 2 || !item.kids[1].is_atom)
        serr("ParseError", item, "(model set|dyadic)");
      if (item.kids[1].atom == "set") m.kind = MonadKind::Store;
      else if (item.kids[1].atom == "dyadic") m.kind = MonadKind::Dyadic;
      else serr("ParseError", item, "comodels live in set or dyadic");
      kind_set = true;
    } else if (head == "state") {
      if (item.kids.size() != 2) serr("ParseError", item, "(state n)");
      m.state_size = static_cast<int>(int_of_sexpr(item.kids[1]));
      if (m.state_size < 1) serr("EmptyBase", item, "state set must be nonempty");
    } else if (head == "sort") {
      if (item.kids.size() != 3 || !item.kids[1].is_atom) serr("ParseError", item, "(sort name n)");
      int n = static_cast<int>(int_of_sexpr(item.kids[2]));
      if (n < 1) serr("EmptyBase", item, "sort '" + item.kids[1].atom + "' must be nonempty");
      m.bases[item.kids[1].atom] = n;
    } else if (head == "op") {
      if (item.kids.size() < 2 || !item.kids[1].is_atom) serr("ParseError", item, "(op name entries...)");
      const std::string& name = item.kids[1].atom;
      if (!th.sig.find_effect(name))
        serr("UnknownEffect", item, "theory has no effect '" + name + "'");
      if (tables.count(name)) serr("DuplicateName", item, "operation '" + name + "' given twice");
      op_sites[name] = &item;
      auto& entries = tables[name];
      for (size_t j = 2; j < item.kids.size(); ++j) {
        const SExpr& ent = item.kids[j];
        if (ent.is_atom || ent.kids.size() != 2) serr("ParseError", ent, "entries are (IN OUT)");
        Element in = pair_of_sexpr(ent.kids[0]);
        const SExpr& out = ent.kids[1];
        bool is_dist = !out.is_atom && !out.kids.empty() && out.kids[0].is_atom &&
                       out.kids[0].atom == "dist";
        if (is_dist) {
          if (m.kind != MonadKind::Dyadic)
            serr("ParseError", out, "distributions need the dyadic reading");
          std::vector<std::pair<Element, Rational>> support;
          for (size_t d = 1; d < out.kids.size(); ++d) {
            const SExpr& triple = out.kids[d];
            if (triple.is_atom || triple.kids.size() != 3)
              serr("ParseError", triple, "dist entries are ((elem stateElem) num den)");
            support.emplace_back(pair_of_sexpr(triple.kids[0]),
                                 Rational(int_of_sexpr(triple.kids[1]),
                                          int_of_sexpr(triple.kids[2])));
          }
          entries.emplace_back(in, e_dist(std::move(support)));
        } else {
          Element o = pair_of_sexpr(out);
          entries.emplace_back(in, m.kind == MonadKind::Dyadic
                                       ? e_dist({{o, Rational(1, 1)}})
                                       : o);
        }
      }
    } else {
      serr("ParseError", item, "unknown comodel item '" + head + "'");
    }
  }
  if (!kind_set) serr("ParseError", s, "comodel does not say which model it lives in");
  if (m.kind == MonadKind::Dyadic && m.state_size != 1)
    serr("ParseError", s, "dyadic comodels use the terminal state object");
  for (const auto& sort : th.sig.sorts)
    if (!m.bases.count(sort))
      serr("ComodelMismatch", s, "comodel gives no size for sort '" + sort + "'");
  m.effect_sigs = th.sig.effects;

  for (const auto& [name, esig] : th.sig.effects) {
    auto it = tables.find(name);
    if (it == tables.end())
      serr("ComodelMismatch", s, "comodel is missing operation '" + name + "'");
    const SExpr& site = *op_sites[name];
    Element tbl;
    try {
      tbl = e_table(std::move(it->second));
    } catch (const Error&) {
      serr("ComodelMismatch", site, "operation '" + name + "' repeats an input");
    }
    auto dom = enumerate_type(m, t_tensor(esig.param_type(), t_comp("S")));
    auto cod = enumerate_type(m, t_tensor(esig.result_type(), t_comp("S")));
    if (!dom || !cod) serr("ComodelMismatch", site, "operation '" + name + "' is not finitary");
    if (tbl.table.size() != dom->size())
      serr("ComodelMismatch", site,
           "operation '" + name + "' must cover " + std::to_string(dom->size()) + " inputs");
    for (const auto& d : *dom) {
      Element out;
      try {
        out = apply_elem(tbl, d);
      } catch (const Error&) {
        serr("ComodelMismatch", site,
             "operation '" + name + "' has no entry for " + show_element(d));
      }
      if (m.kind == MonadKind::Dyadic) {
        for (const auto& [point, w] : out.dist)
          if (!member(*cod, point))
            serr("ComodelMismatch", site,
                 "operation '" + name + "' produces the foreign element " + show_element(point));
      } else if (!member(*cod, out)) {
        serr("ComodelMismatch", site,
             "operation '" + name + "' produces the foreign element " + show_element(out));
      }
    }
    m.sacc_fns[name] = [tbl](const Element& in) { return apply_elem(tbl, in); };
  }
  return m;
}

Model load_comodel_text(const std::string& src, const EffectTheory& th) {
  return load_comodel(read_sexpr(src, "<comodel>"), th);
}

// ---------- equation checking ----------

namespace {

std::vector<Type> ctx_types(const ValueCtx& ctx) {
  std::vector<Type> out;
  for (const auto& [n, t] : ctx) out.push_back(t);
  return out;
}

std::string fresh_state_var(const ValueCtx& ctx) {
  std::set<std::string> used;
  for (const auto& [n, t] : ctx) used.insert(n);
  std::string sv = "s";
  for (int i = 0; used.count(sv); ++i) sv = "s" + std::to_string(i);
  return sv;
}

}  // namespace

void decode_env(const ValueCtx& ctx, const Element& tup, EvalEnv& env) {
  if (ctx.empty()) return;
  Element cur = tup;
  for (size_t i = 0; i + 1 < ctx.size(); ++i) {
    env[ctx[i].first] = cur.kids[0];
    cur = cur.kids[1];
  }
  env[ctx.back().first] = cur;
}

ComodelReport check_comodel(const EffectTheory& th, const Model& candidate) {
  ComodelReport rep;
  for (const auto& eq : th.equations) {
    ComodelEqReport er;
    er.label = eq.label;
    std::string sv = fresh_state_var(eq.ctx);
    Term li = sps_term(eq.lhs, sv);
    Term ri = sps_term(eq.rhs, sv);
    Type dom = t_tensor(tuple_type(ctx_types(eq.ctx)), t_comp("S"));
    Type cod = t_tensor(sps_type(eq.type), t_comp("S"));
    ValueCtx ctx = eq.ctx;
    auto side = [&candidate, ctx](const Term& image) {
      return [&candidate, ctx, image](const Element& e) {
        EvalEnv env;
        decode_env(ctx, e.kids[0], env);
        return eval_ecbv(candidate, env, e.kids[1], image);
      };
    };
    Morphism lm{dom, cod, candidate.kind == MonadKind::Dyadic, side(li)};
    Morphism rm{dom, cod, candidate.kind == MonadKind::Dyadic, side(ri)};
    MorphResult r = morphisms_equal(candidate, lm, rm);
    er.pass = r.verdict == MorphVerdict::Equal;
    if (r.verdict == MorphVerdict::Unequal) {
      if (auto all = enumerate_type(candidate, dom))
        for (const auto& e : *all)
          if (show_element(e) == r.witness) {
            er.counterexample = "at " + r.witness + ": lhs = " + show_element(lm.fn(e)) +
                                ", rhs = " + show_element(rm.fn(e));
            break;
          }
      if (er.counterexample.empty()) er.counterexample = "at " + r.witness;
    } else if (r.verdict == MorphVerdict::SampledEqual) {
      er.counterexample = "carrier is not finitely enumerable";
    }
    rep.ok = rep.ok && er.pass;
    rep.equations.push_back(std::move(er));
  }
  return rep;
}

ComodelReport kleisli_equations_hold(const EffectTheory& th, const Model& candidate) {
  ComodelReport rep;
  for (const auto& eq : th.equations) {
    ComodelEqReport er;
    er.label = eq.label;
    er.pass = true;
    Type envT = tuple_type(ctx_types(eq.ctx));
    auto envs = enumerate_type(candidate, envT);
    if (!envs) throw Error("EvalError", "context of '" + eq.label + "' is not finitely enumerable");
    for (const auto& e : *envs) {
      EvalEnv env;
      decode_env(eq.ctx, e, env);
      Element l = eval_fg(candidate, env, eq.lhs);
      Element r = eval_fg(candidate, env, eq.rhs);
      if (!elem_eq(l, r)) {
        er.pass = false;
        er.counterexample =
            "at " + show_element(e) + ": lhs = " + show_element(l) + ", rhs = " + show_element(r);
        break;
      }
    }
    rep.ok = rep.ok && er.pass;
    rep.equations.push_back(std::move(er));
  }
  return rep;
}

// ---------- state access / generic effect / algebraic operation ----------

Morphism sacc_morphism(const Model& m, const EffectTheory& th, const std::string& effect) {
  const EffectSig* e = th.sig.find_effect(effect);
  if (!e) throw Error("UnknownEffect", "theory has no effect '" + effect + "'");
  auto it = m.sacc_fns.find(effect);
  if (it == m.sacc_fns.end()) throw Error("UnknownEffect", "effect '" + effect + "' has no model");
  return Morphism{t_tensor(e->param_type(), t_comp("S")), t_tensor(e->result_type(), t_comp("S")),
                  m.kind == MonadKind::Dyadic, it->second};
}

Morphism sacc_to_geff(const Model& m, const EffectSig& e, const Morphism& f) {
  if (!(f.dom == t_tensor(e.param_type(), t_comp("S"))))
    throw Error("DomainMismatch", "state access has the wrong domain");
  MonadKind kind = m.kind;
  int n = m.state_size;
  auto fn = f.fn;
  Morphism g{e.param_type(), e.result_type(), true, {}};
  g.fn = [kind, n, fn](const Element& a) -> Element {
    switch (kind) {
      case MonadKind::Store: {
        std::vector<std::pair<Element, Element>> entries;
        for (int s = 0; s < n; ++s) entries.emplace_back(e_int(s), fn(e_pair(a, e_int(s))));
        return e_table(std::move(entries));
      }
      case MonadKind::Writer: {
        Element r = fn(e_pair(a, e_str("")));
        return e_pair(r.kids[1], r.kids[0]);
      }
      case MonadKind::Dyadic: {
        Element r = fn(e_pair(a, e_unit()));
        std::vector<std::pair<Element, Rational>> support;
        for (const auto& [qs, w] : r.dist) support.emplace_back(qs.kids[0], w);
        return e_dist(std::move(support));
      }
    }
    throw Error("EvalError", "bad monad kind");
  };
  return g;
}

Morphism geff_to_sacc(const Model& m, const EffectSig& e, const Morphism& g) {
  if (!(g.dom == e.param_type()))
    throw Error("DomainMismatch", "generic effect has the wrong domain");
  MonadKind kind = m.kind;
  auto fn = g.fn;
  Morphism f{t_tensor(e.param_type(), t_comp("S")), t_tensor(e.result_type(), t_comp("S")),
             m.kind == MonadKind::Dyadic, {}};
  f.fn = [kind, fn](const Element& in) -> Element {
    switch (kind) {
      case MonadKind::Store:
        return apply_elem(fn(in.kids[0]), in.kids[1]);
      case MonadKind::Writer: {
        Element t = fn(in.kids[0]);  // (word, q)
        return e_pair(t.kids[1], e_str(in.kids[1].str + t.kids[0].str));
      }
      case MonadKind::Dyadic: {
        Element t = fn(in.kids[0]);
        std::vector<std::pair<Element, Rational>> support;
        for (const auto& [q, w] : t.dist) support.emplace_back(e_pair(q, e_unit()), w);
        return e_dist(std::move(support));
      }
    }
    throw Error("EvalError", "bad monad kind");
  };
  return f;
}

std::pair<int, Element> decode_sum(const Element& q, int n) {
  if (n <= 0) throw Error("EvalError", "empty arity has no elements");
  if (n == 1) return {0, q};
  Element cur = q;
  for (int i = 0; i < n - 1; ++i) {
    if (cur.tag == ElemTag::Inl) return {i, cur.kids[0]};
    if (cur.tag != ElemTag::Inr) throw Error("EvalError", "malformed sum element");
    if (i == n - 2) return {i + 1, cur.kids[0]};
    cur = cur.kids[0];
  }
  throw Error("EvalError", "malformed sum element");
}

std::function<Element(const std::vector<Element>&)> algop_from_sacc(const Model& m,
                                                                    const EffectSig& e,
                                                                    const Morphism& f,
                                                                    const Type&) {
  if (m.kind != MonadKind::Store)
    throw Error("EvalError", "algebraic operations are tabulated in the store reading");
  auto bs = enumerate_type(m, e.param_type());
  if (!bs) throw Error("EvalError", "parameter object is not finitely enumerable");
  int rows = static_cast<int>(e.summands.size());
  int n = m.state_size;
  auto fn = f.fn;
  std::vector<Element> params = *bs;
  // handlers h_i : [[row_i]] -> (states -> X); the result maps [[params]] the
  // same way by running the state access and dispatching on the summand.
  return [params, rows, n, fn](const std::vector<Element>& handlers) -> Element {
    if (static_cast<int>(handlers.size()) != rows)
      throw Error("ArityMismatch", "operation takes " + std::to_string(rows) + " handlers");
    std::vector<std::pair<Element, Element>> outer;
    for (const auto& b : params) {
      std::vector<std::pair<Element, Element>> inner;
      for (int s = 0; s < n; ++s) {
        Element qs = fn(e_pair(b, e_int(s)));
        auto [i, a] = decode_sum(qs.kids[0], rows);
        inner.emplace_back(e_int(s), apply_elem(apply_elem(handlers[i], a), qs.kids[1]));
      }
      outer.emplace_back(b, e_table(std::move(inner)));
    }
    return e_table(std::move(outer));
  };
}

}  // namespace linstate
