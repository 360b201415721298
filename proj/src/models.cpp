#include "linstate/models.hpp"

#include <algorithm>

#include "linstate/surface.hpp"

namespace linstate {

namespace {

[[noreturn]] void everr(const std::string& msg) { throw Error("EvalError", msg); }

bool power_of_two(long long d) {
  if (d <= 0) return false;
  while (d % 2 == 0) d /= 2;
  return d == 1;
}

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (!power_of_two(d)) throw Error("NonDyadicWeight", "weight denominator must be a power of two");
  while (num != 0 && num % 2 == 0 && den > 1) {
    num /= 2;
    den /= 2;
  }
  if (num == 0) den = 1;
}

Rational Rational::operator+(const Rational& o) const {
  long long d = std::max(den, o.den);
  return Rational(num * (d / den) + o.num * (d / o.den), d);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}

bool Rational::operator<(const Rational& o) const { return num * o.den < o.num * den; }

std::string Rational::show() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Element e_unit() { return Element{}; }

Element e_int(long long n) {
  Element e;
  e.tag = ElemTag::Int;
  e.num = n;
  return e;
}

Element e_str(const std::string& s) {
  Element e;
  e.tag = ElemTag::Str;
  e.str = s;
  return e;
}

Element e_pair(Element a, Element b) {
  Element e;
  e.tag = ElemTag::Pair;
  e.kids = {std::move(a), std::move(b)};
  return e;
}

Element e_inl(Element a) {
  Element e;
  e.tag = ElemTag::Inl;
  e.kids = {std::move(a)};
  return e;
}

Element e_inr(Element a) {
  Element e;
  e.tag = ElemTag::Inr;
  e.kids = {std::move(a)};
  return e;
}

Element e_table(std::vector<std::pair<Element, Element>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return elem_less(a.first, b.first); });
  for (size_t i = 1; i < entries.size(); ++i)
    if (elem_eq(entries[i - 1].first, entries[i].first)) everr("duplicate table key");
  Element e;
  e.tag = ElemTag::Table;
  e.table = std::move(entries);
  return e;
}

Element e_dist(std::vector<std::pair<Element, Rational>> support) {
  std::sort(support.begin(), support.end(),
            [](const auto& a, const auto& b) { return elem_less(a.first, b.first); });
  std::vector<std::pair<Element, Rational>> merged;
  for (auto& [el, w] : support) {
    if (!merged.empty() && elem_eq(merged.back().first, el))
      merged.back().second = merged.back().second + w;
    else
      merged.emplace_back(std::move(el), w);
  }
  std::vector<std::pair<Element, Rational>> clean;
  Rational sum(0, 1);
  for (auto& [el, w] : merged) {
    if (w.num == 0) continue;
    if (w.num < 0) throw Error("BadDistribution", "negative weight");
    sum = sum + w;
    clean.emplace_back(std::move(el), w);
  }
  if (!(sum == Rational(1, 1))) throw Error("BadDistribution", "weights must sum to 1");
  Element e;
  e.tag = ElemTag::Dist;
  e.dist = std::move(clean);
  return e;
}

Element e_fun(std::function<Element(const Element&)> f) {
  Element e;
  e.tag = ElemTag::Fun;
  e.fun = std::move(f);
  return e;
}

namespace {

int elem_cmp(const Element& a, const Element& b) {
  if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
  switch (a.tag) {
    case ElemTag::Unit:
      return 0;
    case ElemTag::Int:
      return a.num == b.num ? 0 : (a.num < b.num ? -1 : 1);
    case ElemTag::Str:
      return a.str.compare(b.str) < 0 ? -1 : (a.str == b.str ? 0 : 1);
    case ElemTag::Pair:
    case ElemTag::Inl:
    case ElemTag::Inr: {
      for (size_t i = 0; i < a.kids.size(); ++i)
        if (int c = elem_cmp(a.kids[i], b.kids[i])) return c;
      return 0;
    }
    case ElemTag::Table: {
      if (a.table.size() != b.table.size()) return a.table.size() < b.table.size() ? -1 : 1;
      for (size_t i = 0; i < a.table.size(); ++i) {
        if (int c = elem_cmp(a.table[i].first, b.table[i].first)) return c;
        if (int c = elem_cmp(a.table[i].second, b.table[i].second)) return c;
      }
      return 0;
    }
    case ElemTag::Dist: {
      if (a.dist.size() != b.dist.size()) return a.dist.size() < b.dist.size() ? -1 : 1;
      for (size_t i = 0; i < a.dist.size(); ++i) {
        if (int c = elem_cmp(a.dist[i].first, b.dist[i].first)) return c;
        const Rational &wa = a.dist[i].second, &wb = b.dist[i].second;
        if (!(wa == wb)) return wa < wb ? -1 : 1;
      }
      return 0;
    }
    case ElemTag::Fun:
      throw Error("Uncomparable", "cannot compare function closures");
  }
  return 0;
}

}  // namespace

bool elem_eq(const Element& a, const Element& b) { return elem_cmp(a, b) == 0; }
bool elem_less(const Element& a, const Element& b) { return elem_cmp(a, b) < 0; }

std::string show_element(const Element& e) {
  switch (e.tag) {
    case ElemTag::Unit:
      return "star";
    case ElemTag::Int:
      return std::to_string(e.num);
    case ElemTag::Str:
      return "\"" + e.str + "\"";
    case ElemTag::Pair:
      return "(" + show_element(e.kids[0]) + ", " + show_element(e.kids[1]) + ")";
    case ElemTag::Inl:
      return "(inl " + show_element(e.kids[0]) + ")";
    case ElemTag::Inr:
      return "(inr " + show_element(e.kids[0]) + ")";
    case ElemTag::Table: {
      std::string s = "{";
      for (size_t i = 0; i < e.table.size(); ++i) {
        if (i) s += "; ";
        s += show_element(e.table[i].first) + " -> " + show_element(e.table[i].second);
      }
      return s + "}";
    }
    case ElemTag::Dist: {
      std::string s = "{";
      for (size_t i = 0; i < e.dist.size(); ++i) {
        if (i) s += "; ";
        s += show_element(e.dist[i].first) + " @ " + e.dist[i].second.show();
      }
      return s + "}";
    }
    case ElemTag::Fun:
      return "<fun>";
  }
  return "?";
}

Element apply_elem(const Element& f, const Element& x) {
  if (f.tag == ElemTag::Fun) return f.fun(x);
  if (f.tag != ElemTag::Table) everr("not a function element");
  auto it = std::lower_bound(f.table.begin(), f.table.end(), x,
                             [](const auto& e, const Element& k) { return elem_less(e.first, k); });
  if (it == f.table.end() || !elem_eq(it->first, x)) everr("element outside table domain");
  return it->second;
}

Model build_model(const SExpr& s) {
  auto bad = [&](const std::string& msg) { throw Error("ParseError", msg, s.line, s.col); };
  if (s.is_atom || s.kids.size() < 2 || !s.kids[0].is_atom || s.kids[0].atom != "model")
    bad("expected (model <kind> ...)");
  Model m;
  const std::string& kind = s.kids[1].is_atom ? s.kids[1].atom : "";
  if (kind == "store")
    m.kind = MonadKind::Store;
  else if (kind == "writer")
    m.kind = MonadKind::Writer;
  else if (kind == "dyadic")
    m.kind = MonadKind::Dyadic;
  else
    bad("model kind must be store, writer or dyadic");
  m.name = kind;
  for (size_t i = 2; i < s.kids.size(); ++i) {
    const SExpr& item = s.kids[i];
    if (item.is_atom || item.kids.empty() || !item.kids[0].is_atom)
      bad("expected (state n), (base name n) or (alphabet ...)");
    const std::string& head = item.kids[0].atom;
    if (head == "state" && item.kids.size() == 2 && item.kids[1].is_atom) {
      m.state_size = std::atoi(item.kids[1].atom.c_str());
      if (m.state_size < 1) throw Error("EmptyBase", "state set must be nonempty");
    } else if (head == "base" && item.kids.size() == 3 && item.kids[1].is_atom &&
               item.kids[2].is_atom) {
      int n = std::atoi(item.kids[2].atom.c_str());
      if (n < 1) throw Error("EmptyBase", "base set '" + item.kids[1].atom + "' must be nonempty");
      m.bases[item.kids[1].atom] = n;
    } else if (head == "alphabet" && item.kids.size() >= 2) {
      m.alphabet.clear();
      for (size_t j = 1; j < item.kids.size(); ++j) {
        if (!item.kids[j].is_atom) bad("alphabet symbols must be atoms");
        m.alphabet.push_back(item.kids[j].atom);
      }
    } else {
      bad("unknown model item '" + head + "'");
    }
  }
  return m;
}

Model build_model_text(const std::string& src) { return build_model(read_sexpr(src, "<model>")); }

namespace {

std::vector<Element> cross_pairs(const std::vector<Element>& as, const std::vector<Element>& bs) {
  std::vector<Element> out;
  out.reserve(as.size() * bs.size());
  for (const auto& a : as)
    for (const auto& b : bs) out.push_back(e_pair(a, b));
  return out;
}

constexpr long long kEnumCap = 1000000;

// All functions dom -> cod as tables; nullopt when the space is too large.
std::optional<std::vector<Element>> all_functions(const std::vector<Element>& dom,
                                                  const std::vector<Element>& cod) {
  if (dom.empty()) return std::vector<Element>{e_table({})};
  if (cod.empty()) return std::vector<Element>{};
  long long count = 1;
  for (size_t i = 0; i < dom.size(); ++i) {
    count *= static_cast<long long>(cod.size());
    if (count > kEnumCap) return std::nullopt;
  }
  std::vector<Element> out;
  out.reserve(count);
  std::vector<size_t> idx(dom.size(), 0);
  for (;;) {
    std::vector<std::pair<Element, Element>> entries;
    entries.reserve(dom.size());
    for (size_t i = 0; i < dom.size(); ++i) entries.emplace_back(dom[i], cod[idx[i]]);
    out.push_back(e_table(std::move(entries)));
    size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < cod.size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
  return out;
}

std::vector<Element> state_elems(const Model& m) {
  std::vector<Element> out;
  for (int i = 0; i < m.state_size; ++i) out.push_back(e_int(i));
  return out;
}

// T-elements of a finite value object; store models only.
std::optional<std::vector<Element>> enumerate_monadic(const Model& m,
                                                      const std::vector<Element>& as) {
  if (m.kind != MonadKind::Store) return std::nullopt;
  return all_functions(state_elems(m), cross_pairs(as, state_elems(m)));
}

}  // namespace

std::optional<std::vector<Element>> enumerate_type(const Model& m, const Type& t) {
  using V = std::vector<Element>;
  auto rec = [&m](const Type& ty) { return enumerate_type(m, ty); };
  switch (t.tag) {
    case TypeTag::Base: {
      auto it = m.bases.find(t.name);
      if (it == m.bases.end()) throw Error("UnknownBase", "base type '" + t.name + "' not in model");
      V out;
      for (int i = 0; i < it->second; ++i) out.push_back(e_int(i));
      return out;
    }
    case TypeTag::Unit:
    case TypeTag::OOne:
      return V{e_unit()};
    case TypeTag::Empty:
    case TypeTag::OZero:
      return V{};
    case TypeTag::Prod:
    case TypeTag::Tensor:
    case TypeTag::OProd: {
      auto a = rec(t.kids[0]), b = rec(t.kids[1]);
      if (!a || !b) return std::nullopt;
      return cross_pairs(*a, *b);
    }
    case TypeTag::Sum:
    case TypeTag::OSum: {
      auto a = rec(t.kids[0]), b = rec(t.kids[1]);
      if (!a || !b) return std::nullopt;
      V out;
      for (const auto& e : *a) out.push_back(e_inl(e));
      for (const auto& e : *b) out.push_back(e_inr(e));
      return out;
    }
    case TypeTag::Parr: {
      auto dom = rec(t.kids[0]);
      if (!dom) return std::nullopt;
      auto cod = rec(t.kids[1]);
      if (!cod) return std::nullopt;
      auto ts = enumerate_monadic(m, *cod);
      if (!ts) return std::nullopt;
      return all_functions(*dom, *ts);
    }
    case TypeTag::Lolli:
    case TypeTag::Power: {
      if (m.kind == MonadKind::Dyadic) return std::nullopt;  // codomain under D is infinite
      auto dom = rec(t.kids[0]), cod = rec(t.kids[1]);
      if (!dom || !cod) return std::nullopt;
      return all_functions(*dom, *cod);
    }
    case TypeTag::CompConst:
      switch (m.kind) {
        case MonadKind::Store:
          return state_elems(m);
        case MonadKind::Writer:
          return std::nullopt;  // the free monoid on the alphabet
        case MonadKind::Dyadic:
          return V{e_unit()};  // terminal state object
      }
  }
  return std::nullopt;
}

std::vector<Element> sample_type(const Model& m, const Type& t, int max_n) {
  if (auto all = enumerate_type(m, t)) {
    if (static_cast<int>(all->size()) > max_n) all->resize(max_n);
    return *all;
  }
  switch (t.tag) {
    case TypeTag::CompConst: {
      // length-lex strings over the alphabet
      std::vector<Element> out{e_str("")};
      std::vector<std::string> layer{""};
      while (static_cast<int>(out.size()) < max_n) {
        std::vector<std::string> next;
        for (const auto& w : layer)
          for (const auto& c : m.alphabet) {
            next.push_back(w + c);
            out.push_back(e_str(w + c));
            if (static_cast<int>(out.size()) >= max_n) return out;
          }
        layer = std::move(next);
        if (layer.empty()) break;
      }
      return out;
    }
    case TypeTag::Prod:
    case TypeTag::Tensor:
    case TypeTag::OProd: {
      auto as = sample_type(m, t.kids[0], max_n);
      auto bs = sample_type(m, t.kids[1], max_n);
      std::vector<Element> out;
      if (as.empty() || bs.empty()) return out;
      for (int k = 0; k < max_n; ++k) {
        size_t i = k % as.size(), j = (k / as.size()) % bs.size();
        if (static_cast<size_t>(k) >= as.size() * bs.size()) break;
        out.push_back(e_pair(as[i], bs[j]));
      }
      return out;
    }
    case TypeTag::Sum:
    case TypeTag::OSum: {
      auto as = sample_type(m, t.kids[0], max_n / 2 + 1);
      auto bs = sample_type(m, t.kids[1], max_n / 2 + 1);
      std::vector<Element> out;
      for (const auto& a : as) out.push_back(e_inl(a));
      for (const auto& b : bs) out.push_back(e_inr(b));
      if (static_cast<int>(out.size()) > max_n) out.resize(max_n);
      return out;
    }
    default:
      return {};  // cannot synthesize samples of function objects
  }
}

Element monad_unit(const Model& m, const Element& a) {
  switch (m.kind) {
    case MonadKind::Store: {
      std::vector<std::pair<Element, Element>> entries;
      for (const auto& s : state_elems(m)) entries.emplace_back(s, e_pair(a, s));
      return e_table(std::move(entries));
    }
    case MonadKind::Writer:
      return e_pair(e_str(""), a);
    case MonadKind::Dyadic:
      return e_dist({{a, Rational(1, 1)}});
  }
  everr("bad monad kind");
}

Element monad_bind(const Model& m, const Element& t,
                   const std::function<Element(const Element&)>& f) {
  switch (m.kind) {
    case MonadKind::Store: {
      std::vector<std::pair<Element, Element>> entries;
      for (const auto& s : state_elems(m)) {
        Element p = apply_elem(t, s);  // (a, s')
        Element r = apply_elem(f(p.kids[0]), p.kids[1]);
        entries.emplace_back(s, r);
      }
      return e_table(std::move(entries));
    }
    case MonadKind::Writer: {
      Element r = f(t.kids[1]);
      return e_pair(e_str(t.kids[0].str + r.kids[0].str), r.kids[1]);
    }
    case MonadKind::Dyadic: {
      std::vector<std::pair<Element, Rational>> support;
      for (const auto& [a, w] : t.dist) {
        Element r = f(a);
        for (const auto& [b, v] : r.dist) support.emplace_back(b, w * v);
      }
      return e_dist(std::move(support));
    }
  }
  everr("bad monad kind");
}

namespace {

Element env_lookup(const EvalEnv& env, const std::string& name) {
  auto it = env.find(name);
  if (it == env.end()) everr("environment missing variable '" + name + "'");
  return it->second;
}

Element tuple_elem(const std::vector<Element>& parts) {
  if (parts.empty()) return e_unit();
  Element acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = e_pair(parts[i], acc);
  return acc;
}

// Generic effect induced by the bound state access: B -> T(sum of rows).
Element geff_element(const Model& m, const std::string& name, const Element& tup) {
  auto it = m.sacc_fns.find(name);
  if (it == m.sacc_fns.end()) throw Error("UnknownEffect", "effect '" + name + "' has no model");
  const auto& f = it->second;
  switch (m.kind) {
    case MonadKind::Store: {
      std::vector<std::pair<Element, Element>> entries;
      for (const auto& s : state_elems(m)) entries.emplace_back(s, f(e_pair(tup, s)));
      return e_table(std::move(entries));
    }
    case MonadKind::Writer: {
      Element r = f(e_pair(tup, e_str("")));  // (q, w): equivariant, determined at the empty word
      return e_pair(r.kids[1], r.kids[0]);
    }
    case MonadKind::Dyadic: {
      Element r = f(e_pair(tup, e_unit()));  // distribution over (q, star)
      std::vector<std::pair<Element, Rational>> support;
      for (const auto& [qs, w] : r.dist) support.emplace_back(qs.kids[0], w);
      return e_dist(std::move(support));
    }
  }
  everr("bad monad kind");
}

struct FgEval {
  const Model& m;

  Element value(const EvalEnv& env, const Term& t) {
    switch (t.tag) {
      case TermTag::Var:
        return env_lookup(env, t.name);
      case TermTag::Star:
        return e_unit();
      case TermTag::Pair:
        return e_pair(value(env, t.kids[0]), value(env, t.kids[1]));
      case TermTag::Fst:
        return value(env, t.kids[0]).kids[0];
      case TermTag::Snd:
        return value(env, t.kids[0]).kids[1];
      case TermTag::Inl:
        return e_inl(value(env, t.kids[0]));
      case TermTag::Inr:
        return e_inr(value(env, t.kids[0]));
      case TermTag::Case: {
        Element s = value(env, t.kids[0]);
        EvalEnv e2 = env;
        if (s.tag == ElemTag::Inl) {
          e2[t.binders[0]] = s.kids[0];
          return value(e2, t.kids[1]);
        }
        e2[t.binders[1]] = s.kids[0];
        return value(e2, t.kids[2]);
      }
      case TermTag::Absurd:
        everr("empty type has no elements");
      case TermTag::Lam: {
        auto dom = enumerate_type(m, t.ann[0]);
        EvalEnv captured = env;
        Term body = t.kids[0];
        std::string x = t.name;
        auto call = [this, captured, body, x](const Element& a) {
          EvalEnv e2 = captured;
          e2[x] = a;
          return producer(e2, body);
        };
        if (!dom) return e_fun(call);
        std::vector<std::pair<Element, Element>> entries;
        for (const auto& a : *dom) entries.emplace_back(a, call(a));
        return e_table(std::move(entries));
      }
      case TermTag::Const:
        everr("no interpretation for constant '" + t.name + "'");
      default:
        everr("not a value form");
    }
  }

  Element producer(const EvalEnv& env, const Term& t) {
    switch (t.tag) {
      case TermTag::Return:
        return monad_unit(m, value(env, t.kids[0]));
      case TermTag::Let: {
        Element tm = producer(env, t.kids[0]);
        EvalEnv captured = env;
        Term body = t.kids[1];
        std::string x = t.name;
        return monad_bind(m, tm, [this, captured, body, x](const Element& a) {
          EvalEnv e2 = captured;
          e2[x] = a;
          return producer(e2, body);
        });
      }
      case TermTag::App:
        return apply_elem(value(env, t.kids[0]), value(env, t.kids[1]));
      case TermTag::Geff: {
        std::vector<Element> args;
        for (const auto& k : t.kids) args.push_back(value(env, k));
        return geff_element(m, t.name, tuple_elem(args));
      }
      default:
        everr("not a producer form");
    }
  }
};

struct EcEval {
  const Model& m;

  Element munit(const Element& e) {
    return m.kind == MonadKind::Dyadic ? e_dist({{e, Rational(1, 1)}}) : e;
  }

  Element mbind(const Element& t, const std::function<Element(const Element&)>& f) {
    if (m.kind != MonadKind::Dyadic) return f(t);
    std::vector<std::pair<Element, Rational>> support;
    for (const auto& [a, w] : t.dist) {
      Element r = f(a);
      for (const auto& [b, v] : r.dist) support.emplace_back(b, w * v);
    }
    return e_dist(std::move(support));
  }

  Element value(const EvalEnv& env, const Term& t) {
    switch (t.tag) {
      case TermTag::Var:
        return env_lookup(env, t.name);
      case TermTag::Star:
        return e_unit();
      case TermTag::Pair:
        return e_pair(value(env, t.kids[0]), value(env, t.kids[1]));
      case TermTag::Fst:
        return value(env, t.kids[0]).kids[0];
      case TermTag::Snd:
        return value(env, t.kids[0]).kids[1];
      case TermTag::Inl:
        return e_inl(value(env, t.kids[0]));
      case TermTag::Inr:
        return e_inr(value(env, t.kids[0]));
      case TermTag::Case: {
        Element s = value(env, t.kids[0]);
        EvalEnv e2 = env;
        if (s.tag == ElemTag::Inl) {
          e2[t.binders[0]] = s.kids[0];
          return value(e2, t.kids[1]);
        }
        e2[t.binders[1]] = s.kids[0];
        return value(e2, t.kids[2]);
      }
      case TermTag::Absurd:
        everr("empty type has no elements");
      case TermTag::Llam: {
        auto dom = enumerate_type(m, t.ann[0]);
        EvalEnv captured = env;
        Term body = t.kids[0];
        auto call = [this, captured, body](const Element& a) { return comp(captured, a, body); };
        if (!dom) return e_fun(call);
        std::vector<std::pair<Element, Element>> entries;
        for (const auto& a : *dom) entries.emplace_back(a, call(a));
        return e_table(std::move(entries));
      }
      case TermTag::Sacc: {
        auto it = m.sacc_fns.find(t.name);
        if (it == m.sacc_fns.end())
          throw Error("UnknownEffect", "effect '" + t.name + "' has no model");
        auto sig = m.effect_sigs.find(t.name);
        auto f = it->second;
        if (sig != m.effect_sigs.end()) {
          Type dom_ty = t_tensor(sig->second.param_type(), t_comp("S"));
          if (auto dom = enumerate_type(m, dom_ty)) {
            std::vector<std::pair<Element, Element>> entries;
            for (const auto& a : *dom) entries.emplace_back(a, f(a));
            return e_table(std::move(entries));
          }
        }
        return e_fun(f);
      }
      case TermTag::Const:
        everr("no interpretation for constant '" + t.name + "'");
      default:
        everr("not a value form");
    }
  }

  // Computations denote Kleisli maps over the ambient monad (identity for
  // store and writer, distributions for dyadic).
  Element comp(const EvalEnv& env, const Element& lin, const Term& t) {
    switch (t.tag) {
      case TermTag::Var:
        return munit(lin);
      case TermTag::Lapp: {
        Element f = value(env, t.kids[0]);
        return mbind(comp(env, lin, t.kids[1]),
                     [&f](const Element& a) { return apply_elem(f, a); });
      }
      case TermTag::Tens: {
        Element a = value(env, t.kids[0]);
        return mbind(comp(env, lin, t.kids[1]),
                     [this, &a](const Element& b) { return munit(e_pair(a, b)); });
      }
      case TermTag::Lettens: {
        Element tm = comp(env, lin, t.kids[0]);
        return mbind(tm, [this, &env, &t](const Element& p) {
          EvalEnv e2 = env;
          e2[t.binders[0]] = p.kids[0];
          return comp(e2, p.kids[1], t.kids[1]);
        });
      }
      case TermTag::Oinl:
        return mbind(comp(env, lin, t.kids[0]),
                     [this](const Element& a) { return munit(e_inl(a)); });
      case TermTag::Oinr:
        return mbind(comp(env, lin, t.kids[0]),
                     [this](const Element& a) { return munit(e_inr(a)); });
      case TermTag::Ocase: {
        return mbind(comp(env, lin, t.kids[0]), [this, &env, &t](const Element& s) {
          if (s.tag == ElemTag::Inl) return comp(env, s.kids[0], t.kids[1]);
          return comp(env, s.kids[0], t.kids[2]);
        });
      }
      case TermTag::Oabsurd:
        return mbind(comp(env, lin, t.kids[0]),
                     [](const Element&) -> Element { everr("empty computation object"); });
      case TermTag::Plam: {
        if (m.kind == MonadKind::Dyadic) everr("continuation forms have no dyadic reading");
        auto dom = enumerate_type(m, t.ann[0]);
        EvalEnv captured = env;
        Element lin2 = lin;
        Term body = t.kids[0];
        std::string x = t.name;
        auto call = [this, captured, lin2, body, x](const Element& a) {
          EvalEnv e2 = captured;
          e2[x] = a;
          return comp(e2, lin2, body);
        };
        if (!dom) return e_fun(call);
        std::vector<std::pair<Element, Element>> entries;
        for (const auto& a : *dom) entries.emplace_back(a, call(a));
        return e_table(std::move(entries));
      }
      case TermTag::Papp: {
        Element v = value(env, t.kids[1]);
        return mbind(comp(env, lin, t.kids[0]),
                     [&v](const Element& f) { return apply_elem(f, v); });
      }
      default:
        everr("not a computation form");
    }
  }
};

}  // namespace

Element eval_fg(const Model& m, const EvalEnv& env, const Term& t) {
  FgEval ev{m};
  return producer_form(t) ? ev.producer(env, t) : ev.value(env, t);
}

Element eval_ecbv(const Model& m, const EvalEnv& env, const std::optional<Element>& lin,
                  const Term& t) {
  EcEval ev{m};
  if (computation_form(t)) {
    if (!lin) everr("computation needs a linear input");
    return ev.comp(env, *lin, t);
  }
  return ev.value(env, t);
}

MorphResult morphisms_equal(const Model& m, const Morphism& f, const Morphism& g) {
  if (f.dom != g.dom) throw Error("DomainMismatch", "morphism domains differ");
  if (auto dom = enumerate_type(m, f.dom)) {
    for (const auto& e : *dom)
      if (!elem_eq(f.fn(e), g.fn(e))) return {MorphVerdict::Unequal, show_element(e)};
    return {MorphVerdict::Equal, ""};
  }
  for (const auto& e : sample_type(m, f.dom, kSampleCount))
    if (!elem_eq(f.fn(e), g.fn(e))) return {MorphVerdict::Unequal, show_element(e)};
  return {MorphVerdict::SampledEqual, ""};
}

MonadCheckReport linear_state_monad_check(const Model& m, const Type& a) {
  if (m.kind != MonadKind::Store) everr("store model required");
  MonadCheckReport rep;
  auto as_opt = enumerate_type(m, a);
  if (!as_opt) everr("object not finitely enumerable");
  const std::vector<Element>& as = *as_opt;
  std::vector<Element> states = state_elems(m);

  // Hom(S, A (x) S): all functions from states to A x S.
  auto hom = all_functions(states, cross_pairs(as, states));
  auto ts = enumerate_monadic(m, as);
  if (!hom || !ts) everr("enumeration too large");
  rep.hom_count = static_cast<long long>(hom->size());
  rep.t_count = static_cast<long long>(ts->size());
  long long formula = 1;
  for (int i = 0; i < m.state_size; ++i)
    formula *= static_cast<long long>(as.size()) * m.state_size;
  bool counts_ok = rep.hom_count == rep.t_count && rep.t_count == formula;

  // Unit: the bijection sends unit(a) to s |-> (a, s).
  bool unit_ok = true;
  for (const auto& el : as) {
    std::vector<std::pair<Element, Element>> entries;
    for (const auto& s : states) entries.emplace_back(s, e_pair(el, s));
    if (!elem_eq(monad_unit(m, el), e_table(std::move(entries)))) {
      unit_ok = false;
      break;
    }
  }

  // Bind: T-bind coincides with composition in C through the bijection.
  // The family of f: A -> T A is enumerated fully when small, otherwise
  // restricted to the constant and unit-composed families.
  std::vector<Element> fs;
  bool full_family = false;
  {
    long long family = 1;
    bool fits = true;
    for (size_t i = 0; i < as.size(); ++i) {
      family *= rep.t_count;
      if (family > 50000) {
        fits = false;
        break;
      }
    }
    if (fits && rep.t_count * family > 200000) fits = false;
    if (fits) {
      auto alltf = all_functions(as, *ts);
      fs = *alltf;
      full_family = true;
    } else {
      for (const auto& t : *ts) {
        std::vector<std::pair<Element, Element>> entries;
        for (const auto& el : as) entries.emplace_back(el, t);
        fs.push_back(e_table(std::move(entries)));
      }
      if (auto gs = all_functions(as, as)) {
        for (const auto& g : *gs) {
          std::vector<std::pair<Element, Element>> entries;
          for (const auto& el : as) entries.emplace_back(el, monad_unit(m, apply_elem(g, el)));
          fs.push_back(e_table(std::move(entries)));
        }
      }
    }
  }
  bool bind_ok = true;
  for (const auto& t : *ts) {
    for (const auto& f : fs) {
      Element lhs = monad_bind(m, t, [&f](const Element& el) { return apply_elem(f, el); });
      std::vector<std::pair<Element, Element>> entries;
      for (const auto& s : states) {
        Element p = apply_elem(t, s);
        entries.emplace_back(s, apply_elem(apply_elem(f, p.kids[0]), p.kids[1]));
      }
      if (!elem_eq(lhs, e_table(std::move(entries)))) {
        bind_ok = false;
        break;
      }
    }
    if (!bind_ok) break;
  }

  rep.ok = counts_ok && unit_ok && bind_ok;
  rep.detail = "|C(S, A(x)S)| = " + std::to_string(rep.hom_count) +
               ", |T A| = " + std::to_string(rep.t_count) +
               ", formula = " + std::to_string(formula) + "; unit " +
               (unit_ok ? "commutes" : "fails") + "; bind " + (bind_ok ? "commutes" : "fails") +
               (full_family ? " (full family)" : " (constant and unit families)");
  return rep;
}

}  // namespace linstate
