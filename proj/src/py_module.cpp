// Python facade over the toolchain: term files in, term files or reports out.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linstate/decide.hpp"
#include "linstate/termfile.hpp"
#include "linstate/translate.hpp"

namespace py = pybind11;
using namespace linstate;

namespace {

// Theory argument: builtin name, theory file text, or "" for the permissive
// signature. Model argument: builtin name or model file text.
EffectTheory theory_of(const std::string& spec) {
  if (spec.empty()) return permissive_theory();
  if (is_builtin_theory(spec)) return builtin_theory(spec);
  return load_theory_text(spec, "<theory>");
}

Model model_of(const std::string& spec) {
  if (is_builtin_theory(spec)) return canonical_model(spec);
  return build_model_text(spec);
}

py::dict py_check(const std::string& term, const std::string& theory) {
  TermFile tf = parse_term_file(term);
  Judgement j = judge(theory_of(theory), tf);
  py::dict out;
  out["mode"] = mode_name(j.mode);
  out["type"] = print_type(j.type);
  return out;
}

std::string py_translate(const std::string& term, const std::string& mode,
                         const std::string& theory) {
  if (mode != "sps" && mode != "cps")
    throw Error("UsageError", "translation mode must be sps or cps");
  TermFile tf = parse_term_file(term);
  if (tf.family != TermFamily::Fg)
    throw Error("TypeError", "translation starts from a fine-grain term");
  EffectTheory th = theory_of(theory);
  Judgement j = judge(th, tf);
  if (mode == "sps") {
    ValueCtx tctx = sps_ctx(tf.ctx);
    if (j.mode == Mode::Producer) {
      std::string sv = fresh_var("s", tf.ctx, tf.parsed.term);
      return show_term_file(TermFamily::Ecbv, tctx, LinearVar{sv, t_comp("S")},
                            sps_term(tf.parsed.term, sv));
    }
    return show_term_file(TermFamily::Ecbv, tctx, std::nullopt, sps_term(tf.parsed.term, "s"));
  }
  ValueCtx tctx = cps_ctx(tf.ctx);
  std::string kv = fresh_var("k", tf.ctx, tf.parsed.term);
  Term image = cps_term(th.sig, tf.ctx, tf.parsed.term, kv);
  if (j.mode == Mode::Producer) {
    Type kt = t_power(cps_type(j.type), t_comp("R"));
    return show_term_file(TermFamily::Cps, tctx, LinearVar{kv, kt}, image);
  }
  return show_term_file(TermFamily::Cps, tctx, std::nullopt, image);
}

std::string py_untranslate(const std::string& term, const std::string& theory) {
  TermFile tf = parse_term_file(term);
  if (tf.family != TermFamily::Ecbv)
    throw Error("TypeError", "readback starts from an enriched term");
  ValueCtx back_ctx;
  for (const auto& [n, ty] : tf.ctx) {
    auto inv = invert_sps_type(ty);
    if (!inv)
      throw Error("NotInImageFragment",
                  "context type of '" + n + "' is not the image of a fine-grain type");
    back_ctx.emplace_back(n, *inv);
  }
  ParsedTerm back = untranslate(theory_of(theory).sig, tf.parsed.term);
  return show_term_file(TermFamily::Fg, back_ctx, std::nullopt, back.term);
}

py::dict py_normalize(const std::string& term, bool trace, long long fuel) {
  TermFile tf = parse_term_file(term);
  NormalizeResult nr = normalize(tf.parsed.term, fuel, trace);
  py::dict out;
  out["term"] = show_term_file(tf.family, tf.ctx, tf.lin, nr.term);
  py::list steps;
  if (trace)
    for (const auto& st : nr.steps) {
      py::dict d;
      d["rule"] = st.rule;
      d["path"] = st.path;
      steps.append(d);
    }
  out["steps"] = steps;
  return out;
}

py::dict py_decide_equal(const std::string& a_text, const std::string& b_text,
                         const std::string& theory) {
  TermFile a = parse_term_file(a_text);
  TermFile b = parse_term_file(b_text);
  if (a.family != b.family) throw Error("TypeError", "the sides come from different families");
  if (a.ctx != b.ctx) throw Error("TypeError", "the sides declare different contexts");
  bool lin_match = (!a.lin && !b.lin) ||
                   (a.lin && b.lin && a.lin->name == b.lin->name && a.lin->type == b.lin->type);
  if (!lin_match) throw Error("TypeError", "the sides declare different linear variables");
  DecideResult d =
      decide_eq(theory_of(theory), a.ctx, a.lin, a.parsed.term, b.parsed.term, a.family);
  py::dict out;
  out["verdict"] = d.verdict == Verdict::Equal     ? "equal"
                   : d.verdict == Verdict::Unequal ? "unequal"
                                                   : "unknown";
  out["reason"] = d.reason;
  out["witness"] = d.witness;
  return out;
}

std::string py_evaluate(const std::string& term, const std::string& model, int state,
                        const std::string& env_text) {
  TermFile tf = parse_term_file(term);
  Model m = model_of(model);
  EvalEnv env;
  if (!env_text.empty()) {
    SExpr e = read_sexpr(env_text, "<env>");
    if (e.is_atom) throw Error("ParseError", "environment is ((name elem) ...)", e.line, e.col);
    for (const auto& b : e.kids) {
      if (b.is_atom || b.kids.size() != 2 || !b.kids[0].is_atom)
        throw Error("ParseError", "environment entries are (name elem)", b.line, b.col);
      env[b.kids[0].atom] = element_of_sexpr(b.kids[1]);
    }
  }
  Element result;
  if (tf.family == TermFamily::Fg) {
    result = eval_fg(m, env, tf.parsed.term);
    if (tf.parsed.mode == Mode::Producer && m.kind == MonadKind::Store && state >= 0)
      result = apply_elem(result, e_int(state));
  } else {
    if (tf.family == TermFamily::Cps && tf.parsed.mode == Mode::Computation)
      throw Error("EvalError", "continuation computations are not directly evaluable");
    std::optional<Element> lin;
    if (tf.parsed.mode == Mode::Computation) {
      switch (m.kind) {
        case MonadKind::Store:
          lin = e_int(state >= 0 ? state : 0);
          break;
        case MonadKind::Writer:
          lin = e_str("");
          break;
        case MonadKind::Dyadic:
          lin = e_unit();
          break;
      }
    }
    result = eval_ecbv(m, env, lin, tf.parsed.term);
  }
  return show_element(result);
}

py::dict py_check_theory(const std::string& theory, const std::string& comodel_text) {
  if (theory.empty()) throw Error("UnknownTheory", "checking a comodel needs a theory");
  EffectTheory th = theory_of(theory);
  Model cand = load_comodel_text(comodel_text, th);
  ComodelReport rep = check_comodel(th, cand);
  py::dict out;
  out["ok"] = rep.ok;
  py::list eqs;
  for (const auto& er : rep.equations) {
    py::dict d;
    d["label"] = er.label;
    d["pass"] = er.pass;
    d["counterexample"] = er.counterexample;
    eqs.append(d);
  }
  out["equations"] = eqs;
  return out;
}

py::dict py_roundtrip(const std::string& term, const std::string& theory) {
  TermFile tf = parse_term_file(term);
  if (tf.family != TermFamily::Fg)
    throw Error("TypeError", "the round trip starts from a fine-grain term");
  EffectTheory th = theory_of(theory);
  judge(th, tf);
  std::string sv = fresh_var("s", tf.ctx, tf.parsed.term);
  NormalizeResult nr = normalize(sps_term(tf.parsed.term, sv));
  ParsedTerm back = untranslate(th.sig, nr.term);
  DecideResult d = decide_eq(th, tf.ctx, std::nullopt, back.term, tf.parsed.term, TermFamily::Fg);
  py::dict out;
  out["verdict"] = d.verdict == Verdict::Equal     ? "equal"
                   : d.verdict == Verdict::Unequal ? "unequal"
                                                   : "unknown";
  out["readback"] = show_term_file(TermFamily::Fg, tf.ctx, std::nullopt, back.term);
  return out;
}

}  // namespace

PYBIND11_MODULE(_linstate, m) {
  m.doc() = "state-passing and continuation-passing toolchain for fine-grain call-by-value";

  static py::exception<Error> exc(m, "LinstateError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      std::string msg = e.code + ": " + e.what();
      if (e.line > 0)
        msg += " (line " + std::to_string(e.line) + ", col " + std::to_string(e.col) + ")";
      py::set_error(exc, msg.c_str());
    }
  });

  m.def("check", &py_check, py::arg("term"), py::arg("theory") = "",
        "typecheck a term file; returns {mode, type}");
  m.def("translate", &py_translate, py::arg("term"), py::arg("mode") = "sps",
        py::arg("theory") = "",
        "state-passing (sps) or continuation-passing (cps) image of a fine-grain term");
  m.def("untranslate", &py_untranslate, py::arg("term"), py::arg("theory") = "",
        "read an enriched term in the translation image back to a fine-grain term");
  m.def("normalize", &py_normalize, py::arg("term"), py::arg("trace") = false,
        py::arg("fuel") = -1, "normal form; returns {term, steps}");
  m.def("decide_equal", &py_decide_equal, py::arg("a"), py::arg("b"), py::arg("theory") = "",
        "decide equality in the theory; returns {verdict, reason, witness}");
  m.def("evaluate", &py_evaluate, py::arg("term"), py::arg("model"), py::arg("state") = -1,
        py::arg("env") = "", "evaluate in a concrete model; returns the element");
  m.def("check_theory", &py_check_theory, py::arg("theory"), py::arg("comodel"),
        "check a comodel against a theory; returns {ok, equations}");
  m.def("roundtrip", &py_roundtrip, py::arg("term"), py::arg("theory") = "",
        "translate, normalize, read back, and compare; returns {verdict, readback}");
}
