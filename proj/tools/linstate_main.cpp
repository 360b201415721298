#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "linstate/decide.hpp"
#include "linstate/termfile.hpp"
#include "linstate/translate.hpp"

using namespace linstate;

namespace {

struct Report {
  std::string verdict;
  std::vector<std::string> diagnostics;
  std::string witness;
  std::vector<std::string> lines;  // plain-text body; first line is the verdict
  int exit_code = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

TermFile load_term_file(const std::string& path) { return parse_term_file(slurp(path), path); }

EffectTheory resolve_theory(const std::string& builtin, const std::string& file) {
  if (!builtin.empty()) return builtin_theory(builtin);
  if (!file.empty()) return load_theory_text(slurp(file), file);
  return permissive_theory();
}

std::string span(const Error& e) {
  if (e.line <= 0) return "";
  return " (line " + std::to_string(e.line) + ", col " + std::to_string(e.col) + ")";
}

// ---------- subcommands ----------

Report run_check(const std::string& path, const EffectTheory& th) {
  TermFile tf = load_term_file(path);
  Judgement j = judge(th, tf);
  Report r;
  r.verdict = "ok";
  std::string line = mode_name(j.mode) + " : " + print_type(j.type);
  r.lines = {line};
  r.diagnostics = {line};
  return r;
}

Report run_translate(const std::string& path, const std::string& mode, const EffectTheory& th) {
  TermFile tf = load_term_file(path);
  if (tf.family != TermFamily::Fg)
    throw Error("TypeError", "translation starts from a fine-grain term");
  Judgement j = judge(th, tf);
  Report r;
  r.verdict = "ok";
  if (mode == "sps") {
    ValueCtx tctx = sps_ctx(tf.ctx);
    if (j.mode == Mode::Producer) {
      std::string sv = fresh_var("s", tf.ctx, tf.parsed.term);
      Term image = sps_term(tf.parsed.term, sv);
      r.lines = {show_term_file(TermFamily::Ecbv, tctx, LinearVar{sv, t_comp("S")}, image)};
    } else {
      r.lines = {show_term_file(TermFamily::Ecbv, tctx, std::nullopt,
                                sps_term(tf.parsed.term, "s"))};
    }
  } else {
    ValueCtx tctx = cps_ctx(tf.ctx);
    std::string kv = fresh_var("k", tf.ctx, tf.parsed.term);
    Term image = cps_term(th.sig, tf.ctx, tf.parsed.term, kv);
    if (j.mode == Mode::Producer) {
      Type kt = t_power(cps_type(j.type), t_comp("R"));
      r.lines = {show_term_file(TermFamily::Cps, tctx, LinearVar{kv, kt}, image)};
    } else {
      r.lines = {show_term_file(TermFamily::Cps, tctx, std::nullopt, image)};
    }
  }
  r.diagnostics = r.lines;
  return r;
}

Report run_untranslate(const std::string& path, const EffectTheory& th) {
  TermFile tf = load_term_file(path);
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
  ParsedTerm back = untranslate(th.sig, tf.parsed.term);
  Report r;
  r.verdict = "ok";
  r.lines = {show_term_file(TermFamily::Fg, back_ctx, std::nullopt, back.term)};
  r.diagnostics = r.lines;
  return r;
}

Report run_normalize(const std::string& path, bool trace) {
  TermFile tf = load_term_file(path);
  NormalizeResult nr = normalize(tf.parsed.term, -1, trace);
  Report r;
  r.verdict = "ok";
  if (trace)
    for (const auto& st : nr.steps) {
      std::string loc = "root";
      if (!st.path.empty()) {
        loc.clear();
        for (size_t i = 0; i < st.path.size(); ++i)
          loc += (i ? "." : "") + std::to_string(st.path[i]);
      }
      r.lines.push_back(st.rule + " @ " + loc);
    }
  r.lines.push_back(show_term_file(tf.family, tf.ctx, tf.lin, nr.term));
  r.diagnostics = r.lines;
  return r;
}

Report run_eq(const std::string& pa, const std::string& pb, const EffectTheory& th) {
  TermFile a = load_term_file(pa);
  TermFile b = load_term_file(pb);
  if (a.family != b.family) throw Error("TypeError", "the sides come from different families");
  if (a.ctx != b.ctx) throw Error("TypeError", "the sides declare different contexts");
  bool lin_match = (!a.lin && !b.lin) ||
                   (a.lin && b.lin && a.lin->name == b.lin->name && a.lin->type == b.lin->type);
  if (!lin_match) throw Error("TypeError", "the sides declare different linear variables");
  DecideResult d = decide_eq(th, a.ctx, a.lin, a.parsed.term, b.parsed.term, a.family);
  Report r;
  r.verdict = d.verdict == Verdict::Equal     ? "equal"
              : d.verdict == Verdict::Unequal ? "unequal"
                                              : "unknown";
  r.lines = {r.verdict, "reason: " + d.reason};
  r.diagnostics = {d.reason};
  if (!d.witness.empty()) {
    r.witness = d.witness;
    r.lines.push_back("witness: " + d.witness);
  }
  r.exit_code = d.verdict == Verdict::Equal ? 0 : 1;
  return r;
}

Report run_eval(const std::string& path, const std::string& model_arg, int state,
                const std::string& env_arg) {
  TermFile tf = load_term_file(path);
  Model m = is_builtin_theory(model_arg) ? canonical_model(model_arg)
                                         : build_model_text(slurp(model_arg));
  EvalEnv env;
  if (!env_arg.empty()) {
    SExpr e = read_sexpr(env_arg, "<env>");
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
  Report r;
  r.verdict = "ok";
  r.lines = {show_element(result)};
  r.diagnostics = r.lines;
  return r;
}

Report run_check_theory(const EffectTheory& th, const std::string& comodel_path) {
  Model cand = load_comodel_text(slurp(comodel_path), th);
  ComodelReport rep = check_comodel(th, cand);
  Report r;
  r.verdict = rep.ok ? "pass" : "fail";
  r.lines = {r.verdict};
  for (const auto& er : rep.equations) {
    std::string line = "  " + er.label + ": " + (er.pass ? "pass" : "fail");
    if (!er.pass && !er.counterexample.empty()) {
      line += " (" + er.counterexample + ")";
      if (r.witness.empty()) r.witness = er.counterexample;
    }
    r.lines.push_back(line);
    r.diagnostics.push_back(er.label + ": " + (er.pass ? "pass" : "fail"));
  }
  r.exit_code = rep.ok ? 0 : 1;
  return r;
}

Report run_roundtrip(const std::string& path, const EffectTheory& th) {
  TermFile tf = load_term_file(path);
  if (tf.family != TermFamily::Fg)
    throw Error("TypeError", "the round trip starts from a fine-grain term");
  judge(th, tf);
  std::string sv = fresh_var("s", tf.ctx, tf.parsed.term);
  Term image = sps_term(tf.parsed.term, sv);
  NormalizeResult nr = normalize(image);
  ParsedTerm back = untranslate(th.sig, nr.term);
  DecideResult d = decide_eq(th, tf.ctx, std::nullopt, back.term, tf.parsed.term, TermFamily::Fg);
  Report r;
  r.verdict = d.verdict == Verdict::Equal     ? "equal"
              : d.verdict == Verdict::Unequal ? "unequal"
                                              : "unknown";
  r.lines = {r.verdict,
             "readback: " + show_term_file(TermFamily::Fg, tf.ctx, std::nullopt, back.term)};
  r.diagnostics = {d.reason};
  r.exit_code = d.verdict == Verdict::Equal ? 0 : 1;
  return r;
}

std::string morph_verdict(const MorphResult& mr) {
  switch (mr.verdict) {
    case MorphVerdict::Equal:
      return "ok";
    case MorphVerdict::SampledEqual:
      return "ok (sampled)";
    case MorphVerdict::Unequal:
      return "fails at " + mr.witness;
  }
  return "?";
}

Report run_correspond(const std::string& builtin) {
  if (!is_builtin_theory(builtin))
    throw Error("UnknownTheory", "correspondence reports need a builtin carrier");
  EffectTheory th = builtin_theory(builtin);
  Model m = canonical_model(builtin);
  Report r;
  bool ok = true;
  for (const auto& [name, esig] : th.sig.effects) {
    Morphism f = sacc_morphism(m, th, name);
    Morphism g = sacc_to_geff(m, esig, f);
    Morphism f2 = geff_to_sacc(m, esig, g);
    MorphResult rf = morphisms_equal(m, f, f2);
    Morphism g2 = sacc_to_geff(m, esig, f2);
    MorphResult rg = morphisms_equal(m, g, g2);
    ok = ok && rf.verdict != MorphVerdict::Unequal && rg.verdict != MorphVerdict::Unequal;
    std::string line = "  " + name + ": state access round trip " + morph_verdict(rf) +
                       "; generic effect round trip " + morph_verdict(rg);
    r.lines.push_back(line);
    r.diagnostics.push_back(line.substr(2));
  }
  ComodelReport cm = check_comodel(th, m);
  ComodelReport kl = kleisli_equations_hold(th, m);
  ok = ok && cm.ok && kl.ok;
  std::string eqline = std::string("  equations in the canonical carrier: comodel ") +
                       (cm.ok ? "pass" : "fail") + "; kleisli " + (kl.ok ? "pass" : "fail");
  r.lines.push_back(eqline);
  r.diagnostics.push_back(eqline.substr(2));
  r.verdict = ok ? "pass" : "fail";
  r.lines.insert(r.lines.begin(), r.verdict);
  r.exit_code = ok ? 0 : 1;
  return r;
}

int emit(const Report& r, bool json) {
  if (json) {
    nlohmann::json j;
    j["verdict"] = r.verdict;
    j["diagnostics"] = r.diagnostics;
    if (!r.witness.empty()) j["witness"] = r.witness;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& line : r.lines) std::cout << line << "\n";
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"state-passing and continuation-passing toolchain for fine-grain call-by-value"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "emit a machine-readable report");

  std::string path, path_b, theory, theory_file, mode = "sps", model_arg, env_arg, comodel_path;
  int state = -1;
  bool trace = false;

  auto add_theory_opts = [&](CLI::App* sub) {
    sub->add_option("--theory", theory,
                    "builtin theory: bit-store | global-store[:<n>] | printing | mean-value");
    sub->add_option("--theory-file", theory_file, "theory file path")->excludes("--theory");
    sub->add_flag("--json", json, "emit a machine-readable report");
  };

  CLI::App* c_check = app.add_subcommand("check", "typecheck a term file");
  c_check->add_option("file", path, "term file")->required();
  add_theory_opts(c_check);

  CLI::App* c_translate = app.add_subcommand("translate", "translate a fine-grain term");
  c_translate->add_option("file", path, "term file")->required();
  c_translate->add_option("--mode", mode, "sps | cps")
      ->check(CLI::IsMember({"sps", "cps"}))
      ->required();
  add_theory_opts(c_translate);

  CLI::App* c_untranslate = app.add_subcommand("untranslate", "read an enriched term back");
  c_untranslate->add_option("file", path, "term file")->required();
  add_theory_opts(c_untranslate);

  CLI::App* c_normalize = app.add_subcommand("normalize", "rewrite a term to normal form");
  c_normalize->add_option("file", path, "term file")->required();
  c_normalize->add_flag("--trace", trace, "print every rewrite step");
  c_normalize->add_flag("--json", json, "emit a machine-readable report");

  CLI::App* c_eq = app.add_subcommand("eq", "decide equality of two term files");
  c_eq->add_option("a", path, "first term file")->required();
  c_eq->add_option("b", path_b, "second term file")->required();
  add_theory_opts(c_eq);

  CLI::App* c_eval = app.add_subcommand("eval", "evaluate a term in a concrete carrier");
  c_eval->add_option("file", path, "term file")->required();
  c_eval->add_option("--model", model_arg, "model file or builtin theory name")->required();
  c_eval->add_option("--state", state, "initial state for store readings");
  c_eval->add_option("--env", env_arg, "element bindings: ((name elem) ...)");
  c_eval->add_flag("--json", json, "emit a machine-readable report");

  CLI::App* c_theory = app.add_subcommand("check-theory", "check a comodel against a theory");
  c_theory->add_option("--comodel", comodel_path, "comodel file")->required();
  add_theory_opts(c_theory);

  CLI::App* c_round = app.add_subcommand("roundtrip",
                                         "translate, normalize, read back and compare");
  c_round->add_option("file", path, "term file")->required();
  add_theory_opts(c_round);

  CLI::App* c_correspond = app.add_subcommand(
      "correspond", "report the state-access / generic-effect correspondence");
  add_theory_opts(c_correspond);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help();
    return 2;
  }

  try {
    Report r;
    if (app.got_subcommand(c_check)) r = run_check(path, resolve_theory(theory, theory_file));
    else if (app.got_subcommand(c_translate))
      r = run_translate(path, mode, resolve_theory(theory, theory_file));
    else if (app.got_subcommand(c_untranslate))
      r = run_untranslate(path, resolve_theory(theory, theory_file));
    else if (app.got_subcommand(c_normalize)) r = run_normalize(path, trace);
    else if (app.got_subcommand(c_eq)) r = run_eq(path, path_b, resolve_theory(theory, theory_file));
    else if (app.got_subcommand(c_eval)) r = run_eval(path, model_arg, state, env_arg);
    else if (app.got_subcommand(c_theory)) {
      if (theory.empty() && theory_file.empty())
        throw Error("UnknownTheory", "check-theory needs --theory or --theory-file");
      r = run_check_theory(resolve_theory(theory, theory_file), comodel_path);
    } else if (app.got_subcommand(c_round))
      r = run_roundtrip(path, resolve_theory(theory, theory_file));
    else if (app.got_subcommand(c_correspond))
      r = run_correspond(theory);
    return emit(r, json);
  } catch (const Error& e) {
    Report r;
    r.verdict = "error";
    r.diagnostics = {e.code + ": " + std::string(e.what()) + span(e)};
    r.lines = {"error: " + e.code + ": " + std::string(e.what()) + span(e)};
    r.exit_code = 1;
    return emit(r, json);
  }
}
