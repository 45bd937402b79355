// Copyright 2026 The juntalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "juntalab/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "juntalab/boolfour.h"
#include "juntalab/detect.h"
#include "juntalab/io.h"
#include "juntalab/junta.h"
#include "juntalab/learn.h"
#include "juntalab/verify.h"

namespace juntalab {

namespace {

class UsageError : public JuntaError {
 public:
  using JuntaError::JuntaError;
};

struct Options {
  std::string fn;
  std::string out;
  double eps = -1;
  double gamma = 1.0;
  std::string mode;
  std::string alg;
  std::uint64_t seed = 1;
  size_t samples = 0;
  size_t budget = 0;
  // subcommand-specific
  std::string suite = "all";
  std::string corpus = "builtin";
  std::vector<int> dims = {4, 8, 12, 16};
  std::string which = "linear";
  int a = -1;
  int n = -1;
  int k = -1;
  double p = 0.5;
  double W = 4.0;
  double baseline = -1;
};

json config_json(const std::string& cmd, const Options& o) {
  json c = {{"seed", o.seed}};
  auto put_fn = [&] { c["fn"] = o.fn; };
  auto put_eps = [&] {
    if (o.eps > 0) c["eps"] = o.eps;
  };
  if (cmd == "analyze") {
    put_fn();
    put_eps();
  } else if (cmd == "junta") {
    put_fn();
    put_eps();
    c["mode"] = o.mode;
    c["gamma"] = o.gamma;
    c["samples"] = o.samples;
    c["p"] = o.p;
    c["k"] = o.k;
  } else if (cmd == "learn") {
    put_fn();
    put_eps();
    c["alg"] = o.alg;
    c["gamma"] = o.gamma;
    c["samples"] = o.samples;
    c["budget"] = o.budget;
    c["a"] = o.a;
    c["W"] = o.W;
  } else if (cmd == "verify") {
    c["suite"] = o.suite;
    c["corpus"] = o.corpus;
    c["dims"] = o.dims;
  } else if (cmd == "test") {
    put_fn();
    put_eps();
    c["mode"] = o.mode;
  } else if (cmd == "lowerbound") {
    c["which"] = o.which;
    c["samples"] = o.samples;
    c["a"] = o.a;
    c["n"] = o.n;
    c["k"] = o.k;
    c["baseline"] = o.baseline;
  }
  return c;
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SetFunction load_fn(const Options& o) {
  if (o.fn.empty()) throw UsageError("--fn is required");
  return make_family(family_spec_from_json(parse_json(read_file(o.fn))));
}

double need_eps(const Options& o) {
  if (!(o.eps > 0 && o.eps < 1)) throw UsageError("--eps in (0,1) is required");
  return o.eps;
}

json report_rows(const CheckReport& r) {
  // runtime_ms is left out so the file only changes when results do.
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"check", row.check},
                    {"instance", row.instance},
                    {"n", row.n},
                    {"slack", row.slack},
                    {"violations", row.violations}});
  return rows;
}

json influence_json(const InfluenceReport& r) {
  return {{"kappa", r.kappa}, {"per_variable", r.per_variable},
          {"total", r.total}};
}

struct Output {
  std::string text;  // primary output file content
  json metrics = json::object();
};

Output cmd_analyze(const Options& o) {
  SetFunction f = load_fn(o);
  check_dim(f.n(), kMaxFourierDim, "analyze");
  const StructureReport sr = structure_check(f);
  json j = {{"n", f.n()},
            {"mean", mean(f)},
            {"variance", variance(f)},
            {"norm1", norm(f, 1)},
            {"norm2", norm(f, 2)},
            {"sup", sup_norm(f)},
            {"fourier", to_json(transform(f))},
            {"influence1", influence_json(influences(f, 1.0))},
            {"influence2", influence_json(influences(f, 2.0))},
            {"structure",
             {{"submodular", sr.is_submodular},
              {"monotone", sr.is_monotone},
              {"max_violation", sr.max_violation},
              {"max_monotone_violation", sr.max_monotone_violation}}}};
  if (o.eps > 0) {
    OptimalJunta oj = optimal_junta(f, o.eps);
    j["optimal_junta"] = {
        {"eps", o.eps}, {"size", oj.size}, {"vars", oj.vars},
        {"error", oj.error}};
  }
  return {j.dump(2) + "\n",
          {{"mean", j["mean"]}, {"variance", j["variance"]},
           {"submodular", sr.is_submodular}}};
}

Output cmd_junta(const Options& o) {
  SetFunction f = load_fn(o);
  const double eps = need_eps(o);
  RngStream rng(o.seed);
  CriterionConfig cc;
  if (o.samples) cc.samples = o.samples;
  JuntaModel m;
  if (o.mode == "additive") {
    m = reduce_once(f, eps, cc, rng);
  } else if (o.mode == "multiplicative") {
    m = multiplicative_junta(f, o.gamma, eps, {}, cc, rng);
  } else if (o.mode == "product") {
    if (!(o.p > 0 && o.p < 1)) throw UsageError("--p must lie in (0,1)");
    m = product_junta(f, ProductDist(std::vector<double>(f.n(), o.p)), eps,
                      cc, rng);
  } else if (o.mode == "pseudo") {
    if (o.k < 1) throw UsageError("--k >= 1 is required for pseudo mode");
    m = pseudo_boolean_junta(f, o.k, eps, cc, rng);
  } else {
    throw UsageError("unknown --mode '" + o.mode + "'");
  }
  json metrics = m.provenance;
  metrics["size"] = m.vars.size();
  return {to_json(m).dump(2) + "\n", metrics};
}

Output cmd_learn(const Options& o) {
  SetFunction f = load_fn(o);
  const double eps = need_eps(o);
  RngStream rng(o.seed);
  auto src = std::make_shared<FunctionSource>(f);
  if (o.alg == "pac") {
    PacConfig cfg;
    if (o.samples) cfg.max_samples = o.samples;
    PacResult r = pac_proper(*src, eps, cfg, rng);
    json metrics = {{"accepted", r.accepted},
                    {"empirical_error", r.empirical_error},
                    {"samples", r.samples},
                    {"t", r.t},
                    {"subsets_tried", r.subsets_tried}};
    if (f.n() <= 22) {
      SetFunction h = r.model.as_function();
      metrics["l1_error"] = distance(f, h, 1);
    }
    return {to_json(r.model).dump(2) + "\n", metrics};
  }
  if (o.alg == "pmac" || o.alg == "xos") {
    PmacConfig cfg;
    if (o.budget) cfg.budget = o.budget;
    if (o.samples) cfg.node_examples = o.samples;
    cfg.xos = o.alg == "xos";
    if (o.a > 0) cfg.a = o.a;
    PmacTree t = pmac(src, o.gamma, eps, cfg, rng);
    json metrics = {{"depth", t.depth},
                    {"node_count", t.node_count},
                    {"learner_calls", t.learner_calls},
                    {"budget_exhausted", t.budget_exhausted}};
    if (f.n() <= 22) metrics["success"] = pmac_success(f, t, o.gamma);
    return {to_json(t).dump(2) + "\n", metrics};
  }
  if (o.alg == "agnostic") {
    SampleSet s = src->draw_many(o.samples ? o.samples : 2000, rng);
    AgnosticResult r = agnostic_l1(s, o.a > 0 ? o.a : 1.0, eps, o.W);
    json metrics = {{"objective", r.objective},
                    {"terms", r.model.terms.size()},
                    {"samples", s.size()}};
    return {to_json(r.model).dump(2) + "\n", metrics};
  }
  throw UsageError("unknown --alg '" + o.alg + "'");
}

std::vector<CorpusEntry> load_corpus(const Options& o) {
  if (o.corpus == "builtin") return builtin_corpus(o.dims);
  // A JSON file holding one function spec or an array of them.
  json j = parse_json(read_file(o.corpus));
  std::vector<CorpusEntry> out;
  auto add = [&](const json& e, size_t i) {
    try {
      out.push_back({"f" + std::to_string(i),
                     make_family(family_spec_from_json(e))});
    } catch (const SchemaError& err) {
      throw SchemaError("[" + std::to_string(i) + "]." + err.path,
                        err.what());
    }
  };
  if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) add(j[i], i);
  } else {
    out.push_back({"f0", make_family(family_spec_from_json(j))});
  }
  return out;
}

Output cmd_verify(const Options& o) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end())
    throw UsageError("unknown --suite '" + o.suite + "'");
  CheckReport r = run_suite(o.suite, load_corpus(o));
  for (const auto& note : r.notes) std::cerr << "note: " << note << "\n";
  json metrics = {{"rows", r.rows.size()},
                  {"instances", r.instances()},
                  {"violations", r.violations().size()},
                  {"pass", r.pass()},
                  {"notes", r.notes}};
  if (!r.rows.empty()) metrics["min_slack"] = r.slack();
  return {report_to_csv(r), metrics};
}

Output cmd_test(const Options& o) {
  SetFunction f = load_fn(o);
  const double eps = need_eps(o);
  RngStream rng(o.seed);
  TesterResult r;
  if (o.mode == "examples") {
    r = test_from_examples(FunctionSource(f), eps, rng);
  } else if (o.mode == "queries") {
    r = test_with_queries(f, eps, rng);
  } else {
    throw UsageError("unknown --mode '" + o.mode + "'");
  }
  json j = {{"verdict", verdict_name(r.verdict)},
            {"reason", r.reason},
            {"I", r.I},
            {"J", r.J},
            {"distance", r.distance},
            {"empirical_error", r.empirical_error}};
  return {j.dump(2) + "\n", {{"verdict", j["verdict"]}}};
}

Output cmd_lowerbound(const Options& o) {
  LowerBoundParams p;
  if (o.a > 0) p.a = o.a;
  if (o.n > 0) p.n = o.n;
  p.k = o.k;
  if (o.samples) p.samples = o.samples;
  p.baseline = o.baseline;
  p.seed = o.seed;
  LowerBoundResult r = lower_bound(o.which, p);
  json j = {{"which", r.which}, {"n", r.n},         {"k", r.k},
            {"error", r.error}, {"exact", r.exact}, {"sigma", r.sigma},
            {"floor", r.floor}, {"infl2", r.infl2}, {"vars", r.vars},
            {"pass", r.report.pass()},
            {"rows", report_rows(r.report)}};
  return {j.dump(2) + "\n",
          {{"error", r.error}, {"floor", r.floor}, {"pass", r.report.pass()}}};
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Junta approximation, learning and testing for set functions",
               "juntalab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--out", o.out, "output file (stdout when absent)");
    s->add_option("--seed", o.seed, "random seed");
  };
  auto fn_opt = [&](CLI::App* s) {
    s->add_option("--fn", o.fn, "function spec JSON")->check(CLI::ExistingFile);
    s->add_option("--eps", o.eps, "accuracy parameter");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Fourier and structure report");
  common(analyze);
  fn_opt(analyze);

  CLI::App* junta = app.add_subcommand("junta", "junta approximation");
  common(junta);
  fn_opt(junta);
  junta->add_option("--mode", o.mode)
      ->required()
      ->check(CLI::IsMember({"additive", "multiplicative", "product", "pseudo"}));
  junta->add_option("--gamma", o.gamma, "multiplicative factor");
  junta->add_option("--samples", o.samples, "Monte-Carlo criterion samples");
  junta->add_option("--p", o.p, "product marginal");
  junta->add_option("--k", o.k, "pseudo-Boolean range size");

  CLI::App* learn = app.add_subcommand("learn", "learning from examples");
  common(learn);
  fn_opt(learn);
  learn->add_option("--alg", o.alg)
      ->required()
      ->check(CLI::IsMember({"pac", "pmac", "xos", "agnostic"}));
  learn->add_option("--gamma", o.gamma, "multiplicative factor");
  learn->add_option("--samples", o.samples, "example budget");
  learn->add_option("--budget", o.budget, "learner invocations (pmac)");
  learn->add_option("--a", o.a, "influence bound (xos, agnostic)");
  learn->add_option("--W", o.W, "coefficient l1 budget (agnostic)");

  CLI::App* verify = app.add_subcommand("verify", "property-check suites");
  common(verify);
  verify->add_option("--suite", o.suite);
  verify->add_option("--corpus", o.corpus, "builtin or a spec JSON file");
  verify->add_option("--dims", o.dims, "builtin corpus dimensions")
      ->check(CLI::Range(1, 16));

  CLI::App* test = app.add_subcommand("test", "submodularity testers");
  common(test);
  fn_opt(test);
  test->add_option("--mode", o.mode)
      ->required()
      ->check(CLI::IsMember({"examples", "queries"}));

  CLI::App* lb = app.add_subcommand("lowerbound", "lower-bound constructions");
  common(lb);
  lb->add_option("--which", o.which)
      ->check(CLI::IsMember({"linear", "xos", "l2_influence", "product_tight"}));
  lb->add_option("--samples", o.samples, "Monte-Carlo samples");
  lb->add_option("--a", o.a);
  lb->add_option("--n", o.n);
  lb->add_option("--k", o.k);
  lb->add_option("--baseline", o.baseline);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  const std::string started = utc_now();
  Output out;
  try {
    if (cmd == "analyze") out = cmd_analyze(o);
    else if (cmd == "junta") out = cmd_junta(o);
    else if (cmd == "learn") out = cmd_learn(o);
    else if (cmd == "verify") out = cmd_verify(o);
    else if (cmd == "test") out = cmd_test(o);
    else out = cmd_lowerbound(o);

    if (o.out.empty()) {
      std::cout << out.text;
    } else {
      write_file(o.out, out.text);
      json record = {
          {"command", cmd},
          {"argv", std::vector<std::string>(args.begin() + 1, args.end())},
          {"config", config_json(cmd, o)},
          {"outputs", {{"files", {o.out}}, {"metrics", out.metrics}}},
          {"timestamps", {{"started", started}, {"finished", utc_now()}}},
          {"version", kVersion}};
      write_file(o.out + ".run.json", record.dump(2) + "\n");
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << sub->help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc));
}

}  // namespace juntalab
