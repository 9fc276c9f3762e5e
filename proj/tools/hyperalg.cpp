// hyperalg command-line front end.
//
// Subcommands: generate, residuals, solve, fiber, mle, loglik, simulate,
// check.  Every structured (json) document embeds the tool version, the
// effective configuration, and the dataset digest, so a run is reproducible
// from its output alone.
//
// Exit codes: 0 success, 1 bad flags/usage, 2 unreadable input, 3 malformed
// or mismatched data, 4 computation failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "hyperalg/dataset.hpp"
#include "hyperalg/dynamics.hpp"
#include "hyperalg/fixtures.hpp"
#include "hyperalg/likelihood.hpp"
#include "hyperalg/polynomial.hpp"
#include "hyperalg/solver.hpp"
#include "hyperalg/sysgen.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitIo = 2;
constexpr int kExitData = 3;
constexpr int kExitCompute = 4;

using nlohmann::json;
using namespace hyperalg;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string subcommand;
  std::string data_path, counts_path, point_path, a_values_path, out_path;
  std::string mode = "reduced";
  std::string format = "text";
  int starts = 20;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::uint64_t d0 = 0, dfull = 0;
  bool d0_set = false, dfull_set = false;
  int dim = 3;
  std::uint64_t samples = 100;

  json echo() const {
    json j;
    j["subcommand"] = subcommand;
    if (!data_path.empty()) j["data"] = data_path;
    if (!counts_path.empty()) j["counts"] = counts_path;
    if (!point_path.empty()) j["point"] = point_path;
    if (!a_values_path.empty()) j["a_values"] = a_values_path;
    j["mode"] = mode;
    j["format"] = format;
    j["starts"] = starts;
    j["seed"] = seed;
    j["tol"] = tol;
    if (d0_set) j["d0"] = d0;
    if (dfull_set) j["dfull"] = dfull;
    if (subcommand == "simulate") {
      j["dim"] = dim;
      j["samples"] = samples;
    }
    return j;
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return in;
}

Dataset load_dataset(const Config& cfg) {
  if (cfg.data_path.empty() == cfg.counts_path.empty())
    throw DatasetError("exactly one of --data and --counts is required");
  Dataset d = [&] {
    if (!cfg.data_path.empty()) {
      auto in = open_input(cfg.data_path);
      return load_samples(in);
    }
    auto in = open_input(cfg.counts_path);
    return load_counts_csv(in);
  }();
  if (!cfg.d0_set && !cfg.dfull_set) return d;
  std::vector<std::uint64_t> counts(std::size_t{1} << d.dimension());
  for (std::uint32_t n = 0; n < counts.size(); ++n) counts[n] = d.count(NodeId{n});
  if (cfg.d0_set) counts[0] = cfg.d0;
  if (cfg.dfull_set) counts[counts.size() - 1] = cfg.dfull;
  return Dataset(d.dimension(), std::move(counts));
}

/// Point files: one `name value` pair per line, '#' comments.
std::map<std::string, double> load_point_file(const std::string& path) {
  auto in = open_input(path);
  std::map<std::string, double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string name;
    if (!(row >> name)) continue;
    double v;
    if (!(row >> v))
      throw DatasetError(path + ":" + std::to_string(lineno) + ": expected `name value`");
    if (!values.emplace(name, v).second)
      throw DatasetError(path + ":" + std::to_string(lineno) + ": duplicate entry " + name);
  }
  if (values.empty()) throw DatasetError(path + ": no entries");
  return values;
}

std::map<VarId, double> to_var_point(const std::map<std::string, double>& named, int L) {
  std::map<VarId, double> point;
  for (const auto& [name, v] : named) point[fixtures::var_from_name(name, L)] = v;
  return point;
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw IoError("cannot write " + cfg.out_path);
  out << text;
}

json document(const Config& cfg, const std::string& digest) {
  json j;
  j["version"] = kVersion;
  j["config"] = cfg.echo();
  if (!digest.empty()) j["dataset_digest"] = digest;
  return j;
}

SystemMode parse_mode(const Config& cfg) {
  if (cfg.mode == "full") return SystemMode::full;
  if (cfg.mode == "reduced") return SystemMode::reduced;
  throw DatasetError("mode must be full or reduced");
}

json polynomial_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    json t;
    t["coeff"] = rational_to_string(c);
    json mono = json::object();
    for (const auto& [v, e] : m.exps) mono[var_name(v)] = e;
    t["monomial"] = mono;
    terms.push_back(t);
  }
  json j;
  j["text"] = to_text(p);
  j["terms"] = terms;
  return j;
}

json result_json(const SolveResult& r) {
  json j;
  json pt = json::object();
  for (const auto& [v, x] : r.point) pt[var_name(v)] = x;
  j["point"] = pt;
  j["objective"] = r.objective;
  j["residuals"] = r.residuals;
  j["iterations"] = r.iterations;
  j["start_index"] = r.start_index;
  j["start_seed"] = r.start_seed;
  j["converged"] = r.converged;
  return j;
}

std::string result_text(const GeneratedSystem& sys, const SolveResult& r) {
  std::ostringstream out;
  out << "start " << r.start_index << (r.converged ? " converged" : " not-converged")
      << " objective " << r.objective << " iterations " << r.iterations << "\n";
  for (const auto& [v, x] : r.point) out << "  " << var_name(v) << " " << x << "\n";
  out << "  residuals";
  for (std::size_t i = 0; i < r.residuals.size(); ++i) out << " " << r.residuals[i];
  out << "\n";
  (void)sys;
  return out.str();
}

int cmd_generate(const Config& cfg) {
  Dataset d = load_dataset(cfg);
  auto sys = build_system(d, parse_mode(cfg));
  if (cfg.format == "text") {
    std::ostringstream out;
    for (const auto& g : sys.generators) out << to_text(g) << "\n";
    emit(cfg, out.str());
    return 0;
  }
  json j = document(cfg, sys.dataset_digest);
  j["L"] = sys.L;
  j["mode"] = cfg.mode;
  json vars = json::array();
  for (const auto& v : sys.variables) vars.push_back({{"name", var_name(v)}, {"status", "free"}});
  for (const auto& [v, expr] : sys.fixed)
    vars.push_back({{"name", var_name(v)},
                    {"status", expr.degree() == 0 ? "forced" : "eliminated"},
                    {"expression", to_text(expr)}});
  j["variables"] = vars;
  json gens = json::array();
  for (std::size_t i = 0; i < sys.generators.size(); ++i) {
    json g = polynomial_json(sys.generators[i]);
    g["label"] = sys.generator_labels[i];
    gens.push_back(g);
  }
  j["generators"] = gens;
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

int cmd_residuals(const Config& cfg) {
  Dataset d = load_dataset(cfg);
  auto sys = build_system(d, parse_mode(cfg));
  if (cfg.point_path.empty()) throw DatasetError("--point is required");
  auto point = to_var_point(load_point_file(cfg.point_path), sys.L);
  auto r = residuals(sys, point);
  if (cfg.format == "text") {
    std::ostringstream out;
    for (std::size_t i = 0; i < r.size(); ++i)
      out << sys.generator_labels[i] << " " << r[i] << "\n";
    emit(cfg, out.str());
    return 0;
  }
  json j = document(cfg, sys.dataset_digest);
  j["residuals"] = r;
  j["labels"] = sys.generator_labels;
  double obj = 0;
  for (double x : r) obj += x * x;
  j["objective"] = obj;
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

int cmd_solve(const Config& cfg) {
  Dataset d = load_dataset(cfg);
  auto sys = build_system(d, SystemMode::reduced);
  SolveOptions opt;
  opt.starts = cfg.starts;
  opt.seed = cfg.seed;
  opt.tol = cfg.tol;
  auto results = solve_residual(sys, opt);
  if (cfg.format == "text") {
    std::ostringstream out;
    for (const auto& r : results) out << result_text(sys, r);
    emit(cfg, out.str());
    return 0;
  }
  json j = document(cfg, sys.dataset_digest);
  j["results"] = json::array();
  for (const auto& r : results) j["results"].push_back(result_json(r));
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

int cmd_fiber(const Config& cfg) {
  Dataset d = load_dataset(cfg);
  auto sys = build_system(d, SystemMode::reduced);
  if (cfg.a_values_path.empty()) throw DatasetError("--a-values is required");
  auto a = to_var_point(load_point_file(cfg.a_values_path), sys.L);
  SolveOptions opt;
  opt.starts = cfg.starts;
  opt.seed = cfg.seed;
  opt.tol = cfg.tol;
  auto results = solve_fiber(sys, a, opt);
  if (cfg.format == "text") {
    std::ostringstream out;
    for (const auto& r : results) out << result_text(sys, r);
    emit(cfg, out.str());
    return 0;
  }
  json j = document(cfg, sys.dataset_digest);
  j["results"] = json::array();
  for (const auto& r : results) j["results"].push_back(result_json(r));
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

int cmd_mle(const Config& cfg) {
  Dataset d = load_dataset(cfg);
  auto sys = build_system(d, SystemMode::reduced);
  MleOptions opt;
  opt.starts = std::min(cfg.starts, 16);
  opt.seed = cfg.seed;
  auto res = solve_mle(sys, d, opt);
  if (cfg.format == "text") {
    std::ostringstream out;
    out << (res.feasible ? "feasible" : "not-feasible") << " loglik "
        << res.report.loglik << " objective " << res.point.objective << "\n";
    out << result_text(sys, res.point);
    emit(cfg, out.str());
    return 0;
  }
  json j = document(cfg, sys.dataset_digest);
  j["result"] = result_json(res.point);
  j["feasible"] = res.feasible;
  j["loglik"] = res.report.loglik;
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

/// Builds a full transition model from a (possibly partial, 4-decimal
/// rounded) a-value file: forced edges default to 1, at most one unbound
/// edge per node absorbs the remainder, then each node is renormalized.
TransitionModel model_from_a_values(int L, const std::map<VarId, double>& named) {
  std::map<Edge, double> a;
  for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
    NodeId node{n};
    if (level(node) == L) continue;
    auto out = outgoing(node, L);
    std::vector<double> vals(out.size(), -1.0);
    double sum = 0.0;
    int missing = -1;
    for (std::size_t k = 0; k < out.size(); ++k) {
      auto it = named.find(a_var(out[k], L));
      if (it != named.end()) {
        vals[k] = it->second;
        sum += vals[k];
      } else if (out.size() == 1) {
        vals[k] = 1.0;  // forced edge
        sum += 1.0;
      } else if (missing < 0) {
        missing = static_cast<int>(k);
      } else {
        throw DatasetError("node " + node_label(node, L) +
                           " has more than one unbound transition value");
      }
    }
    if (missing >= 0) {
      vals[static_cast<std::size_t>(missing)] = std::max(1.0 - sum, 0.0);
      sum += vals[static_cast<std::size_t>(missing)];
    }
    if (sum <= 0.0)
      throw DatasetError("transition values of node " + node_label(node, L) +
                         " sum to zero");
    for (std::size_t k = 0; k < out.size(); ++k) a[out[k]] = vals[k] / sum;
  }
  return TransitionModel::from_doubles(L, a, 1e-9);
}

int cmd_loglik(const Config& cfg) {
  Dataset d = load_dataset(cfg);
  if (cfg.a_values_path.empty()) throw DatasetError("--a-values is required");
  auto named = to_var_point(load_point_file(cfg.a_values_path), d.dimension());
  auto m = model_from_a_values(d.dimension(), named);
  auto rep = loglik(m, d);
  if (cfg.format == "text") {
    std::ostringstream out;
    for (const auto& [n, t] : rep.per_state_terms)
      out << node_label(n, d.dimension()) << " count " << t.count << " reach "
          << t.reach << " contribution " << t.contribution << "\n";
    out << "loglik " << rep.loglik << "\n";
    emit(cfg, out.str());
    return 0;
  }
  json j = document(cfg, d.digest());
  j["loglik"] = rep.loglik;
  if (rep.offending_state)
    j["offending_state"] = node_label(*rep.offending_state, d.dimension());
  json terms = json::object();
  for (const auto& [n, t] : rep.per_state_terms)
    terms[node_label(n, d.dimension())] = {
        {"count", t.count}, {"reach", t.reach}, {"contribution", t.contribution}};
  j["per_state_terms"] = terms;
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

int cmd_simulate(const Config& cfg) {
  check_dimension(cfg.dim);
  std::mt19937_64 rng(cfg.seed);
  TransitionModel m = [&] {
    if (cfg.a_values_path.empty()) return random_model(cfg.dim, rng);
    auto named = to_var_point(load_point_file(cfg.a_values_path), cfg.dim);
    return model_from_a_values(cfg.dim, named);
  }();
  auto q = SamplingDistribution::uniform(cfg.dim);
  Dataset d = sample_dataset(m, q, cfg.samples, cfg.seed);
  std::ostringstream samples;
  for (std::uint32_t n = 0; n < (std::uint32_t{1} << cfg.dim); ++n)
    for (std::uint64_t k = 0; k < d.count(NodeId{n}); ++k)
      samples << node_label(NodeId{n}, cfg.dim) << "\n";
  emit(cfg, samples.str());

  // sidecar: ground-truth model plus the oracle history parameters
  json j = document(cfg, d.digest());
  json a = json::object(), b = json::object();
  for (const auto& [e, v] : m.parameters()) a[var_name(a_var(e, cfg.dim))] = to_double(v);
  for (const auto& [e, v] : m.b_oracle()) {
    auto key = var_name(b_var(e, cfg.dim));
    if (v)
      b[key] = to_double(*v);
    else
      b[key] = nullptr;  // undefined: zero reach, any value consistent
  }
  j["model_a"] = a;
  j["oracle_b"] = b;
  std::string sidecar = j.dump(2) + "\n";
  if (cfg.out_path.empty()) {
    std::cout << sidecar;
  } else {
    std::ofstream out(cfg.out_path + ".model.json");
    if (!out) throw IoError("cannot write " + cfg.out_path + ".model.json");
    out << sidecar;
  }
  return 0;
}

int cmd_check(const Config& cfg) {
  struct Row {
    std::string name;
    bool ok;
  };
  std::vector<Row> rows;
  std::mt19937_64 rng(7);

  {  // variable and generator counts
    bool ok = true;
    auto c3 = free_var_counts(3);
    auto c4 = free_var_counts(4);
    ok = ok && c3.free_a == 5 && c3.free_b == 5 && c3.reduced_generators == 9;
    ok = ok && c4.free_a == 17 && c4.free_b == 17 && c4.reduced_generators == 28;
    for (int L = 1; L <= 5 && ok; ++L) {
      auto sys = build_system(fixtures::toy_dataset().dimension() == L
                                  ? fixtures::toy_dataset()
                                  : sample_dataset(random_model(L, rng),
                                                   SamplingDistribution::uniform(L), 50, 11),
                              SystemMode::reduced);
      auto c = free_var_counts(L);
      ok = sys.variables.size() ==
               static_cast<std::size_t>(c.free_a + c.free_b) &&
           sys.generators.size() == static_cast<std::size_t>(c.reduced_generators);
    }
    rows.push_back({"counts", ok});
  }
  {  // syzygies on the full system
    auto full = build_system(fixtures::toy_dataset(), SystemMode::full);
    rows.push_back({"syzygies", verify_syzygies(full)});
  }
  {  // variety components vanish exactly
    auto sys = build_system(fixtures::toy_dataset(), SystemMode::reduced);
    bool ok = true;
    for (int comp = 1; comp <= 3; ++comp) {
      auto pt = fixtures::toy_component(comp, make_rational(1, 3), make_rational(2, 5),
                                        make_rational(7, 9));
      for (const auto& r : residuals_exact(sys, pt)) ok = ok && r == 0;
    }
    rows.push_back({"variety-components", ok});
  }
  {  // parsed basis fixture vanishes on all components
    bool ok = true;
    for (const auto& line : fixtures::toy_groebner_basis()) {
      auto p = parse_polynomial(line, 3);
      for (int comp = 1; comp <= 3; ++comp) {
        auto pt = fixtures::toy_component(comp, make_rational(1, 2), make_rational(1, 4),
                                          make_rational(3, 4));
        ok = ok && p.eval_exact(pt) == 0;
      }
    }
    rows.push_back({"groebner-fixture", ok});
  }

  std::ostringstream out;
  bool all = true;
  for (const auto& r : rows) {
    out << (r.ok ? "pass" : "FAIL") << "  " << r.name << "\n";
    all = all && r.ok;
  }
  out << (all ? "all checks passed" : "checks FAILED") << "\n";
  emit(cfg, out.str());
  return all ? 0 : kExitCompute;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polynomial systems for hypercubic accumulation models"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub, bool with_data) {
    if (with_data) {
      sub->add_option("--data", cfg.data_path, "sample file (one binary string per line)");
      sub->add_option("--counts", cfg.counts_path, "count file (CSV `state,count`)");
      sub->add_option("--d0", cfg.d0, "override count of the all-zero state")
          ->each([&](const std::string&) { cfg.d0_set = true; });
      sub->add_option("--dfull", cfg.dfull, "override count of the all-one state")
          ->each([&](const std::string&) { cfg.dfull_set = true; });
    }
    sub->add_option("--out", cfg.out_path, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  auto* generate = app.add_subcommand("generate", "emit the generator system");
  add_common(generate, true);
  generate->add_option("--mode", cfg.mode, "system form")
      ->check(CLI::IsMember({"full", "reduced"}));

  auto* resid = app.add_subcommand("residuals", "evaluate generators at a point");
  add_common(resid, true);
  resid->add_option("--mode", cfg.mode, "system form")
      ->check(CLI::IsMember({"full", "reduced"}));
  resid->add_option("--point", cfg.point_path, "point file (`name value` lines)");

  auto* solve = app.add_subcommand("solve", "minimize the sum of squared generators");
  add_common(solve, true);
  solve->add_option("--starts", cfg.starts, "number of starts");
  solve->add_option("--seed", cfg.seed, "random seed");
  solve->add_option("--tol", cfg.tol, "convergence tolerance on the objective");

  auto* fiber = app.add_subcommand("fiber", "solve for history parameters at fixed a-values");
  add_common(fiber, true);
  fiber->add_option("--a-values", cfg.a_values_path, "a-value file (`name value` lines)");
  fiber->add_option("--starts", cfg.starts, "number of starts");
  fiber->add_option("--seed", cfg.seed, "random seed");
  fiber->add_option("--tol", cfg.tol, "convergence tolerance on the objective");

  auto* mle = app.add_subcommand("mle", "penalized maximum likelihood over the solution set");
  add_common(mle, true);
  mle->add_option("--starts", cfg.starts, "number of starts");
  mle->add_option("--seed", cfg.seed, "random seed");

  auto* ll = app.add_subcommand("loglik", "log-likelihood of a dataset at given a-values");
  add_common(ll, true);
  ll->add_option("--a-values", cfg.a_values_path, "a-value file (`name value` lines)");

  auto* sim = app.add_subcommand("simulate", "sample a synthetic dataset");
  add_common(sim, false);
  sim->add_option("--dim", cfg.dim, "number of features");
  sim->add_option("--samples", cfg.samples, "number of samples");
  sim->add_option("--seed", cfg.seed, "random seed");
  sim->add_option("--a-values", cfg.a_values_path, "model a-values (default: random model)");

  auto* check = app.add_subcommand("check", "run the built-in fixture suite");
  add_common(check, false);

  CLI11_PARSE(app, argc, argv);

  auto* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  try {
    if (sub == generate) return cmd_generate(cfg);
    if (sub == resid) return cmd_residuals(cfg);
    if (sub == solve) return cmd_solve(cfg);
    if (sub == fiber) return cmd_fiber(cfg);
    if (sub == mle) return cmd_mle(cfg);
    if (sub == ll) return cmd_loglik(cfg);
    if (sub == sim) return cmd_simulate(cfg);
    if (sub == check) return cmd_check(cfg);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DatasetError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return 1;
}
