#include "ergoshift/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "ergoshift/acceptance.hpp"
#include "ergoshift/classical.hpp"
#include "ergoshift/error.hpp"
#include "ergoshift/hierarchy.hpp"
#include "ergoshift/report.hpp"
#include "ergoshift/repr.hpp"

namespace ergoshift {

namespace {

using json = nlohmann::ordered_json;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::size_t cap_of(const ExperimentConfig& c) { return c.ball_cap.value_or(ball_cap()); }

std::uint64_t seed_of(const ExperimentConfig& c) {
  if (!c.seed) throw ParseError("experiment '" + c.experiment + "' requires a seed");
  return *c.seed;
}

std::vector<std::int64_t> as_int64(const std::set<Index>& s) {
  std::vector<std::int64_t> out;
  for (Index i : s) out.push_back(static_cast<std::int64_t>(i));
  return out;
}

Artifact run_ball(const ExperimentConfig& c) {
  const std::set<Index> gens(c.generators.begin(), c.generators.end());
  const int radius = c.radius.at(0);
  const auto predicted = predicted_ball_size(gens.size(), radius);
  const auto ball = enumerate_ball(gens, radius, cap_of(c));
  json j{{"generators", as_int64(gens)},
         {"radius", radius},
         {"size", ball.size()},
         {"predicted_size", predicted ? json(*predicted) : json(nullptr)}};
  return {"json", dump(j)};
}

Artifact run_norm(const ExperimentConfig& c) {
  const auto x = parse_element(c.target);
  const auto interval = estimate_norm(x, c.radius, c.iters, seed_of(c), cap_of(c));
  json j{{"element", to_string(x)},       {"radii", interval.radii},       {"power_lower", interval.power_lower},
         {"l2_norm", l2_norm(x)},         {"lower", interval.lower},       {"upper", interval.upper},
         {"iters", c.iters},              {"seed", *c.seed}};
  j["extrapolated"] = interval.radii.size() >= 2
                          ? json(richardson_extrapolate(interval.radii, interval.power_lower))
                          : json(nullptr);
  return {"json", dump(j)};
}

// Triangle inequality over the per-word estimate: a moving word of length p
// contributes (2p+1)/sqrt(n), a fixed word its full weight.
double bound_2p1(const GeneratorMap& sigma, const AlgebraElement& x, std::size_t n) {
  double fixed = 0.0, moving = 0.0;
  for (const auto& [w, c] : x.terms()) {
    if (orbit_class(sigma, w) == OrbitClass::fixed)
      fixed += std::abs(c);
    else
      moving += std::abs(c) * static_cast<double>(2 * w.length() + 1);
  }
  return fixed + moving / std::sqrt(static_cast<double>(n));
}

Artifact run_cesaro(const ExperimentConfig& c) {
  const auto x = parse_element(c.target);
  const auto sigma = GeneratorMap::parse(c.shift);
  std::string csv = std::string(kCesaroCsvHeader) + "\n";
  for (std::size_t n : c.n) {
    const auto mean = cesaro_mean(sigma, x, *c.subseq, n);
    const auto power = norm_lower_bounds(mean, c.radius, c.iters, seed_of(c), cap_of(c));
    for (std::size_t i = 0; i < c.radius.size(); ++i) {
      CesaroRow row{n, c.subseq->to_string(), c.radius[i], l2_norm(mean), power[i], norm_upper_bound_haagerup(mean),
                    bound_2p1(sigma, x, n)};
      csv += to_csv_line(row) + "\n";
    }
  }
  return {"csv", csv};
}

hierarchy::Flavor flavor_of(const std::string& test) {
  if (test == "ergodic" || test == "e-ergodic") return hierarchy::Flavor::ergodic;
  if (test == "weak-mixing" || test == "e-weak-mixing") return hierarchy::Flavor::weak;
  return hierarchy::Flavor::mixing;
}

const hierarchy::ErgodicReport& pick(const hierarchy::HierarchyReports& r, hierarchy::Flavor f) {
  return f == hierarchy::Flavor::ergodic ? r.ergodic : f == hierarchy::Flavor::weak ? r.weak : r.mixing;
}

template <class M>
hierarchy::HierarchyReports run_engine(const M& model, std::span<const typename M::state_type> states,
                                       std::span<const typename M::element_type> elements,
                                       const ExperimentConfig& c) {
  return c.backward ? hierarchy::backward_test(model, states, elements, c.schedule, c.seed)
                    : hierarchy::e_hierarchy_test(model, states, elements, c.schedule, 1, c.seed);
}

std::vector<classical::Observable> classical_observables(const ExperimentConfig& c, const classical::System& sys) {
  if (c.observable.empty()) return classical::standard_observables(sys);
  return {parse_observable(c.observable, seed_of(c)).relabel(c.observable)};
}

Artifact run_classical(const ExperimentConfig& c) {
  using namespace classical;
  const System sys = System::parse(c.target);
  if (c.test == "transitive") {
    const Point x0 = parse_point(c.x0, sys), x = parse_point(c.x, sys);
    const auto times = transitive_subsequence(sys, x0, x, c.levels);
    json j{{"system", sys.to_string()}, {"test", c.test},
           {"x0", to_string(x0)},       {"x", to_string(x)},
           {"level_times", times.level_times}, {"subsequence", times.subsequence}};
    return {"json", dump(j)};
  }
  if (c.test == "triviality") {
    const auto battery = standard_battery(sys, c.schedule.n_max);
    const auto support = support_probe(sys, parse_point(c.x0, sys), c.schedule.n_max);
    const auto verdict = triviality_verdict(battery, support, c.schedule.tol);
    std::vector<double> worst(c.schedule.n_max, 0.0);
    for (const auto& r : battery.residuals)
      for (std::size_t k = 0; k < std::min(r.size(), worst.size()); ++k) worst[k] = std::max(worst[k], r[k]);
    json j = classical_report(sys, c.test, worst, to_string(verdict.verdict));
    j["support"] = {{"singleton", support.singleton},
                    {"center", to_string(support.center)},
                    {"center_mass", support.center_mass},
                    {"eps", support.eps}};
    return {"json", dump(j), verdict.verdict == Triviality::violation_flag ? kExitViolation : kExitOk};
  }
  const hierarchy::ClassicalModel model(sys);
  const auto states = standard_states(sys);
  const auto observables = classical_observables(c, sys);
  const auto reports = run_engine(model, std::span(states), std::span(observables), c);
  const auto& r = pick(reports, flavor_of(c.test));
  return {"json", dump(classical_report(sys, c.test, r.residuals, hierarchy::to_string(r.verdict)))};
}

Artifact run_quantum(const ExperimentConfig& c) {
  const auto model = hierarchy::QuantumModel::parse(c.dim, c.target);
  if (c.test == "gns") {
    json j = to_json(hierarchy::gns_spectral_test(model, hierarchy::trace_state(c.dim)));
    j["system"] = model.name();
    j["state"] = "trace";
    return {"json", dump(j)};
  }
  const auto states = hierarchy::standard_quantum_states(c.dim, seed_of(c));
  const auto observables = hierarchy::standard_quantum_observables(c.dim);
  const auto reports = run_engine(model, std::span(states), std::span(observables), c);
  return {"json", dump(to_json(pick(reports, flavor_of(c.test))))};
}

Artifact run_hierarchy(const ExperimentConfig& c) {
  json j;
  if (c.model == "quantum") {
    const auto model = hierarchy::QuantumModel::parse(c.dim, c.target);
    const auto states = hierarchy::standard_quantum_states(c.dim, seed_of(c));
    const auto observables = hierarchy::standard_quantum_observables(c.dim);
    j = to_json(run_engine(model, std::span(states), std::span(observables), c));
  } else if (c.model == "classical") {
    const auto sys = classical::System::parse(c.target);
    const hierarchy::ClassicalModel model(sys);
    const auto states = classical::standard_states(sys);
    const auto observables = classical_observables(c, sys);
    j = to_json(run_engine(model, std::span(states), std::span(observables), c));
  } else {
    const hierarchy::FreeShiftModel model(GeneratorMap::parse(c.shift));
    const auto x = parse_element(c.target);
    std::set<Index> support = generator_support(x);
    if (support.empty()) support.insert(1);
    const std::vector<Index> gens(support.begin(), support.end());
    const auto states = hierarchy::standard_free_states(gens, c.radius.at(0), seed_of(c));
    j = to_json(run_engine(model, std::span(states), std::span(&x, 1), c));
    if (c.subseq) j["certificate"] = to_json(hierarchy::subsequence_certificate(model, x, *c.subseq, c.schedule));
  }
  return {"json", dump(j)};
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
}

int emit(const ExperimentConfig& c, const Artifact& a, std::ostream& out, const std::string& command) {
  if (c.output.empty()) {
    out << a.text;
    return a.exit_code;
  }
  const std::string artifact = c.output + "." + a.extension;
  write_file(artifact, a.text);
  write_file(c.output + ".config.json", dump(to_json(c)));
  write_file(c.output + ".log", "time " + timestamp() + "\ncommand " + command + "\nexit " +
                                    std::to_string(a.exit_code) + "\nartifact " + artifact + "\n");
  out << artifact << "\n";
  return a.exit_code;
}

struct Flags {
  ExperimentConfig c;
  std::string config_path;
  std::string subseq;
  std::vector<std::int64_t> generators;
  std::size_t ball_cap = 0;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config; excludes the other flags");
  sub->add_option("--output", f.c.output, "write <prefix>.csv/.json, a normalized config echo and a log");
  sub->add_option("--seed", f.seed, "seed for randomized batteries and power iteration")->capture_default_str();
}

void add_schedule(CLI::App* sub, Flags& f) {
  sub->add_option("--n-max,--horizon", f.c.schedule.n_max, "residual horizon");
  sub->add_option("--tol", f.c.schedule.tol, "verdict tolerance")->capture_default_str();
  sub->add_option("--window-fraction", f.c.schedule.window_fraction, "verdict window fraction")
      ->capture_default_str();
  sub->add_flag("--backward", f.c.backward, "run the inverse dynamics");
}

void add_cap(CLI::App* sub, Flags& f) {
  sub->add_option("--ball-cap", f.ball_cap, "cap on enumerated ball entries (default: ERGOSHIFT_BALL_CAP or 2000000)");
}

}  // namespace

Artifact execute(const ExperimentConfig& c) {
  if (c.experiment == "ball") return run_ball(c);
  if (c.experiment == "norm") return run_norm(c);
  if (c.experiment == "cesaro-decay") return run_cesaro(c);
  if (c.experiment == "classical") return run_classical(c);
  if (c.experiment == "quantum") return run_quantum(c);
  if (c.experiment == "hierarchy") return run_hierarchy(c);
  throw ParseError("unknown experiment '" + c.experiment + "'");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ergodic-hierarchy experiments for free shifts, classical and matrix systems", "ergoshift"};
  app.require_subcommand(1);
  Flags f;

  auto* ball = app.add_subcommand("ball", "enumerate a Cayley ball and report its size");
  add_common(ball, f);
  add_cap(ball, f);
  ball->add_option("--generators", f.generators, "generator indices")->delimiter(',');
  ball->add_option("--radius", f.c.radius, "radius")->delimiter(',');

  auto* norm = app.add_subcommand("norm", "certified norm interval of a group-algebra element");
  add_common(norm, f);
  add_cap(norm, f);
  norm->add_option("--element", f.c.target, "element expression, e.g. '0.5*g1.g2 + 1*e'");
  norm->add_option("--radius", f.c.radius, "ball radii")->delimiter(',');
  norm->add_option("--iters", f.c.iters, "power iterations")->capture_default_str();

  auto* cesaro = app.add_subcommand("cesaro-decay", "norms of subsequence Cesaro means under a shift (CSV)");
  add_common(cesaro, f);
  add_cap(cesaro, f);
  cesaro->add_option("--word,--element", f.c.target, "word or element expression");
  cesaro->add_option("--shift", f.c.shift, "pure:<step>, anchored:<i>,... or identity")->capture_default_str();
  cesaro->add_option("--subseq", f.subseq, "arith:<a>,<d>, geom:<b>, list:<k1>,..., random:seed=<s>[,gap=<g>]");
  cesaro->add_option("--n", f.c.n, "Cesaro lengths")->delimiter(',');
  cesaro->add_option("--radius", f.c.radius, "ball radii")->delimiter(',');
  cesaro->add_option("--iters", f.c.iters, "power iterations")->capture_default_str();

  auto* classical_cmd = app.add_subcommand("classical", "classical system tests (JSON)");
  add_common(classical_cmd, f);
  add_schedule(classical_cmd, f);
  classical_cmd->add_option("--system", f.c.target, "rotation:theta=<real|golden>, zinf or cycle:m=<int>");
  classical_cmd->add_option("--test", f.c.test, "ergodic, weak-mixing, mixing, triviality or transitive");
  classical_cmd->add_option("--observable", f.c.observable, "trig:<d> or coefficients c_-d,...,c_d");
  classical_cmd->add_option("--x0", f.c.x0, "starting point")->capture_default_str();
  classical_cmd->add_option("--x", f.c.x, "target point (transitive)")->capture_default_str();
  classical_cmd->add_option("--levels", f.c.levels, "levels (transitive)")->capture_default_str();

  auto* quantum = app.add_subcommand("quantum", "matrix-algebra tests (JSON)");
  add_common(quantum, f);
  add_schedule(quantum, f);
  quantum->add_option("--dim", f.c.dim, "matrix dimension")->capture_default_str();
  quantum->add_option("--unitary", f.c.target, "identity or diag:<c1>,...,<cd> (c: a+bi or exp:<turns|golden>)");
  quantum->add_option("--test", f.c.test, "e-ergodic, e-weak-mixing, e-mixing or gns");

  auto* hier = app.add_subcommand("hierarchy", "all three residual flavours on one system (JSON)");
  add_common(hier, f);
  add_schedule(hier, f);
  hier->add_option("--model", f.c.model, "quantum, classical or free");
  hier->add_option("--target", f.c.target, "unitary spec, system spec or element expression");
  hier->add_option("--dim", f.c.dim, "matrix dimension (quantum)")->capture_default_str();
  hier->add_option("--shift", f.c.shift, "generator map (free)")->capture_default_str();
  hier->add_option("--subseq", f.subseq, "adds the norm certificate along this subsequence (free)");
  hier->add_option("--radius", f.c.radius, "support radius of vector states (free)")->delimiter(',');
  hier->add_option("--observable", f.c.observable, "classical observable instead of the battery");

  auto* selftest = app.add_subcommand("selftest", "invariant sweep and acceptance battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  std::string command;
  for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

  try {
    if (selftest->parsed()) {
      bool ok = print_results(out, run_invariant_suite());
      ok = print_results(out, run_acceptance()) && ok;
      out << (ok ? "selftest: passed" : "selftest: FAILED") << "\n";
      return ok ? kExitOk : kExitFailure;
    }
    CLI::App* sub = app.get_subcommands().front();
    ExperimentConfig c;
    if (!f.config_path.empty()) {
      const auto given = sub->get_options([](const CLI::Option* o) {
        return o->count() > 0 && o->get_name() != "--config" && o->get_name() != "--output";
      });
      if (!given.empty()) throw ParseError("--config excludes other flags except --output");
      c = load_config(f.config_path);
      if (c.experiment != sub->get_name())
        throw ParseError("config is for '" + c.experiment + "', not '" + sub->get_name() + "'");
      if (!f.c.output.empty()) c.output = f.c.output;
    } else {
      c = f.c;
      c.experiment = sub->get_name();
      if (!f.subseq.empty()) c.subseq = SubsequenceSpec::parse(f.subseq);
      for (auto g : f.generators) c.generators.push_back(g);
      if (f.ball_cap) c.ball_cap = f.ball_cap;
      if (c.experiment != "ball") c.seed = f.seed;
      const auto* n_max = sub->get_option_no_throw("--n-max");
      fill_defaults(c, n_max && n_max->count() > 0, !c.radius.empty());
      validate(c);
    }
    return emit(c, execute(c), out, command);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ergoshift
