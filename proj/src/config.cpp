#include "ergoshift/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ergoshift/classical.hpp"
#include "ergoshift/error.hpp"

namespace ergoshift {

namespace {

const std::set<std::string> kExperiments = {"ball", "norm", "cesaro-decay", "classical", "quantum", "hierarchy"};
const std::set<std::string> kClassicalTests = {"ergodic", "weak-mixing", "mixing", "triviality", "transitive"};
const std::set<std::string> kQuantumTests = {"e-ergodic", "e-weak-mixing", "e-mixing", "gns"};
const std::set<std::string> kModels = {"quantum", "classical", "free"};

const std::set<std::string> kKeys = {
    "experiment", "target", "model",      "test",   "dim",        "shift",  "subseq", "n",
    "radius",     "iters",  "n_max",      "tol",    "window_fraction", "generators", "observable",
    "backward",   "x0",     "x",          "levels", "ball_cap",   "output", "seed"};

template <class T>
T field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

void fill_defaults(ExperimentConfig& c, bool explicit_n_max, bool explicit_radius) {
  if (c.test.empty()) {
    if (c.experiment == "classical") c.test = "mixing";
    if (c.experiment == "quantum") c.test = "e-mixing";
  }
  if (c.model.empty() && c.experiment == "hierarchy") c.model = "quantum";
  const bool classical = c.experiment == "classical" || (c.experiment == "hierarchy" && c.model == "classical");
  const bool free = c.experiment == "hierarchy" && c.model == "free";
  if (!explicit_n_max) c.schedule.n_max = classical ? 10000 : free ? 100 : 1000;
  if (!explicit_radius && c.radius.empty()) {
    if (c.experiment == "norm") c.radius = {6, 8, 10};
    if (c.experiment == "cesaro-decay") c.radius = {8};
    if (c.experiment == "ball" || free) c.radius = {4};
  }
  if (c.experiment == "ball" && c.generators.empty()) c.generators = {1, 2};
  if (c.experiment == "cesaro-decay" && !c.subseq) c.subseq = SubsequenceSpec::arithmetic(1, 1);
}

void validate(const ExperimentConfig& c) {
  if (!kExperiments.contains(c.experiment)) throw ParseError("unknown experiment '" + c.experiment + "'");
  if (c.experiment != "ball" && !c.seed) throw ParseError("experiment '" + c.experiment + "' requires a seed");
  c.schedule.validate();
  if (c.iters < 1) throw DomainError("iters must be >= 1");
  if (c.dim < 1) throw DomainError("dim must be >= 1");
  if (c.ball_cap && *c.ball_cap == 0) throw DomainError("ball_cap must be >= 1");
  for (int r : c.radius)
    if (r < 0) throw DomainError("radius must be >= 0");
  for (std::size_t n : c.n)
    if (n < 1) throw DomainError("n must be >= 1");
  GeneratorMap::parse(c.shift);

  if (c.experiment == "ball") {
    if (c.radius.size() != 1) throw DomainError("ball takes a single radius");
    if (c.generators.empty()) throw DomainError("ball needs at least one generator");
  } else if (c.experiment == "norm" || c.experiment == "cesaro-decay") {
    parse_element(c.target);
    if (c.radius.empty()) throw DomainError(c.experiment + " needs at least one radius");
    if (c.experiment == "cesaro-decay" && c.n.empty()) throw DomainError("cesaro-decay needs at least one n");
  } else if (c.experiment == "classical") {
    const auto sys = classical::System::parse(c.target);
    if (!kClassicalTests.contains(c.test)) throw ParseError("unknown classical test '" + c.test + "'");
    if (!c.observable.empty()) parse_observable(c.observable, c.seed.value_or(0));
    if (!sys.contains(classical::parse_point(c.x0, sys))) throw DomainError("x0 is not a point of " + sys.to_string());
    if (c.test == "transitive") {
      if (c.levels < 1) throw DomainError("levels must be >= 1");
      if (!sys.contains(classical::parse_point(c.x, sys))) throw DomainError("x is not a point of " + sys.to_string());
    }
  } else if (c.experiment == "quantum") {
    hierarchy::QuantumModel::parse(c.dim, c.target);
    if (!kQuantumTests.contains(c.test)) throw ParseError("unknown quantum test '" + c.test + "'");
  } else {
    if (!kModels.contains(c.model)) throw ParseError("unknown model '" + c.model + "'");
    if (c.model == "quantum") hierarchy::QuantumModel::parse(c.dim, c.target);
    if (c.model == "classical") classical::System::parse(c.target);
    if (c.model == "free") {
      parse_element(c.target);
      if (c.radius.size() != 1) throw DomainError("free-shift states take a single radius");
    }
  }
}

classical::Observable parse_observable(const std::string& spec, std::uint64_t seed) {
  if (spec.starts_with("trig:")) {
    const Index d = parse_index(std::string_view(spec).substr(5));
    if (d < 0 || d > 64) throw ParseError("trig degree must be in 0..64");
    return classical::Observable::random_trig(static_cast<int>(d), seed);
  }
  std::vector<Complex> coefficients;
  std::stringstream in(spec);
  for (std::string item; std::getline(in, item, ',');) coefficients.push_back(parse_complex(item));
  if (coefficients.size() % 2 == 0) throw ParseError("observable needs an odd number of coefficients c_{-d..d}");
  return classical::Observable::trig(std::move(coefficients));
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  std::string unknown;
  for (const auto& [key, value] : j.items())
    if (!kKeys.contains(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  if (!unknown.empty()) throw ParseError("unknown config keys: " + unknown);

  ExperimentConfig c;
  if (!j.contains("experiment")) throw ParseError("config needs 'experiment'");
  c.experiment = field<std::string>(j, "experiment");
  if (j.contains("target")) c.target = field<std::string>(j, "target");
  if (j.contains("model")) c.model = field<std::string>(j, "model");
  if (j.contains("test")) c.test = field<std::string>(j, "test");
  if (j.contains("dim")) c.dim = field<int>(j, "dim");
  if (j.contains("shift")) c.shift = field<std::string>(j, "shift");
  if (j.contains("subseq") && !j.at("subseq").is_null()) c.subseq = SubsequenceSpec::parse(field<std::string>(j, "subseq"));
  if (j.contains("n")) c.n = field<std::vector<std::size_t>>(j, "n");
  if (j.contains("radius")) c.radius = field<std::vector<int>>(j, "radius");
  if (j.contains("iters")) c.iters = field<int>(j, "iters");
  if (j.contains("n_max")) c.schedule.n_max = field<std::size_t>(j, "n_max");
  if (j.contains("tol")) c.schedule.tol = field<double>(j, "tol");
  if (j.contains("window_fraction")) c.schedule.window_fraction = field<double>(j, "window_fraction");
  if (j.contains("generators"))
    for (auto g : field<std::vector<std::int64_t>>(j, "generators")) c.generators.push_back(g);
  if (j.contains("observable")) c.observable = field<std::string>(j, "observable");
  if (j.contains("backward")) c.backward = field<bool>(j, "backward");
  if (j.contains("x0")) c.x0 = field<std::string>(j, "x0");
  if (j.contains("x")) c.x = field<std::string>(j, "x");
  if (j.contains("levels")) c.levels = field<int>(j, "levels");
  if (j.contains("ball_cap") && !j.at("ball_cap").is_null()) c.ball_cap = field<std::size_t>(j, "ball_cap");
  if (j.contains("output")) c.output = field<std::string>(j, "output");
  if (j.contains("seed") && !j.at("seed").is_null()) c.seed = field<std::uint64_t>(j, "seed");
  fill_defaults(c, j.contains("n_max"), j.contains("radius"));
  validate(c);
  return c;
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  std::vector<std::int64_t> generators;
  for (Index g : c.generators) {
    if (g > std::numeric_limits<std::int64_t>::max() || g < std::numeric_limits<std::int64_t>::min())
      throw DomainError("generator index does not fit in 64 bits");
    generators.push_back(static_cast<std::int64_t>(g));
  }
  nlohmann::ordered_json j;
  j["experiment"] = c.experiment;
  j["target"] = c.target;
  j["model"] = c.model;
  j["test"] = c.test;
  j["dim"] = c.dim;
  j["shift"] = c.shift;
  j["subseq"] = c.subseq ? nlohmann::ordered_json(c.subseq->to_string()) : nlohmann::ordered_json(nullptr);
  j["n"] = c.n;
  j["radius"] = c.radius;
  j["iters"] = c.iters;
  j["n_max"] = c.schedule.n_max;
  j["tol"] = c.schedule.tol;
  j["window_fraction"] = c.schedule.window_fraction;
  j["generators"] = generators;
  j["observable"] = c.observable;
  j["backward"] = c.backward;
  j["x0"] = c.x0;
  j["x"] = c.x;
  j["levels"] = c.levels;
  j["ball_cap"] = c.ball_cap ? nlohmann::ordered_json(*c.ball_cap) : nlohmann::ordered_json(nullptr);
  j["output"] = c.output;
  j["seed"] = c.seed ? nlohmann::ordered_json(*c.seed) : nlohmann::ordered_json(nullptr);
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  if (c.output.empty()) c.output = (path.parent_path() / path.stem()).string() + ".out";
  return c;
}

}  // namespace ergoshift
