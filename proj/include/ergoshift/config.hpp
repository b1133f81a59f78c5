#pragma once

// Experiment configurations shared by command-line flags and JSON files.

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ergoshift/algebra.hpp"
#include "ergoshift/hierarchy.hpp"

namespace ergoshift {

struct ExperimentConfig {
  /// ball, norm, cesaro-decay, classical, quantum or hierarchy.
  std::string experiment;
  /// Element expression, system spec or unitary spec, by experiment.
  std::string target;
  /// hierarchy only: quantum, classical or free.
  std::string model;
  /// classical: ergodic, weak-mixing, mixing, triviality, transitive.
  /// quantum: e-ergodic, e-weak-mixing, e-mixing, gns.
  std::string test;
  int dim = 2;
  std::string shift = "pure:1";
  std::optional<SubsequenceSpec> subseq;
  std::vector<std::size_t> n = {4, 16, 64};
  std::vector<int> radius;
  int iters = 500;
  hierarchy::Schedule schedule;
  std::vector<Index> generators;
  /// classical observable: `trig:<d>` or a comma list of Fourier coefficients
  /// c_{-d..d}; empty selects the built-in battery.
  std::string observable;
  bool backward = false;
  /// classical transitive test.
  std::string x0 = "0";
  std::string x = "0.25";
  int levels = 20;
  /// Overrides ERGOSHIFT_BALL_CAP and the built-in cap.
  std::optional<std::size_t> ball_cap;
  /// Path prefix for artifacts; empty writes the result to stdout.
  std::string output;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Experiment-dependent defaults: schedule horizon 10^3 (quantum), 10^4
/// (classical) or 10^2 (free shift); radius {8} for norm runs, {4} for free
/// vector states; the test name.
void fill_defaults(ExperimentConfig& c, bool explicit_n_max = false, bool explicit_radius = false);

/// `trig:<d>` (seeded random coefficients up to degree d) or a comma list of
/// Fourier coefficients c_{-d}, ..., c_d.
classical::Observable parse_observable(const std::string& spec, std::uint64_t seed);

/// Parses every referenced spec; throws ParseError or DomainError.
void validate(const ExperimentConfig& c);

/// Strict: unknown keys are rejected, all of them named in one ParseError.
/// A seed is required for everything except `ball`.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ExperimentConfig& c);

/// Reads and validates a JSON config. Without an `output` key, artifacts go
/// beside the file under the prefix `<stem>.out`.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace ergoshift
