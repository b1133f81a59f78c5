#pragma once

// JSON and CSV renderings of experiment results.

#include <json.hpp>
#include <string>
#include <vector>

#include "ergoshift/classical.hpp"
#include "ergoshift/hierarchy.hpp"

namespace ergoshift {

inline constexpr std::size_t kReportHead = 32;

/// {system, property, flavor, n_max, tol, residuals, verdict, decay_exponent,
/// battery: {states, observables}, seed}. `residuals` holds the first 32
/// values followed by the verdict window; `window_start` is the index of the
/// window's first value in the full sequence.
nlohmann::ordered_json to_json(const hierarchy::ErgodicReport& r);
nlohmann::ordered_json to_json(const hierarchy::HierarchyReports& r);
nlohmann::ordered_json to_json(const hierarchy::GnsReport& r);

/// {system, test, residual_head, residual_tail_max, verdict}.
nlohmann::ordered_json classical_report(const classical::System& sys, const std::string& test,
                                const std::vector<double>& residuals, const std::string& verdict);

/// 12 significant digits, '.' separator, independent of the locale.
std::string format_g12(double v);

inline constexpr const char* kCesaroCsvHeader = "n,subseq,radius,l2_lower,power_lower,haagerup_upper,paper_bound_2p1";

struct CesaroRow {
  std::size_t n = 0;
  std::string subseq;
  int radius = 0;
  double l2_lower = 0.0;
  double power_lower = 0.0;
  double haagerup_upper = 0.0;
  double bound_2p1 = 0.0;
};

std::string to_csv_line(const CesaroRow& row);

}  // namespace ergoshift
