#include "ergoshift/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace ergoshift {

namespace {

nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::ordered_json to_json(const hierarchy::ErgodicReport& r) {
  const std::size_t len = r.residuals.size();
  const std::size_t window_start = len - r.schedule.window_size(len);
  nlohmann::ordered_json residuals = nlohmann::ordered_json::array();
  const std::size_t head = std::min(kReportHead, len);
  for (std::size_t k = 0; k < head; ++k) residuals.push_back(number(r.residuals[k]));
  for (std::size_t k = std::max(head, window_start); k < len; ++k) residuals.push_back(number(r.residuals[k]));

  nlohmann::ordered_json out;
  out["system"] = r.system;
  out["property"] = r.property;
  out["flavor"] = hierarchy::to_string(r.flavor);
  out["n_max"] = r.schedule.n_max;
  out["tol"] = r.schedule.tol;
  out["residuals"] = std::move(residuals);
  out["window_start"] = window_start;
  out["verdict"] = hierarchy::to_string(r.verdict);
  out["decay_exponent"] = r.decay_exponent ? number(*r.decay_exponent) : nlohmann::ordered_json(nullptr);
  out["battery"] = {{"states", r.states}, {"observables", r.observables}};
  out["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json(nullptr);
  return out;
}

nlohmann::ordered_json to_json(const hierarchy::HierarchyReports& r) {
  return {{"reports", {to_json(r.ergodic), to_json(r.weak), to_json(r.mixing)}},
          {"chain_violations", r.chain_violations}};
}

nlohmann::ordered_json to_json(const hierarchy::GnsReport& r) {
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
  for (const auto& w : r.witnesses)
    witnesses.push_back({{"phase", w.phase}, {"element", w.element.label}, {"functional", w.functional.label}});
  return {{"gns_dim", r.gns_dim},   {"phases", r.phases},           {"fixed_dim", r.fixed_dim},
          {"ergodic", r.ergodic},   {"weak_mixing", r.weak_mixing}, {"mixing", r.mixing},
          {"witnesses", witnesses}};
}

nlohmann::ordered_json classical_report(const classical::System& sys, const std::string& test,
                                const std::vector<double>& residuals, const std::string& verdict) {
  nlohmann::ordered_json head = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < std::min(kReportHead, residuals.size()); ++k) head.push_back(number(residuals[k]));
  return {{"system", sys.to_string()},
          {"test", test},
          {"residual_head", head},
          {"residual_tail_max", number(classical::tail_max(residuals))},
          {"verdict", verdict}};
}

std::string format_g12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string to_csv_line(const CesaroRow& row) {
  // Subsequence specs contain commas.
  return std::to_string(row.n) + ",\"" + row.subseq + "\"," + std::to_string(row.radius) + "," +
         format_g12(row.l2_lower) + "," + format_g12(row.power_lower) + "," + format_g12(row.haagerup_upper) + "," +
         format_g12(row.bound_2p1);
}

}  // namespace ergoshift
