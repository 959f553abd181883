#pragma once

/// @file study.hpp
/// Convergence studies with manufactured solutions and CSV reporting.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sbpwave/semidisc1d.hpp"
#include "sbpwave/timestepper.hpp"

namespace sbpwave {

/// sqrt(h^d sum (a_i - b_i)^2)
double l2_error(std::span<const double> a, std::span<const double> b, double h, int d);

/// log2(e_{j-1} / e_j); the first entry is empty.
std::vector<std::optional<double>> rates(std::span<const double> errors);

struct ReportRow {
  int n = 0;
  double l2_error = 0.0;
  std::optional<double> rate;
};

struct ConvergenceReport {
  std::string case_id;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<ReportRow> rows;
  /// Mean PCG iterations per solve, one per row (2D only).
  std::vector<double> mean_iterations;

  void add_meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  Vec errors() const;
  /// Fills the rate column from the errors.
  void compute_rates();
};

/// CSV text: `# key: value` lines, then `n,l2_error,rate`.
std::string format_report(const ConvergenceReport& report);
void emit_report(const ConvergenceReport& report, const std::string& path);

/// Writes `t,E_H` rows.
void write_energy_trace(const std::vector<std::pair<double, double>>& trace, const std::string& path);

struct Study1DOptions {
  int order = 4;  ///< 4 or 6
  double beta = 0.0;
  double gamma = 0.0;
  double tau = 0.5;
  std::vector<int> levels{101, 201, 401, 801, 1601};
  std::optional<double> t_final;
  /// Default: cfl(0.2) for order 4, rate_matched(0.2, 1.5) for order 6.
  std::optional<StepPolicy> policy;
  /// Default: plain sum for the Dirichlet case, H-weighted for the interface case.
  std::optional<MeanConstraint> constraint;
  /// Energy history of the finest level, if requested.
  std::vector<std::pair<double, double>>* energy_trace = nullptr;
};

struct Study2DOptions {
  int order = 4;
  double k = 5.0;
  double theta = -1.0;
  std::vector<int> levels{16, 31, 61, 121};
  std::optional<double> t_final;
  std::optional<StepPolicy> policy;  ///< default cfl(0.2)
  std::optional<double> pcg_tol;     ///< default 10^-(order + 4)
  std::optional<double> ichol_boost; ///< default 0.01 (order 4), 1e-4 (order 6)
  std::optional<double> ichol_drop;  ///< default 1e-4 (order 4), 1e-6 (order 6)
  std::vector<std::pair<double, double>>* energy_trace = nullptr;
};

/// SBP order p from the interior order 2p.
int order_to_p(int order);
StepPolicy default_policy_1d(int order);
double default_pcg_tol(int order);
double default_ichol_boost(int order);
double default_ichol_drop(int order);

ConvergenceReport run_case_1d_dirichlet(const Study1DOptions& opt);
ConvergenceReport run_case_1d_interface(const Study1DOptions& opt);
ConvergenceReport run_case_2d(const Study2DOptions& opt);

}  // namespace sbpwave
