#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qlvar::cli {

/// A numeric result and its estimated error. The error is the change of the
/// value between the requested resolution and a coarser one (half the grid,
/// twice the step); it is empty when the coarse run was not possible.
struct Quantity {
  std::string name;
  double value = 0.0;
  std::optional<double> error;
};

struct ConvergenceRow {
  int level = 0;
  int n_theta = 0;
  int n_phi = 0;
  double dt = 0.0;
  double h = 0.0;
  double residual = 0.0;
  std::optional<double> local_order;
};

struct ConvergenceTable {
  std::string quantity;
  std::string variable;  // "dt" or "pi/n_theta"
  std::vector<ConvergenceRow> rows;
  std::optional<double> order;
  std::optional<double> order_error;  // max |local - fitted| over levels above the floor
  int levels_used = 0;
  bool monotone = true;
  bool at_floor = false;
  double floor = 0.0;
};

struct RunReport {
  std::string version;
  std::string operation;
  nlohmann::ordered_json scenario;
  std::vector<Quantity> results;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::optional<ConvergenceTable> convergence;
  std::vector<std::string> warnings;
  bool hypothesis_violated = false;  // exit code 2
  bool failed = false;               // a check ran but did not meet its tolerance; exit code 1

  [[nodiscard]] const Quantity* find(const std::string& name) const;
};

[[nodiscard]] nlohmann::ordered_json to_json(const RunReport& r);
void write_json(std::ostream& os, const RunReport& r);
/// quantity,value,error rows.
void write_results_csv(std::ostream& os, const RunReport& r);
/// One row per ladder level.
void write_convergence_csv(std::ostream& os, const ConvergenceTable& t);

}  // namespace qlvar::cli
