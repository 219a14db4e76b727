#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlvar/ambient.hpp"
#include "qlvar/family.hpp"
#include "qlvar/grid.hpp"

namespace qlvar::cli {

enum class Operation { CheckStatic, Geom, Embed, Energy, Penrose, Variation, Sweep };

[[nodiscard]] std::string_view to_string(Operation op);
[[nodiscard]] std::optional<Operation> parse_operation(std::string_view name);

/// Quantity measured at every level of a sweep.
enum class SweepQuantity {
  Variation,            // |central dQ/dt - rhs|
  VariationRichardson,  // |Richardson dQ/dt - rhs|
  Gauss,                // max Gauss residual of the physical surface
  Codazzi,              // Codazzi residual along the unit d_theta field
  Embedding,            // profile residual of the embedded physical metric
};

[[nodiscard]] std::string_view to_string(SweepQuantity q);

struct SweepSpec {
  SweepQuantity quantity = SweepQuantity::Variation;
  std::vector<double> dt;
  std::vector<int> n_theta;  // n_phi = 2 n_theta
  double floor = 1e-12;
};

struct Scenario {
  std::string name = "unnamed";
  std::optional<Operation> operation;

  double physical_mass = 0.0;
  ambient::ConformalFactor conformal;
  family::GraphSpec surface;
  family::ReferenceSpec reference;

  int n_theta = 16;
  int n_phi = 32;
  double t0 = 0.0;
  double dt = 1e-3;
  double tol = 1e-8;
  int samples = 100;
  std::optional<double> horizon_area;

  SweepSpec sweep;

  std::string out_dir;
  std::string format = "json-text";

  [[nodiscard]] ambient::AmbientMetric physical_metric() const;
  [[nodiscard]] SphereGrid grid() const { return {n_theta, n_phi}; }
};

/// Parses and validates a TOML scenario. Unknown tables or keys, wrong value
/// types and out-of-range values raise SchemaError.
[[nodiscard]] Scenario parse_scenario(std::string_view text, const std::string& source = "<string>");
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// "NTHETAxNPHI"; raises SchemaError on malformed input.
void parse_grid(std::string_view spec, int& n_theta, int& n_phi);

/// Echo of the effective scenario, keys in a fixed order.
[[nodiscard]] nlohmann::ordered_json to_json(const Scenario& s);

}  // namespace qlvar::cli
