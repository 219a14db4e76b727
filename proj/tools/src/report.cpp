#include "qlvar_cli/report.hpp"

#include <cstdio>

namespace qlvar::cli {

namespace {

/// 17 significant digits round-trip every double.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json opt(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

const Quantity* RunReport::find(const std::string& name) const {
  for (const auto& q : results)
    if (q.name == name) return &q;
  return nullptr;
}

nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["version"] = r.version;
  j["operation"] = r.operation;
  j["scenario"] = r.scenario;
  auto& res = j["results"] = nlohmann::ordered_json::object();
  for (const auto& q : r.results) res[q.name] = {{"value", q.value}, {"error", opt(q.error)}};
  j["details"] = r.details;
  if (r.convergence) {
    const auto& t = *r.convergence;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows)
      rows.push_back({{"level", row.level},
                      {"n_theta", row.n_theta},
                      {"n_phi", row.n_phi},
                      {"dt", row.dt},
                      {"h", row.h},
                      {"residual", row.residual},
                      {"local_order", opt(row.local_order)}});
    j["convergence"] = {{"quantity", t.quantity},
                        {"variable", t.variable},
                        {"levels", rows},
                        {"order", {{"value", opt(t.order)}, {"error", opt(t.order_error)}}},
                        {"levels_used", t.levels_used},
                        {"monotone", t.monotone},
                        {"at_floor", t.at_floor},
                        {"floor", t.floor}};
  }
  j["hypothesis_violated"] = r.hypothesis_violated;
  j["failed"] = r.failed;
  j["warnings"] = r.warnings;
  return j;
}

void write_json(std::ostream& os, const RunReport& r) { os << to_json(r).dump(2) << '\n'; }

void write_results_csv(std::ostream& os, const RunReport& r) {
  os << "quantity,value,error\n";
  for (const auto& q : r.results) os << q.name << ',' << num(q.value) << ',' << (q.error ? num(*q.error) : "") << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& t) {
  os << "level,n_theta,n_phi,dt,h,residual,local_order\n";
  for (const auto& row : t.rows)
    os << row.level << ',' << row.n_theta << ',' << row.n_phi << ',' << num(row.dt) << ',' << num(row.h) << ','
       << num(row.residual) << ',' << (row.local_order ? num(*row.local_order) : "") << '\n';
}

}  // namespace qlvar::cli
