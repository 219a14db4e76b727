#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <thread>

#include "qlvar/convergence.hpp"
#include "qlvar/embedding.hpp"
#include "qlvar/energy.hpp"
#include "qlvar/error.hpp"
#include "qlvar/variation.hpp"
#include "qlvar_cli/run.hpp"

#ifndef QLVAR_VERSION
#define QLVAR_VERSION "unknown"
#endif

namespace qlvar::cli {

namespace {

using json = nlohmann::ordered_json;

struct Measurement {
  std::vector<Quantity> values;
  json details = json::object();
  std::vector<std::string> warnings;
  bool hypothesis_violated = false;
  bool failed = false;
};

double max_abs(const Field& f) { return f.cwiseAbs().maxCoeff(); }

std::shared_ptr<const family::PhysicalFamily> physical_family(const Scenario& s) {
  return std::make_shared<const family::PhysicalFamily>(s.physical_metric(), s.surface, s.grid());
}

surface::VectorField unit_theta(const surface::SurfaceGeometry& geo) {
  surface::VectorField y = geo.x_theta;
  const Field len = geo.E.cwiseSqrt();
  for (auto& c : y) c = c.cwiseQuotient(len);
  return y;
}

json hypotheses(const energy::HypothesisReport& h) {
  return {{"ric_nu_nu_max", h.ric_nu_nu_max},
          {"ric_nu_nu_nonpositive", h.ric_nu_nu_max <= 0.0},
          {"convexity_min_eigenvalue", h.convexity_min_eigenvalue},
          {"convex", h.convexity_min_eigenvalue > 0.0},
          {"H_positive", h.H_positive},
          {"satisfied", h.satisfied()}};
}

void flag_hypotheses(Measurement& m, const energy::HypothesisReport& h) {
  m.details["hypotheses"] = hypotheses(h);
  if (!h.satisfied()) {
    m.hypothesis_violated = true;
    m.warnings.emplace_back("theorem hypotheses violated on the physical surface");
  }
}

std::filesystem::path out_file(const Scenario& s, const char* name) {
  std::filesystem::create_directories(s.out_dir);
  return std::filesystem::path(s.out_dir) / name;
}

// ---------------------------------------------------------------------------

Measurement check_static(const Scenario& s, const RunOptions& opt) {
  const ambient::StaticSpace space(s.reference.mass);
  const double m = space.mass;
  std::mt19937_64 gen(opt.seed);
  std::uniform_real_distribution<double> ur(2 * m + 0.1, 50.0), up(0.01, std::numbers::pi - 0.01),
      uf(0.0, 2 * std::numbers::pi);
  double worst = 0.0;
  for (int k = 0; k < s.samples; ++k) {
    ambient::AmbientPoint p{ur(gen), up(gen), uf(gen)};
    worst = std::max(worst, ambient::static_equation_residual(space, p));
  }
  Measurement out;
  out.values.push_back({"max_residual", worst, {}});
  out.details = {{"mass", m}, {"samples", s.samples}, {"seed", opt.seed}, {"threshold", 1e-10},
                 {"within_threshold", worst <= 1e-10}};
  if (worst > 1e-10) {
    out.failed = true;
    out.warnings.emplace_back("static equation residual above 1e-10");
  }
  return out;
}

Measurement geom(const Scenario& s) {
  const auto surf = physical_family(s)->at(s.t0);
  const auto geo = surface::extrinsic_geometry(surf);
  const auto h = energy::hypothesis_check(geo);
  Measurement out;
  out.values = {
      {"area", surface::area(geo), {}},
      {"H_min", geo.H.minCoeff(), {}},
      {"H_max", geo.H.maxCoeff(), {}},
      {"A_norm2_max", geo.A_norm2.maxCoeff(), {}},
      {"gauss_curvature_min", geo.gauss_curv.minCoeff(), {}},
      {"gauss_curvature_max", geo.gauss_curv.maxCoeff(), {}},
      {"gauss_residual", max_abs(surface::gauss_residual(geo)), {}},
      {"codazzi_residual", surface::codazzi_residual(geo, unit_theta(geo)), {}},
      {"ric_nu_nu_max", h.ric_nu_nu_max, {}},
      {"convexity_min_eigenvalue", h.convexity_min_eigenvalue, {}},
  };
  out.details["hypotheses"] = hypotheses(h);
  if (!s.out_dir.empty()) {
    std::ofstream f(out_file(s, "geometry.csv"));
    surface::write_csv(f, geo);
  }
  return out;
}

Measurement embed(const Scenario& s) {
  const auto spec = s.surface;
  const double t0 = s.t0;
  const auto metric = embedding::AxiMetric::from_profile(
      s.physical_metric(), [=](double t) { return spec.rho(t, t0); }, [=](double t) { return spec.rho_theta(t); });
  const ambient::StaticSpace space(s.reference.mass);
  const auto grid = s.grid();
  const auto res = embedding::embed_axisymmetric(metric, space, grid, s.reference.embedding);
  Measurement out;
  out.values = {
      {"residual", res.residual, {}},
      {"min_rho", res.solver_report.min_rho, {}},
      {"min_radicand", res.solver_report.min_radicand, {}},
      {"steps", static_cast<double>(res.solver_report.steps), {}},
  };
  out.details = {{"anchor", res.solver_report.anchor},
                 {"branch", res.solver_report.branch},
                 {"rhs_evaluations", res.solver_report.rhs_evaluations},
                 {"reference_mass", space.mass}};
  if (!s.out_dir.empty()) {
    std::ofstream f(out_file(s, "profile.csv"));
    f.precision(17);
    f << "theta,rho,psi_bar\n";
    for (int i = 0; i < grid.n_theta(); ++i)
      f << res.profile.theta[i] << ',' << res.profile.rho[i] << ',' << res.profile.psi_bar[i] << '\n';
  }
  return out;
}

energy::SurfacePair surface_pair(const Scenario& s) {
  auto phys = physical_family(s);
  const family::ReferenceFamily ref(phys, s.reference);
  return energy::SurfacePair::build(phys->at(s.t0), ref.at(s.t0), ref.space());
}

Measurement energy_op(const Scenario& s) {
  const auto pair = surface_pair(s);
  Measurement out;
  out.values.push_back({"wang_yau_energy", energy::wang_yau_static_energy(pair, s.tol), {}});
  if (pair.reference_space.mass == 0.0) out.values.push_back({"brown_york", energy::brown_york(pair, s.tol), {}});
  out.values.push_back({"iso_residual", pair.iso_residual, {}});
  out.values.push_back({"area", surface::area(pair.physical), {}});
  out.details["reference_mass"] = pair.reference_space.mass;
  flag_hypotheses(out, energy::hypothesis_check(pair.physical));
  return out;
}

Measurement penrose(const Scenario& s) {
  const auto pair = surface_pair(s);
  const double m = pair.reference_space.mass;
  if (!(m > 0.0)) fail(ErrorCode::InvalidArgument, "penrose needs a reference mass m > 0");
  const double area = s.horizon_area.value_or(16 * std::numbers::pi * m * m);
  const auto rep = energy::penrose_functional(pair, area, s.tol);
  Measurement out;
  out.values = {
      {"gap", rep.gap, {}},
      {"energy_term", rep.energy_term, {}},
      {"horizon_term", rep.horizon_term, {}},
      {"m", rep.m, {}},
      {"iso_residual", pair.iso_residual, {}},
  };
  out.details = {{"horizon_area", area},
                 {"mean_curvature_equal", rep.mean_curvature_equal},
                 {"horizon_equal", rep.horizon_equal},
                 {"equality", rep.equality},
                 {"no_interior_minimal_surfaces_verified", rep.no_interior_minimal_surfaces_verified}};
  out.warnings.emplace_back("absence of interior closed minimal surfaces is not verified");
  const auto h = energy::hypothesis_check(pair.physical);
  flag_hypotheses(out, h);
  if (h.satisfied() && rep.gap < -s.tol)
    out.warnings.emplace_back("negative gap with the surface hypotheses satisfied: the interior (horizon area, "
                              "minimal surfaces) does not fit this surface");
  return out;
}

Measurement variation_op(const Scenario& s) {
  auto phys = physical_family(s);
  const family::ReferenceFamily ref(phys, s.reference);
  variation::Tolerances tol;
  tol.iso = s.tol;
  const auto rep = variation::evolution_rhs(*phys, ref, s.t0, s.dt, tol);
  Measurement out;
  out.values = {
      {"lhs", rep.lhs, {}},
      {"lhs_central", rep.lhs_central, {}},
      {"rhs", rep.rhs, {}},
      {"bulk_A", rep.rhs_terms.bulk_A, {}},
      {"bulk_H", rep.rhs_terms.bulk_H, {}},
      {"bulk_R", rep.rhs_terms.bulk_R, {}},
      {"boundary_f", rep.rhs_terms.boundary_f, {}},
      {"boundary_Y", rep.rhs_terms.boundary_Y, {}},
      {"residual", rep.residual, {}},
      {"relative_residual", rep.rhs != 0.0 ? rep.residual / std::abs(rep.rhs) : rep.residual, {}},
      {"iso_residual", rep.iso_residual, {}},
      {"normal_leak", rep.normal_leak, {}},
  };
  out.details = {{"reference_kind", rep.reference_kind},
                 {"embedding_branch", rep.embedding_branch},
                 {"richardson_order", rep.order_measurable ? json(rep.richardson_order) : json(nullptr)},
                 {"order_measurable", rep.order_measurable}};

  const auto data = variation::variation_data(*phys, ref, s.t0, s.dt, tol);
  auto special = [&](const char* name, auto&& f) {
    try {
      out.values.push_back({name, f(), {}});
    } catch (const Error& e) {
      out.details[name] = std::string("not applicable: ") + std::string(to_string(e.code()));
    }
  };
  special("chen_zhang_rhs", [&] { return variation::chen_zhang_rhs(data, tol); });
  special("lu_miao_rhs", [&] { return variation::lu_miao_rhs(data, tol); });
  special("bartnik_rhs", [&] { return variation::bartnik_rhs(data, tol); });
  return out;
}

Measurement measure(const Scenario& s, Operation op, const RunOptions& opt) {
  switch (op) {
    case Operation::CheckStatic: return check_static(s, opt);
    case Operation::Geom: return geom(s);
    case Operation::Embed: return embed(s);
    case Operation::Energy: return energy_op(s);
    case Operation::Penrose: return penrose(s);
    case Operation::Variation: return variation_op(s);
    case Operation::Sweep: break;
  }
  fail(ErrorCode::InvalidArgument, "measure: unsupported operation");
}

Scenario coarsened(Scenario s) {
  s.n_theta = std::max(4, s.n_theta / 2);
  s.n_phi = std::max(4, (s.n_phi / 2 + 1) / 2 * 2);
  s.dt *= 2.0;
  s.out_dir.clear();
  return s;
}

// ---------------------------------------------------------------------------

double sweep_level(const Scenario& s) {
  switch (s.sweep.quantity) {
    case SweepQuantity::Variation:
    case SweepQuantity::VariationRichardson: {
      auto phys = physical_family(s);
      const family::ReferenceFamily ref(phys, s.reference);
      variation::Tolerances tol;
      tol.iso = s.tol;
      const auto rep = variation::evolution_rhs(*phys, ref, s.t0, s.dt, tol);
      return s.sweep.quantity == SweepQuantity::Variation ? std::abs(rep.lhs_central - rep.rhs) : rep.residual;
    }
    case SweepQuantity::Gauss:
      return max_abs(surface::gauss_residual(surface::extrinsic_geometry(physical_family(s)->at(s.t0))));
    case SweepQuantity::Codazzi: {
      const auto geo = surface::extrinsic_geometry(physical_family(s)->at(s.t0));
      return surface::codazzi_residual(geo, unit_theta(geo));
    }
    case SweepQuantity::Embedding: {
      const auto spec = s.surface;
      const double t0 = s.t0;
      const auto metric = embedding::AxiMetric::from_profile(
          s.physical_metric(), [=](double t) { return spec.rho(t, t0); }, [=](double t) { return spec.rho_theta(t); });
      auto opts = s.reference.embedding;
      opts.tolerance = std::numeric_limits<double>::infinity();
      return embedding::embed_axisymmetric(metric, ambient::StaticSpace(s.reference.mass), s.grid(), opts).residual;
    }
  }
  return 0.0;
}

RunReport sweep(const Scenario& s, const RunOptions& opt) {
  const auto& sw = s.sweep;
  if (!sw.dt.empty() && !sw.n_theta.empty() && sw.dt.size() != sw.n_theta.size())
    fail(ErrorCode::SchemaError, "sweep.dt and sweep.n_theta must have the same length");
  const std::size_t levels = std::max(sw.dt.size(), sw.n_theta.size());
  if (levels < 3) fail(ErrorCode::SchemaError, "a sweep needs at least 3 levels");

  std::vector<Scenario> level_scenarios(levels, s);
  for (std::size_t k = 0; k < levels; ++k) {
    if (!sw.dt.empty()) level_scenarios[k].dt = sw.dt[k];
    if (!sw.n_theta.empty()) {
      level_scenarios[k].n_theta = sw.n_theta[k];
      level_scenarios[k].n_phi = 2 * sw.n_theta[k];
    }
  }

  // workers pull levels in any order; results land in their own slot
  std::vector<double> residual(levels, 0.0);
  std::vector<std::exception_ptr> errors(levels);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < levels; k = next++) {
      try {
        residual[k] = sweep_level(level_scenarios[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int n_workers = std::clamp<int>(opt.threads, 1, static_cast<int>(levels));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ConvergenceTable table;
  table.quantity = std::string(to_string(sw.quantity));
  table.variable = sw.dt.empty() ? "pi/n_theta" : "dt";
  table.floor = sw.floor;
  std::vector<double> h(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const auto& ls = level_scenarios[k];
    h[k] = sw.dt.empty() ? std::numbers::pi / ls.n_theta : ls.dt;
    ConvergenceRow row;
    row.level = static_cast<int>(k);
    row.n_theta = ls.n_theta;
    row.n_phi = ls.n_phi;
    row.dt = ls.dt;
    row.h = h[k];
    row.residual = residual[k];
    if (k > 0 && residual[k] > sw.floor && residual[k - 1] > sw.floor)
      row.local_order = std::log(residual[k - 1] / residual[k]) / std::log(h[k - 1] / h[k]);
    table.rows.push_back(row);
  }

  RunReport r;
  const auto fit = convergence::fit_order(h, residual, sw.floor);
  table.levels_used = fit.levels_used;
  table.at_floor = std::all_of(residual.begin(), residual.end(), [&](double v) { return v <= sw.floor; });
  if (fit.measurable) {
    table.order = fit.order;
    double spread = 0.0;
    for (double lo : fit.local_orders) spread = std::max(spread, std::abs(lo - fit.order));
    table.order_error = spread;
    r.results.push_back({"order", fit.order, spread});
  }
  table.monotone = fit.monotone;
  if (!fit.monotone) r.warnings.emplace_back("NonMonotoneConvergence: residuals do not decrease under refinement");
  if (table.at_floor) r.warnings.emplace_back("all levels at or below the floor; order not measurable");
  r.results.push_back({"finest_residual", residual.back(), std::abs(residual[levels - 1] - residual[levels - 2])});
  r.convergence = table;
  return r;
}

}  // namespace

RunOptions options_from_environment() {
  RunOptions o;
  if (const char* t = std::getenv("QLVAR_THREADS")) {
    const int n = std::atoi(t);
    if (n <= 0) fail(ErrorCode::InvalidArgument, std::string("QLVAR_THREADS must be a positive integer, got '") + t + "'");
    o.threads = n;
  } else {
    o.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  if (const char* sd = std::getenv("QLVAR_SEED")) o.seed = std::strtoull(sd, nullptr, 10);
  return o;
}

RunReport run(const Scenario& scenario, Operation op, const RunOptions& options) {
  Scenario s = scenario;
  s.operation = op;
  RunReport r;
  if (op == Operation::Sweep) {
    r = sweep(s, options);
  } else {
    auto m = measure(s, op, options);
    // error estimate from a coarser resolution; not every scenario survives coarsening
    if (op != Operation::CheckStatic) {
      try {
        const auto coarse = measure(coarsened(s), op, options);
        for (auto& q : m.values)
          for (const auto& c : coarse.values)
            if (c.name == q.name) q.error = std::abs(q.value - c.value);
      } catch (const Error& e) {
        m.warnings.push_back("no error estimate: coarse run failed with " + std::string(to_string(e.code())));
      }
    } else {
      for (auto& q : m.values) q.error = 0.0;  // analytic evaluation, nothing to refine
    }
    r.results = std::move(m.values);
    r.details = std::move(m.details);
    r.warnings = std::move(m.warnings);
    r.hypothesis_violated = m.hypothesis_violated;
    r.failed = m.failed;
  }
  r.version = QLVAR_VERSION;
  r.operation = std::string(to_string(op));
  r.scenario = to_json(s);
  return r;
}

int exit_code(const RunReport& report) {
  if (report.failed) return 1;
  if (report.hypothesis_violated) return 2;
  return 0;
}

}  // namespace qlvar::cli
