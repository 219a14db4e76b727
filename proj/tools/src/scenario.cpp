#include "qlvar_cli/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "qlvar/error.hpp"

namespace qlvar::cli {

namespace {

constexpr std::pair<Operation, std::string_view> kOperations[] = {
    {Operation::CheckStatic, "check-static"}, {Operation::Geom, "geom"},
    {Operation::Embed, "embed"},              {Operation::Energy, "energy"},
    {Operation::Penrose, "penrose"},          {Operation::Variation, "variation"},
    {Operation::Sweep, "sweep"},
};

constexpr std::pair<SweepQuantity, std::string_view> kQuantities[] = {
    {SweepQuantity::Variation, "variation"},
    {SweepQuantity::VariationRichardson, "variation-richardson"},
    {SweepQuantity::Gauss, "gauss"},
    {SweepQuantity::Codazzi, "codazzi"},
    {SweepQuantity::Embedding, "embedding"},
};

[[noreturn]] void schema(const std::string& what) { fail(ErrorCode::SchemaError, what); }

/// One TOML table with key bookkeeping: every key read is marked, and
/// finish() rejects whatever is left.
class Section {
 public:
  Section(const toml::table* table, std::string path) : table_(table), path_(std::move(path)) {}

  [[nodiscard]] bool present() const { return table_ != nullptr; }

  std::optional<double> number(std::string_view key) {
    const toml::node* n = take(key);
    if (!n) return std::nullopt;
    if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) {
      if (!std::isfinite(*v)) schema(where(key) + " must be finite");
      return v;
    }
    schema(where(key) + " must be a number");
  }

  std::optional<int> integer(std::string_view key) {
    const toml::node* n = take(key);
    if (!n) return std::nullopt;
    if (!n->is_integer()) schema(where(key) + " must be an integer");
    return static_cast<int>(*n->value<std::int64_t>());
  }

  std::optional<std::string> string(std::string_view key) {
    const toml::node* n = take(key);
    if (!n) return std::nullopt;
    if (!n->is_string()) schema(where(key) + " must be a string");
    return *n->value<std::string>();
  }

  std::optional<std::vector<double>> numbers(std::string_view key) {
    const toml::node* n = take(key);
    if (!n) return std::nullopt;
    const auto* arr = n->as_array();
    if (!arr) schema(where(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *arr) {
      if (!(e.is_floating_point() || e.is_integer())) schema(where(key) + " must be an array of numbers");
      out.push_back(*e.value<double>());
    }
    return out;
  }

  std::optional<std::vector<int>> integers(std::string_view key) {
    const toml::node* n = take(key);
    if (!n) return std::nullopt;
    const auto* arr = n->as_array();
    if (!arr) schema(where(key) + " must be an array of integers");
    std::vector<int> out;
    for (const auto& e : *arr) {
      if (!e.is_integer()) schema(where(key) + " must be an array of integers");
      out.push_back(static_cast<int>(*e.value<std::int64_t>()));
    }
    return out;
  }

  Section table(std::string_view key) {
    const toml::node* n = take(key);
    if (!n) return {nullptr, path_ + "." + std::string(key)};
    if (!n->is_table()) schema(where(key) + " must be a table");
    return {n->as_table(), path_.empty() ? std::string(key) : path_ + "." + std::string(key)};
  }

  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_)
      if (!seen_.count(std::string(k.str())))
        schema("unknown key '" + std::string(k.str()) + "' in " + (path_.empty() ? "top level" : "[" + path_ + "]"));
  }

 private:
  const toml::table* table_;
  std::string path_;
  std::set<std::string> seen_;

  const toml::node* take(std::string_view key) {
    if (!table_) return nullptr;
    seen_.insert(std::string(key));
    return table_->get(key);
  }
  [[nodiscard]] std::string where(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }
};

family::ReferenceKind parse_reference_kind(const std::string& s) {
  for (auto k : {family::ReferenceKind::MatchedSphere, family::ReferenceKind::Embedded,
                 family::ReferenceKind::Identical, family::ReferenceKind::Static})
    if (family::to_string(k) == s) return k;
  schema("reference.kind '" + s + "' is not one of matched-sphere, embed, identical, static-sphere");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) schema(std::string(what) + " must be positive");
}

}  // namespace

std::string_view to_string(Operation op) {
  for (const auto& [o, n] : kOperations)
    if (o == op) return n;
  return "?";
}

std::optional<Operation> parse_operation(std::string_view name) {
  for (const auto& [o, n] : kOperations)
    if (n == name) return o;
  return std::nullopt;
}

std::string_view to_string(SweepQuantity q) {
  for (const auto& [k, n] : kQuantities)
    if (k == q) return n;
  return "?";
}

ambient::AmbientMetric Scenario::physical_metric() const {
  return {ambient::StaticSpace(physical_mass), conformal};
}

void parse_grid(std::string_view spec, int& n_theta, int& n_phi) {
  const auto x = spec.find('x');
  auto to_int = [&](std::string_view s, int& out) {
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size() && out > 0;
  };
  int a = 0, b = 0;
  if (x == std::string_view::npos || !to_int(spec.substr(0, x), a) || !to_int(spec.substr(x + 1), b))
    schema("grid '" + std::string(spec) + "' is not of the form NTHETAxNPHI");
  n_theta = a;
  n_phi = b;
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ": " << e.description();
    schema(os.str());
  }

  Scenario s;
  Section top(&root, "");
  if (auto v = top.string("name")) s.name = *v;
  if (auto v = top.string("operation")) {
    s.operation = parse_operation(*v);
    if (!s.operation) schema("unknown operation '" + *v + "'");
  }

  auto phys = top.table("physical");
  if (auto v = phys.number("mass")) s.physical_mass = *v;
  auto conf = phys.table("conformal");
  if (auto v = conf.number("gaussian_amplitude")) s.conformal.gaussian_amplitude = *v;
  if (auto v = conf.number("gaussian_center")) s.conformal.gaussian_center = *v;
  if (auto v = conf.number("gaussian_width")) s.conformal.gaussian_width = *v;
  if (auto v = conf.number("quadratic_coefficient")) s.conformal.quadratic_coefficient = *v;
  if (auto v = conf.number("quadratic_center")) s.conformal.quadratic_center = *v;
  conf.finish();
  phys.finish();

  auto ref = top.table("reference");
  if (auto v = ref.string("kind")) s.reference.kind = parse_reference_kind(*v);
  if (auto v = ref.number("mass")) s.reference.mass = *v;
  if (auto v = ref.number("radius")) s.reference.radius = *v;
  if (auto v = ref.number("omega")) s.reference.omega = *v;
  if (auto v = ref.numbers("axis")) {
    if (v->size() != 3) schema("reference.axis must have three components");
    s.reference.axis = Vec3((*v)[0], (*v)[1], (*v)[2]);
    if (s.reference.axis.norm() == 0.0) schema("reference.axis must be nonzero");
  }
  ref.finish();

  auto surf = top.table("surface");
  if (auto v = surf.number("r0")) s.surface.r0 = *v;
  if (auto v = surf.number("speed")) s.surface.speed = *v;
  if (auto v = surf.numbers("cos_powers")) s.surface.cos_powers = *v;
  surf.finish();

  auto num = top.table("numerics");
  if (auto v = num.string("grid")) parse_grid(*v, s.n_theta, s.n_phi);
  if (auto v = num.number("t0")) s.t0 = *v;
  if (auto v = num.number("dt")) s.dt = *v;
  if (auto v = num.number("tol")) s.tol = *v;
  if (auto v = num.integer("samples")) s.samples = *v;
  if (auto v = num.number("ode_tolerance")) s.reference.embedding.ode_tolerance = *v;
  if (auto v = num.number("embedding_tolerance")) s.reference.embedding.tolerance = *v;
  num.finish();

  auto pen = top.table("penrose");
  if (auto v = pen.number("horizon_area")) s.horizon_area = *v;
  pen.finish();

  auto sw = top.table("sweep");
  if (auto v = sw.string("quantity")) {
    bool found = false;
    for (const auto& [k, n] : kQuantities)
      if (n == *v) {
        s.sweep.quantity = k;
        found = true;
      }
    if (!found) schema("unknown sweep.quantity '" + *v + "'");
  }
  if (auto v = sw.numbers("dt")) s.sweep.dt = *v;
  if (auto v = sw.integers("n_theta")) s.sweep.n_theta = *v;
  if (auto v = sw.number("floor")) s.sweep.floor = *v;
  sw.finish();

  auto out = top.table("output");
  if (auto v = out.string("dir")) s.out_dir = *v;
  if (auto v = out.string("format")) s.format = *v;
  out.finish();

  top.finish();

  require_positive(s.surface.r0, "surface.r0");
  require_positive(s.dt, "numerics.dt");
  require_positive(s.tol, "numerics.tol");
  if (s.samples <= 0) schema("numerics.samples must be positive");
  if (s.physical_mass < 0.0 || s.reference.mass < 0.0) schema("masses must be nonnegative");
  if (s.format != "json-text" && s.format != "csv") schema("output.format must be csv or json-text");
  if (s.horizon_area) require_positive(*s.horizon_area, "penrose.horizon_area");
  for (double d : s.sweep.dt) require_positive(d, "sweep.dt entries");
  for (int n : s.sweep.n_theta)
    if (n <= 0) schema("sweep.n_theta entries must be positive");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) schema("cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

nlohmann::ordered_json to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["operation"] = s.operation ? std::string(to_string(*s.operation)) : std::string();
  j["physical"] = {{"mass", s.physical_mass},
                   {"conformal",
                    {{"gaussian_amplitude", s.conformal.gaussian_amplitude},
                     {"gaussian_center", s.conformal.gaussian_center},
                     {"gaussian_width", s.conformal.gaussian_width},
                     {"quadratic_coefficient", s.conformal.quadratic_coefficient},
                     {"quadratic_center", s.conformal.quadratic_center}}}};
  j["reference"] = {{"kind", family::to_string(s.reference.kind)},
                    {"mass", s.reference.mass},
                    {"radius", s.reference.radius},
                    {"omega", s.reference.omega},
                    {"axis", {s.reference.axis.x(), s.reference.axis.y(), s.reference.axis.z()}}};
  j["surface"] = {{"r0", s.surface.r0}, {"speed", s.surface.speed}, {"cos_powers", s.surface.cos_powers}};
  j["numerics"] = {{"grid", std::to_string(s.n_theta) + "x" + std::to_string(s.n_phi)},
                   {"t0", s.t0},
                   {"dt", s.dt},
                   {"tol", s.tol},
                   {"samples", s.samples},
                   {"ode_tolerance", s.reference.embedding.ode_tolerance},
                   {"embedding_tolerance", s.reference.embedding.tolerance}};
  if (s.horizon_area) j["penrose"] = {{"horizon_area", *s.horizon_area}};
  if (s.operation == Operation::Sweep)
    j["sweep"] = {{"quantity", to_string(s.sweep.quantity)},
                  {"dt", s.sweep.dt},
                  {"n_theta", s.sweep.n_theta},
                  {"floor", s.sweep.floor}};
  return j;
}

}  // namespace qlvar::cli
