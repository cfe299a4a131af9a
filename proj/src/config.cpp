#include "synapse/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "synapse/critical.hpp"

namespace synapse {
namespace {

constexpr std::string_view kDefaultScene = R"(# Two crossed wires carrying DC and RF currents.
species:
  name: Rb87
  gF: 0.5
  F: 2
  mTilde: 2
  mass: 1.44316e-25
drive:
  frequency: 0.8e6
wires:
  - type: line
    point: [0, 0, 0]
    direction: [1, 0, 0]
    idc: 0.0925
    irf: 0.05
  - type: line
    point: [0, 0, -3.5e-4]
    direction: [0, 1, 0]
    idc: 0.0925
    irf: 0.05
bias: [-3e-5, -3e-5, 0]
analysis:
  vary: idc
  bracket: [0.04, 0.2]
  tolParam: 1e-5
  mode: full
rng:
  seed: 1
)";

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

// A mapping node with tracked key use; unknown keys are reported on finish().
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.IsMap()) throw ConfigError(path_.empty() ? "<root>" : path_, line_of(node_), "expected a mapping");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) const { return static_cast<bool>(node_[k]); }
  int line() const { return line_of(node_); }

  YAML::Node get(const std::string& k) {
    used_.insert(k);
    const YAML::Node n = node_[k];
    if (!n || n.IsNull()) throw ConfigError(key(k), line(), "missing required key");
    return n;
  }
  std::optional<YAML::Node> optional(const std::string& k) {
    used_.insert(k);
    const YAML::Node n = node_[k];
    if (!n || n.IsNull()) return std::nullopt;
    return n;
  }

  void finish() const {
    for (const auto& kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (!used_.count(k)) throw ConfigError(key(k), line_of(kv.first), "unknown key");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

double as_double(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError(key, line_of(n), "expected a number");
  const std::string s = n.Scalar();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key, line_of(n), "expected a finite number, got '" + s + "'");
  }
  return v;
}

template <typename Int>
Int as_integral(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError(key, line_of(n), "expected an integer");
  const std::string s = n.Scalar();
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, line_of(n), "expected an integer in range, got '" + s + "'");
  }
  return v;
}

int as_integer(const YAML::Node& n, const std::string& key) { return as_integral<int>(n, key); }

std::string as_string(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError(key, line_of(n), "expected a string");
  return n.Scalar();
}

Vec3 as_vec3(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence() || n.size() != 3) throw ConfigError(key, line_of(n), "expected a list of 3 numbers");
  return {as_double(n[0], key), as_double(n[1], key), as_double(n[2], key)};
}

template <typename F>
auto checked(const std::string& key, int line, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(key, line, e.what());
  }
}

Wire parse_wire(const YAML::Node& node, const std::string& path) {
  Section s(node, path);
  Wire w;
  const std::string type = as_string(s.get("type"), s.key("type"));
  if (type == "line") {
    w.geometry = InfiniteLine{as_vec3(s.get("point"), s.key("point")),
                              as_vec3(s.get("direction"), s.key("direction"))};
  } else if (type == "polyline") {
    const YAML::Node v = s.get("vertices");
    if (!v.IsSequence()) throw ConfigError(s.key("vertices"), line_of(v), "expected a list of points");
    Polyline p;
    for (std::size_t i = 0; i < v.size(); ++i) {
      p.vertices.push_back(as_vec3(v[i], s.key("vertices") + "[" + std::to_string(i) + "]"));
    }
    w.geometry = p;
  } else {
    throw ConfigError(s.key("type"), s.line(), "expected 'line' or 'polyline', got '" + type + "'");
  }
  w.idc = as_double(s.get("idc"), s.key("idc"));
  w.irf = as_double(s.get("irf"), s.key("irf"));
  if (auto n = s.optional("rfPhase")) w.rf_phase = as_double(*n, s.key("rfPhase"));
  s.finish();
  checked(path, s.line(), [&] { w.validate(); return 0; });
  return w;
}

GridSpec parse_grid(const YAML::Node& node, const std::string& path) {
  Section s(node, path);
  GridSpec g;
  g.origin = as_vec3(s.get("origin"), s.key("origin"));
  g.extents = as_vec3(s.get("extents"), s.key("extents"));
  const YAML::Node r = s.get("resolution");
  if (!r.IsSequence() || r.size() != 3) throw ConfigError(s.key("resolution"), line_of(r), "expected 3 integers");
  for (int i = 0; i < 3; ++i) g.resolution[i] = as_integer(r[i], s.key("resolution"));
  s.finish();
  checked(path, s.line(), [&] { g.validate(); return 0; });
  return g;
}

}  // namespace

WireAssembly SceneConfig::assembly() const {
  WireAssembly a;
  a.wires = wires;
  a.bias = schedule ? schedule->at(schedule->knots().front().first) : bias;
  a.drive = drive;
  a.tolerances = tolerances;
  return a;
}

std::string_view default_scene_text() { return kDefaultScene; }

SceneConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<root>", e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError("species", 0, "missing required key");
  Section top(root, "");
  SceneConfig c;

  {
    Section s(top.get("species"), "species");
    c.species.name = as_string(s.get("name"), "species.name");
    c.species.gF = as_double(s.get("gF"), "species.gF");
    c.species.F = as_double(s.get("F"), "species.F");
    c.species.mTilde = as_double(s.get("mTilde"), "species.mTilde");
    c.species.mass = as_double(s.get("mass"), "species.mass");
    s.finish();
    checked("species", s.line(), [&] { c.species.validate(); return 0; });
  }
  {
    Section s(top.get("drive"), "drive");
    const YAML::Node f = s.get("frequency");
    const double freq = as_double(f, "drive.frequency");
    c.drive = checked("drive.frequency", line_of(f), [&] { return RFDrive(freq); });
    s.finish();
  }
  {
    const YAML::Node w = top.get("wires");
    if (!w.IsSequence()) throw ConfigError("wires", line_of(w), "expected a list of wires");
    for (std::size_t i = 0; i < w.size(); ++i) c.wires.push_back(parse_wire(w[i], "wires[" + std::to_string(i) + "]"));
  }
  const auto bias = top.optional("bias");
  const auto schedule = top.optional("biasSchedule");
  if (bias && schedule) throw ConfigError("biasSchedule", line_of(*schedule), "give either bias or biasSchedule, not both");
  if (!bias && !schedule) throw ConfigError("bias", top.line(), "missing required key");
  if (bias) c.bias = as_vec3(*bias, "bias");
  if (schedule) {
    if (!schedule->IsSequence()) throw ConfigError("biasSchedule", line_of(*schedule), "expected a list of knots");
    std::vector<std::pair<double, Vec3>> knots;
    for (std::size_t i = 0; i < schedule->size(); ++i) {
      const std::string path = "biasSchedule[" + std::to_string(i) + "]";
      Section k((*schedule)[i], path);
      knots.emplace_back(as_double(k.get("t"), path + ".t"), as_vec3(k.get("bias"), path + ".bias"));
      k.finish();
    }
    c.schedule = checked("biasSchedule", line_of(*schedule), [&] { return BiasSchedule(knots); });
    c.bias = c.schedule->knots().front().second;
  }
  if (auto t = top.optional("tolerances")) {
    Section s(*t, "tolerances");
    if (auto n = s.optional("exclusionRadius")) c.tolerances.exclusion_radius = as_double(*n, "tolerances.exclusionRadius");
    if (auto n = s.optional("zeroThreshold")) c.tolerances.zero_threshold = as_double(*n, "tolerances.zeroThreshold");
    s.finish();
  }
  if (auto t = top.optional("analysis")) {
    Section s(*t, "analysis");
    AnalysisConfig& a = c.analysis;
    if (auto n = s.optional("grid")) a.grid = parse_grid(*n, "analysis.grid");
    if (auto n = s.optional("vary")) a.vary = as_string(*n, "analysis.vary");
    if (auto n = s.optional("bracket")) {
      if (!n->IsSequence() || n->size() != 2) throw ConfigError("analysis.bracket", line_of(*n), "expected [lo, hi]");
      a.bracket_lo = as_double((*n)[0], "analysis.bracket");
      a.bracket_hi = as_double((*n)[1], "analysis.bracket");
    }
    if (auto n = s.optional("tolParam")) a.tol_param = as_double(*n, "analysis.tolParam");
    if (auto n = s.optional("mode")) {
      const std::string m = as_string(*n, "analysis.mode");
      a.mode = checked("analysis.mode", line_of(*n), [&] { return parse_barrier_mode(m); });
    }
    if (auto n = s.optional("touchTolerance")) a.touch_tolerance = as_double(*n, "analysis.touchTolerance");
    if (auto n = s.optional("images")) a.images = as_integer(*n, "analysis.images");
    if (auto n = s.optional("maxIterations")) a.max_iterations = as_integer(*n, "analysis.maxIterations");
    if (auto n = s.optional("etaMax")) a.eta_max = as_double(*n, "analysis.etaMax");
    if (auto n = s.optional("basinThreshold")) a.basin_threshold = as_double(*n, "analysis.basinThreshold");
    s.finish();
    checked("analysis.vary", s.line(), [&] { return parse_parameter(a.vary); });
    if (!(a.bracket_lo < a.bracket_hi)) throw ConfigError("analysis.bracket", s.line(), "needs lo < hi");
    if (!(a.tol_param > 0.0)) throw ConfigError("analysis.tolParam", s.line(), "must be positive");
    if (a.images < 3) throw ConfigError("analysis.images", s.line(), "must be at least 3");
    if (a.max_iterations < 1) throw ConfigError("analysis.maxIterations", s.line(), "must be positive");
    if (!(a.eta_max > 0.0)) throw ConfigError("analysis.etaMax", s.line(), "must be positive");
    if (!(a.basin_threshold > 0.0)) throw ConfigError("analysis.basinThreshold", s.line(), "must be positive");
  }
  if (auto t = top.optional("dynamics")) {
    Section s(*t, "dynamics");
    DynamicsConfig& d = c.dynamics;
    if (auto n = s.optional("seedWire")) d.seed_wire = as_integer(*n, "dynamics.seedWire");
    if (auto n = s.optional("particles")) d.particles = as_integer(*n, "dynamics.particles");
    if (auto n = s.optional("thermalSpeed")) d.thermal_speed = as_double(*n, "dynamics.thermalSpeed");
    if (auto n = s.optional("dt")) d.dt = as_double(*n, "dynamics.dt");
    if (auto n = s.optional("tMax")) d.t_max = as_double(*n, "dynamics.tMax");
    if (auto n = s.optional("axialWindow")) d.axial_window = as_double(*n, "dynamics.axialWindow");
    s.finish();
    if (d.seed_wire < 0 || d.seed_wire >= static_cast<int>(c.wires.size())) {
      throw ConfigError("dynamics.seedWire", s.line(), "no such wire");
    }
    if (d.particles < 0) throw ConfigError("dynamics.particles", s.line(), "must be non-negative");
    if (!(d.thermal_speed >= 0.0)) throw ConfigError("dynamics.thermalSpeed", s.line(), "must be non-negative");
    if (!(d.dt >= 0.0)) throw ConfigError("dynamics.dt", s.line(), "must be non-negative");
    if (!(d.t_max > 0.0)) throw ConfigError("dynamics.tMax", s.line(), "must be positive");
    if (!(d.axial_window >= 0.0)) throw ConfigError("dynamics.axialWindow", s.line(), "must be non-negative");
  }
  if (auto t = top.optional("rng")) {
    Section s(*t, "rng");
    const YAML::Node n = s.get("seed");
    c.seed = as_integral<std::uint64_t>(n, "rng.seed");
    s.finish();
  }
  top.finish();
  checked("wires", top.line(), [&] { c.assembly().validate(); return 0; });
  return c;
}

SceneConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string to_yaml(const SceneConfig& c) {
  const auto num = format_double;
  const auto vec = [&](const Vec3& v) { return "[" + num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()) + "]"; };
  std::ostringstream o;
  o << "species:\n"
    << "  name: \"" << c.species.name << "\"\n"
    << "  gF: " << num(c.species.gF) << "\n"
    << "  F: " << num(c.species.F) << "\n"
    << "  mTilde: " << num(c.species.mTilde) << "\n"
    << "  mass: " << num(c.species.mass) << "\n"
    << "drive:\n  frequency: " << num(c.drive.frequency()) << "\n"
    << "wires:" << (c.wires.empty() ? " []" : "") << "\n";
  for (const Wire& w : c.wires) {
    if (const auto* line = std::get_if<InfiniteLine>(&w.geometry)) {
      o << "  - type: line\n    point: " << vec(line->point) << "\n    direction: " << vec(line->direction) << "\n";
    } else {
      o << "  - type: polyline\n    vertices:\n";
      for (const Vec3& v : std::get<Polyline>(w.geometry).vertices) o << "      - " << vec(v) << "\n";
    }
    o << "    idc: " << num(w.idc) << "\n    irf: " << num(w.irf) << "\n    rfPhase: " << num(w.rf_phase) << "\n";
  }
  if (c.schedule) {
    o << "biasSchedule:\n";
    for (const auto& [t, b] : c.schedule->knots()) o << "  - {t: " << num(t) << ", bias: " << vec(b) << "}\n";
  } else {
    o << "bias: " << vec(c.bias) << "\n";
  }
  o << "tolerances:\n"
    << "  exclusionRadius: " << num(c.tolerances.exclusion_radius) << "\n"
    << "  zeroThreshold: " << num(c.tolerances.zero_threshold) << "\n";
  const AnalysisConfig& a = c.analysis;
  o << "analysis:\n";
  if (a.grid) {
    o << "  grid:\n    origin: " << vec(a.grid->origin) << "\n    extents: " << vec(a.grid->extents)
      << "\n    resolution: [" << a.grid->resolution.x() << ", " << a.grid->resolution.y() << ", "
      << a.grid->resolution.z() << "]\n";
  }
  o << "  vary: " << a.vary << "\n"
    << "  bracket: [" << num(a.bracket_lo) << ", " << num(a.bracket_hi) << "]\n"
    << "  tolParam: " << num(a.tol_param) << "\n"
    << "  mode: " << to_string(a.mode) << "\n";
  if (a.touch_tolerance) o << "  touchTolerance: " << num(*a.touch_tolerance) << "\n";
  o << "  images: " << a.images << "\n"
    << "  maxIterations: " << a.max_iterations << "\n"
    << "  etaMax: " << num(a.eta_max) << "\n"
    << "  basinThreshold: " << num(a.basin_threshold) << "\n";
  const DynamicsConfig& d = c.dynamics;
  o << "dynamics:\n"
    << "  seedWire: " << d.seed_wire << "\n"
    << "  particles: " << d.particles << "\n"
    << "  thermalSpeed: " << num(d.thermal_speed) << "\n"
    << "  dt: " << num(d.dt) << "\n"
    << "  tMax: " << num(d.t_max) << "\n"
    << "  axialWindow: " << num(d.axial_window) << "\n"
    << "rng:\n  seed: " << c.seed << "\n";
  return o.str();
}

}  // namespace synapse
