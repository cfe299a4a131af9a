#include "synapse/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "synapse/barrier.hpp"
#include "synapse/config.hpp"
#include "synapse/critical.hpp"
#include "synapse/dynamics.hpp"
#include "synapse/exporters.hpp"
#include "synapse/field_zeros.hpp"
#include "synapse/isosurface.hpp"
#include "synapse/minimum_surface.hpp"
#include "synapse/report.hpp"

namespace synapse {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, std::size_t count, const std::string& flag) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, x);
    if (ec != std::errc() || ptr != text.data() + end || !std::isfinite(x)) {
      throw UsageError(flag + ": expected " + std::to_string(count) + " comma-separated numbers, got '" + text + "'");
    }
    v.push_back(x);
    pos = end + 1;
  }
  if (v.size() != count) {
    throw UsageError(flag + ": expected " + std::to_string(count) + " comma-separated numbers, got '" + text + "'");
  }
  return v;
}

Vec3 parse_vec3(const std::string& text, const std::string& flag) {
  const auto v = parse_list(text, 3, flag);
  return {v[0], v[1], v[2]};
}

void write_file(const std::string& path, std::ostream& stdout_stream, bool binary,
                const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(stdout_stream);
    return;
  }
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  body(f);
  f.flush();
  if (!f) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

struct Common {
  std::string config_path;
  std::string report_path = "synapse-report.json";
  int workers = 0;
};

struct GridFlags {
  std::string origin, extents, resolution;

  void add(CLI::App* app) {
    app->add_option("--origin", origin, "grid origin x,y,z [m]");
    app->add_option("--extents", extents, "grid extents x,y,z [m]");
    app->add_option("--resolution", resolution, "nodes per axis nx,ny,nz");
  }
  GridSpec resolve(const SceneConfig& c) const {
    GridSpec g;
    if (c.analysis.grid) g = *c.analysis.grid;
    const bool any = !origin.empty() || !extents.empty() || !resolution.empty();
    if (!c.analysis.grid && (origin.empty() || extents.empty() || resolution.empty())) {
      throw UsageError("grid needs --origin, --extents and --resolution (or analysis.grid in the scene)");
    }
    if (any) {
      if (!origin.empty()) g.origin = parse_vec3(origin, "--origin");
      if (!extents.empty()) g.extents = parse_vec3(extents, "--extents");
      if (!resolution.empty()) {
        const auto r = parse_list(resolution, 3, "--resolution");
        for (int i = 0; i < 3; ++i) {
          if (r[i] != std::floor(r[i]) || r[i] < 2 || r[i] > 4096) throw UsageError("--resolution: integers in [2, 4096]");
          g.resolution[i] = static_cast<int>(r[i]);
        }
      }
    }
    try {
      g.validate();
    } catch (const Error& e) {
      throw UsageError(std::string("grid: ") + e.what());
    }
    return g;
  }
};

BarrierOptions barrier_options(const SceneConfig& c) {
  BarrierOptions o;
  o.mode = c.analysis.mode;
  o.touch_tolerance = c.analysis.touch_tolerance;
  o.saddle.images = c.analysis.images;
  o.saddle.max_iterations = c.analysis.max_iterations;
  return o;
}

void add_quasi_static_warning(const SceneConfig& c, RunReport& report) {
  if (c.drive.beyond_quasi_static()) {
    report.warnings.push_back("drive frequency above 1 MHz: the quasi-static RF field model is outside its validity range");
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"Crossed-wire RF-dressed trap analysis", "synapse"};
  app.set_version_flag("--version", std::string(artifact_version()));
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "scene file (YAML); default: bundled crossed-wire scene");
  app.add_option("--report", common.report_path, "JSON run report path ('-' for stdout)");
  app.add_option("--workers", common.workers, "worker threads (0: $SYNAPSE_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber);

  std::function<void(const SceneConfig&, RunReport&)> action;

  // field
  std::string field_at;
  auto* field = app.add_subcommand("field", "static field, RF amplitude and |B| at a point");
  field->add_option("--at", field_at, "x,y,z [m]")->required();
  field->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      const WireAssembly a = c.assembly();
      const Vec3 p = parse_vec3(field_at, "--at");
      const Vec3 b = b_dc(a, p);
      const Vec3 rf = b_rf_amplitude(a, p);
      out << "x,y,z,Bx,By,Bz,Bmag,BRFx,BRFy,BRFz\n"
          << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(p.z()) << ','
          << format_double(b.x()) << ',' << format_double(b.y()) << ',' << format_double(b.z()) << ','
          << format_double(b.norm()) << ',' << format_double(rf.x()) << ',' << format_double(rf.y()) << ','
          << format_double(rf.z()) << '\n';
      report.results = {{"p", to_json(p)}, {"B", to_json(b)}, {"Bmag", b.norm()}, {"BRF", to_json(rf)}};
    };
  });

  // potential
  std::string pot_at, pot_format = "csv";
  auto* potential = app.add_subcommand("potential", "dressed potential sample at a point");
  potential->add_option("--at", pot_at, "x,y,z [m]")->required();
  potential->add_option("--format", pot_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  potential->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      const PotentialSample s = dressed_potential(c.params(), c.assembly(), parse_vec3(pot_at, "--at"));
      const Json j = to_json(s);
      if (pot_format == "json") {
        out << j.dump(2) << '\n';
      } else {
        out << "x,y,z,U,delta,rabi,bMag,gradX,gradY,gradZ\n"
            << format_double(s.p.x()) << ',' << format_double(s.p.y()) << ',' << format_double(s.p.z()) << ','
            << format_double(s.U) << ',' << format_double(s.delta) << ',' << format_double(s.rabi) << ','
            << format_double(s.bMag);
        for (int i = 0; i < 3; ++i) out << ',' << (s.gradient_defined ? format_double(s.grad[i]) : "nan");
        out << '\n';
      }
      report.results = j;
    };
  });

  // grid
  GridFlags grid_flags;
  std::string grid_source = "potential", grid_csv, grid_bin;
  auto* grid = app.add_subcommand("grid", "sample a scalar on a regular grid");
  grid_flags.add(grid);
  grid->add_option("--source", grid_source, "bmag, potential, detuning or rabi")
      ->check(CLI::IsMember({"bmag", "potential", "detuning", "rabi"}));
  grid->add_option("--csv", grid_csv, "CSV output (x,y,z,value,mask)");
  grid->add_option("--binary", grid_bin, "binary grid output");
  grid->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      if (grid_csv.empty() && grid_bin.empty()) throw UsageError("grid needs --csv and/or --binary");
      const GridSpec spec = grid_flags.resolve(c);
      const ScalarSource source = *parse_scalar_source(grid_source);
      const ScalarField3D f = sample_grid(source, c.params(), c.assembly(), spec, common.workers);
      if (!grid_csv.empty()) write_file(grid_csv, out, false, [&](std::ostream& o) { write_grid_csv(o, f, grid_source, unit_of(source)); });
      if (!grid_bin.empty()) write_file(grid_bin, out, true, [&](std::ostream& o) { write_grid_binary(o, f); });
      std::size_t masked = 0;
      for (auto m : f.mask) masked += m == 0;
      const auto [lo, hi] = f.range();
      report.results = {{"source", grid_source},
                        {"unit", unit_of(source)},
                        {"nodes", f.values.size()},
                        {"masked", masked},
                        {"min", std::isfinite(lo) ? Json(lo) : Json(nullptr)},
                        {"max", std::isfinite(hi) ? Json(hi) : Json(nullptr)},
                        {"csv", grid_csv},
                        {"binary", grid_bin}};
    };
  });

  // surface
  GridFlags surf_grid;
  std::string surf_kind = "minimum", surf_source = "potential", surf_out, surf_axial = "-5e-4,5e-4,41", surf_radial;
  double surf_level = std::numeric_limits<double>::quiet_NaN();
  int surf_wire = 0, surf_azimuths = 48;
  auto* surface = app.add_subcommand("surface", "isosurface or minimum-surface mesh (PLY)");
  surf_grid.add(surface);
  surface->add_option("--kind", surf_kind, "iso or minimum")->check(CLI::IsMember({"iso", "minimum"}));
  surface->add_option("--source", surf_source, "iso: bmag, potential, detuning or rabi")
      ->check(CLI::IsMember({"bmag", "potential", "detuning", "rabi"}));
  surface->add_option("--level", surf_level, "iso level (default: resonance field for bmag, 0 for detuning)");
  surface->add_option("--wire", surf_wire, "minimum: wire index");
  surface->add_option("--azimuths", surf_azimuths, "minimum: azimuth samples")->check(CLI::PositiveNumber);
  surface->add_option("--axial", surf_axial, "minimum: lo,hi,samples along the wire [m]");
  surface->add_option("--radial", surf_radial, "minimum: rmin,rmax [m] (default 0.05..2 x resonance radius)");
  surface->add_option("--out", surf_out, "PLY output")->required();
  surface->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      const DressedParams params = c.params();
      const WireAssembly a = c.assembly();
      if (surf_kind == "iso") {
        const ScalarSource source = *parse_scalar_source(surf_source);
        double level = surf_level;
        if (std::isnan(level)) {
          if (source == ScalarSource::FieldMagnitude) level = params.resonance_field();
          else if (source == ScalarSource::Detuning) level = 0.0;
          else throw UsageError("--level is required for this source");
        }
        const ScalarField3D f = sample_grid(source, params, a, surf_grid.resolve(c), common.workers);
        const IsoSurfaceMesh mesh = extract_isosurface(f, level);
        write_file(surf_out, out, false, [&](std::ostream& o) { write_ply(o, mesh, "isosurface of " + surf_source + " at " + format_double(level) + " " + unit_of(source)); });
        report.results = {{"kind", "iso"}, {"source", surf_source}, {"level", level},
                          {"vertices", mesh.vertices.size()}, {"triangles", mesh.triangles.size()}, {"out", surf_out}};
        return;
      }
      if (surf_wire < 0 || surf_wire >= static_cast<int>(a.wires.size())) throw UsageError("--wire: no such wire");
      const auto ax = parse_list(surf_axial, 3, "--axial");
      if (ax[2] < 1 || ax[2] != std::floor(ax[2])) throw UsageError("--axial: sample count must be a positive integer");
      RadialRange range;
      const double rr = resonance_radius(params, a.wires[surf_wire]);
      range.r_min = 0.05 * rr;
      range.r_max = 2.0 * rr;
      if (!surf_radial.empty()) {
        const auto r = parse_list(surf_radial, 2, "--radial");
        range.r_min = r[0];
        range.r_max = r[1];
      }
      range.tolerance = 1e-9 * std::max(range.r_max, 1e-12);
      const MinimumSurface s = minimum_surface(params, a, surf_wire, surf_azimuths,
                                               {ax[0], ax[1], static_cast<int>(ax[2])}, range, common.workers);
      const TriangleMesh mesh = s.to_mesh();
      write_file(surf_out, out, false, [&](std::ostream& o) { write_ply(o, mesh, "minimum surface of wire " + std::to_string(surf_wire)); });
      Json radius = Json::array();
      for (double r : s.radius) radius.push_back(std::isfinite(r) ? Json(r) : Json(nullptr));
      report.results = {{"kind", "minimum"}, {"wire", surf_wire}, {"cells", s.found.size()},
                        {"notFound", s.not_found()}, {"vertices", mesh.vertices.size()},
                        {"triangles", mesh.triangles.size()}, {"radius", radius}, {"out", surf_out}};
    };
  });

  // zeros
  GridFlags zero_grid;
  auto* zeros = app.add_subcommand("zeros", "static-field zeros in a box");
  zero_grid.add(zeros);
  zeros->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      const GridSpec g = zero_grid.resolve(c);
      const FieldZeros z = find_field_zeros(c.assembly(), g.box(), g.resolution, common.workers);
      out << "x,y,z\n";
      for (const Vec3& p : z.zeros) out << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(p.z()) << '\n';
      report.results = to_json(z);
    };
  });

  // barrier
  std::string seed_a, seed_b, bar_mode;
  auto* barrier = app.add_subcommand("barrier", "well minima, saddle and barrier between wires 0 and 1");
  barrier->add_option("--seed-a", seed_a, "well seed near wire 0, x,y,z [m]");
  barrier->add_option("--seed-b", seed_b, "well seed near wire 1, x,y,z [m]");
  barrier->add_option("--mode", bar_mode, "full or geometric (default: scene)")->check(CLI::IsMember({"full", "geometric"}));
  barrier->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      BarrierOptions o = barrier_options(c);
      if (!bar_mode.empty()) o.mode = parse_barrier_mode(bar_mode);
      if (seed_a.empty() != seed_b.empty()) throw UsageError("give both --seed-a and --seed-b or neither");
      const BarrierResult r = seed_a.empty()
                                  ? barrier_height(c.params(), c.assembly(), o)
                                  : barrier_height(c.params(), c.assembly(), parse_vec3(seed_a, "--seed-a"),
                                                   parse_vec3(seed_b, "--seed-b"), o);
      out << "barrierA_J,barrierB_J,barrier_K,touching,hessianIndex\n"
          << format_double(r.barrierA) << ',' << format_double(r.barrierB) << ','
          << format_double(energy_report(r.barrier()).kelvin) << ',' << (r.touching ? 1 : 0) << ','
          << r.hessian_index << '\n';
      report.results = to_json(r);
      report.results["mode"] = to_string(o.mode);
      for (const auto& w : r.warnings) report.warnings.push_back(w);
    };
  });

  // critical
  std::string crit_vary, crit_bracket, crit_mode;
  double crit_tol = 0.0;
  std::optional<double> crit_compare;
  auto* critical = app.add_subcommand("critical", "bisect a parameter to the barrier-closing value");
  critical->add_option("--vary", crit_vary, "idc, irf, idc[k], irf[k], bias.x|y|z, frequency");
  critical->add_option("--bracket", crit_bracket, "lo,hi");
  critical->add_option("--tol", crit_tol, "bracket width at termination")->check(CLI::PositiveNumber);
  critical->add_option("--mode", crit_mode, "full or geometric")->check(CLI::IsMember({"full", "geometric"}));
  critical->add_option("--compare", crit_compare, "reference value to compare the result with");
  critical->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      CriticalOptions o;
      o.barrier = barrier_options(c);
      if (!crit_mode.empty()) o.barrier.mode = parse_barrier_mode(crit_mode);
      o.tol_param = crit_tol > 0.0 ? crit_tol : c.analysis.tol_param;
      o.workers = common.workers;
      double lo = c.analysis.bracket_lo, hi = c.analysis.bracket_hi;
      if (!crit_bracket.empty()) {
        const auto b = parse_list(crit_bracket, 2, "--bracket");
        lo = b[0];
        hi = b[1];
      }
      ParameterSelector vary;
      try {
        vary = parse_parameter(crit_vary.empty() ? c.analysis.vary : crit_vary);
      } catch (const Error& e) {
        throw UsageError(std::string("--vary: ") + e.what());
      }
      const CriticalSearchResult r = critical_parameter(c.params(), c.assembly(), vary, lo, hi, o);
      out << "parameter,criticalValue,barrier_J,iterations\n"
          << r.parameter << ',' << format_double(r.critical_value) << ',' << format_double(r.barrier) << ','
          << r.iterations << '\n';
      report.results = to_json(r);
      report.results["mode"] = to_string(o.barrier.mode);
      if (crit_compare) {
        const double ratio = r.critical_value / *crit_compare;
        report.results["comparison"] = {{"reference", *crit_compare},
                                        {"ratio", ratio},
                                        {"withinOrderOfMagnitude", ratio >= 0.1 && ratio <= 10.0}};
      }
      for (const auto& w : r.warnings) report.warnings.push_back(w);
    };
  });

  // sweep
  std::string sw_vary, sw_observe = "barrier", sw_out, sw_mode;
  double sw_from = 0.0, sw_to = 0.0, sw_azimuth = 0.0, sw_axial = 0.0;
  int sw_steps = 11, sw_wire = 0;
  auto* sweep = app.add_subcommand("sweep", "tabulate an observable over a parameter range");
  sweep->add_option("--vary", sw_vary, "parameter (default: analysis.vary)");
  sweep->add_option("--from", sw_from, "first value")->required();
  sweep->add_option("--to", sw_to, "last value")->required();
  sweep->add_option("--steps", sw_steps, "number of rows")->check(CLI::PositiveNumber);
  sweep->add_option("--observe", sw_observe, "barrier, minRadius or touching")
      ->check(CLI::IsMember({"barrier", "minRadius", "min-radius", "touching"}));
  sweep->add_option("--mode", sw_mode, "barrier mode: full or geometric")->check(CLI::IsMember({"full", "geometric"}));
  sweep->add_option("--wire", sw_wire, "minRadius: wire index");
  sweep->add_option("--azimuth", sw_azimuth, "minRadius: azimuth [rad]");
  sweep->add_option("--axial", sw_axial, "minRadius: axial position [m]");
  sweep->add_option("--out", sw_out, "CSV output ('-' for stdout)")->required();
  sweep->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      SweepSpec s;
      try {
        s.vary = parse_parameter(sw_vary.empty() ? c.analysis.vary : sw_vary);
      } catch (const Error& e) {
        throw UsageError(std::string("--vary: ") + e.what());
      }
      s.from = sw_from;
      s.to = sw_to;
      s.steps = sw_steps;
      s.observe = parse_observable(sw_observe);
      s.barrier = barrier_options(c);
      if (!sw_mode.empty()) s.barrier.mode = parse_barrier_mode(sw_mode);
      s.wire = sw_wire;
      s.azimuth = sw_azimuth;
      s.axial = sw_axial;
      const SweepTable t = parameter_sweep(c.params(), c.assembly(), s, common.workers);
      write_file(sw_out, out, false, [&](std::ostream& o) { write_sweep_csv(o, t); });
      Json rows = Json::array();
      for (const auto& r : t.rows) {
        rows.push_back({{"value", r.value}, {"observable", std::isfinite(r.observable) ? Json(r.observable) : Json(nullptr)}, {"status", r.status}});
        if (r.status != "ok") report.warnings.push_back("sweep row at " + format_double(r.value) + " failed: " + r.status);
      }
      report.results = {{"parameter", to_string(t.vary)}, {"observable", to_string(t.observe)}, {"rows", rows}, {"out", sw_out}};
    };
  });

  // trace
  std::string tr_start, tr_velocity, tr_out, tr_mode = "single";
  double tr_dt = 0.0, tr_tmax = 0.0;
  std::optional<int> tr_particles;
  std::optional<std::uint64_t> tr_seed;
  auto* trace = app.add_subcommand("trace", "classical trajectory or ensemble transfer");
  trace->add_option("--mode", tr_mode, "single or ensemble")->check(CLI::IsMember({"single", "ensemble"}));
  trace->add_option("--start", tr_start, "single: start x,y,z [m] (default: first ensemble seed)");
  trace->add_option("--velocity", tr_velocity, "single: vx,vy,vz [m/s]");
  trace->add_option("--dt", tr_dt, "time step [s] (default: scene, else trap period / 200)");
  trace->add_option("--tmax", tr_tmax, "duration [s] (default: scene)");
  trace->add_option("--particles", tr_particles, "ensemble size (default: scene)");
  trace->add_option("--seed", tr_seed, "rng seed (default: scene)");
  trace->add_option("--out", tr_out, "CSV output: trajectory (single) or per-particle outcomes (ensemble)");
  trace->callback([&] {
    action = [&](const SceneConfig& c, RunReport& report) {
      const DressedParams params = c.params();
      const WireAssembly a = c.assembly();
      const BiasSchedule schedule = c.bias_schedule();
      SeedSpec seed;
      seed.wire = c.dynamics.seed_wire;
      seed.particles = tr_particles.value_or(c.dynamics.particles);
      seed.thermal_speed = c.dynamics.thermal_speed;
      seed.seed = tr_seed.value_or(c.seed);
      seed.axial_window = c.dynamics.axial_window;
      if (seed.particles < 0) throw UsageError("--particles must be non-negative");
      const double tmax = tr_tmax > 0.0 ? tr_tmax : c.dynamics.t_max;
      TrajectoryOptions base;
      base.eta_max = c.analysis.eta_max;
      base.basin_threshold = c.analysis.basin_threshold;

      // Default step from the trap the first seed sits in.
      const auto dt_near = [&](const Vec3& p) {
        if (tr_dt > 0.0) return tr_dt;
        if (c.dynamics.dt > 0.0) return c.dynamics.dt;
        DescentOptions d;
        double scale = resonance_radius(params, a.wires.at(seed.wire));
        d.length_scale = scale;
        d.energy_scale = std::abs(params.energy_prefactor() * params.drive.omega());
        d.tol_grad = 1e-9 * d.energy_scale / scale;
        d.max_step = 0.05;
        d.max_iterations = 2000;
        return default_time_step(params, a, descend(dressed_objective(params, a), p, d).position);
      };

      if (tr_mode == "single") {
        ParticleState s0;
        if (!tr_start.empty()) {
          s0.position = parse_vec3(tr_start, "--start");
        } else {
          SeedSpec one = seed;
          one.particles = 1;
          s0 = seed_particles(params, a, one).front();
        }
        if (!tr_velocity.empty()) s0.velocity = parse_vec3(tr_velocity, "--velocity");
        base.dt = dt_near(s0.position);
        base.t_max = tmax;
        const Trajectory t = integrate_trajectory(params, a, schedule, s0, base);
        if (!tr_out.empty()) write_file(tr_out, out, false, [&](std::ostream& o) { write_trajectory_csv(o, t); });
        report.results = {{"mode", "single"}, {"dt", base.dt}, {"tMax", tmax}, {"steps", t.steps},
                          {"termination", to_string(t.reason)}, {"maxEta", std::isfinite(t.max_eta) ? Json(t.max_eta) : Json(nullptr)},
                          {"final", {{"position", to_json(t.states.back().position)}, {"velocity", to_json(t.states.back().velocity)}, {"time", t.states.back().time}}},
                          {"out", tr_out}};
        if (t.reason == Termination::Adiabaticity) report.warnings.push_back("adiabaticity violated along the trajectory");
        return;
      }

      const std::vector<ParticleState> starts = seed_particles(params, a, seed);
      const double dt = starts.empty() ? (tr_dt > 0.0 ? tr_dt : std::max(c.dynamics.dt, tmax)) : dt_near(starts.front().position);
      const TransferStats stats = ensemble_transfer(params, a, schedule, seed, dt, tmax, base, common.workers);
      if (!tr_out.empty()) {
        write_file(tr_out, out, false, [&](std::ostream& o) {
          o << "# units: x0,y0,z0 [m]; vx0,vy0,vz0 [m/s]\n"
            << "particle,x0,y0,z0,vx0,vy0,vz0,outcome\n";
          for (std::size_t i = 0; i < starts.size(); ++i) {
            const ParticleState& s = starts[i];
            o << i << ',' << format_double(s.position.x()) << ',' << format_double(s.position.y()) << ','
              << format_double(s.position.z()) << ',' << format_double(s.velocity.x()) << ','
              << format_double(s.velocity.y()) << ',' << format_double(s.velocity.z()) << ','
              << to_string(stats.outcomes[i]) << '\n';
          }
        });
      }
      out << "particles,transferred,lost,meanTransferTime_s\n"
          << stats.particles << ',' << stats.transferred << ',' << stats.lost << ','
          << format_double(stats.mean_transfer_time) << '\n';
      report.results = to_json(stats);
      report.results["mode"] = "ensemble";
      report.results["dt"] = dt;
      report.results["tMax"] = tmax;
      report.results["seed"] = seed.seed;
      report.results["out"] = tr_out;
      const auto violations = std::count(stats.outcomes.begin(), stats.outcomes.end(), Termination::Adiabaticity);
      if (violations > 0) report.warnings.push_back(std::to_string(violations) + " particles violated adiabaticity");
    };
  });

  RunReport report;
  report.argv = args;
  int code = kExitOk;
  std::optional<SceneConfig> config;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    report.command = app.get_subcommands().front()->get_name();
    config = common.config_path.empty() ? parse_config(default_scene_text()) : load_config(common.config_path);
    report.config = to_yaml(*config);
    add_quasi_static_warning(*config, report);
    action(*config, report);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    report.error = e.what();
    code = kExitConfig;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    report.error = e.what();
    code = e.code() == ErrorCode::Io ? kExitIo : kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    report.error = e.what();
    code = kExitDomain;
  }

  report.exit_code = code;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_file(common.report_path, out, false, [&](std::ostream& o) { o << to_json(report).dump(2) << '\n'; });
  } catch (const Error& e) {
    err << "error (io): " << e.what() << '\n';
    return kExitIo;
  }
  return code;
}

}  // namespace synapse
