// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "synapse/barrier.hpp"
#include "synapse/cli.hpp"
#include "synapse/critical.hpp"
#include "synapse/dressed.hpp"
#include "synapse/dynamics.hpp"
#include "synapse/magnetostatics.hpp"
#include "synapse/minimum_surface.hpp"
#include "synapse/saddle.hpp"
#include "synapse/scenes.hpp"

using namespace synapse;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (wall > budget_s) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(budget_s) + " s budget";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-34s %8.2f s  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), wall, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("synapse-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  if (code != 0) std::fprintf(stderr, "cli exit %d: %s\n", code, err.str().c_str());
  return code;
}

std::mt19937_64 rng(7);
double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

DressedParams default_params() { return {}; }

double critical_idc = 0.0;  // shared between the qualitative and transfer criteria

}  // namespace

int main() {
  const DressedParams p = default_params();
  const double mu0 = PhysicalConstants::mu0;

  criterion("field oracle", 1.0, [&] {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      std::normal_distribution<double> n;
      const Vec3 dir = Vec3(n(rng), n(rng), n(rng)).normalized();
      const InfiniteLine line{Vec3(uniform(-1e-3, 1e-3), uniform(-1e-3, 1e-3), uniform(-1e-3, 1e-3)), dir};
      const double current = uniform(-1.0, 1.0);
      const Vec3 x(uniform(-2e-3, 2e-3), uniform(-2e-3, 2e-3), uniform(-2e-3, 2e-3));
      const Vec3 r = x - line.point;
      const double rho = (r - dir * dir.dot(r)).norm();
      const double exact = mu0 * std::abs(current) / (2.0 * std::numbers::pi * rho);
      worst = std::max(worst, std::abs(field_infinite_wire(line, current, x).norm() - exact) / exact);
    }
    double poly = 0.0;
    const Polyline long_wire{{Vec3(-200, 0, 0), Vec3(-1, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(200, 0, 0)}};
    for (int i = 0; i < 100; ++i) {
      const Vec3 x(uniform(-1e-3, 1e-3), uniform(-5e-4, 5e-4), uniform(-5e-4, 5e-4));
      const Vec3 exact = field_infinite_wire({Vec3::Zero(), Vec3::UnitX()}, 0.1, x);
      poly = std::max(poly, (field_polyline(long_wire, 0.1, x) - exact).norm() / exact.norm());
    }
    return Outcome{worst <= 1e-12 && poly <= 1e-8, fmt("line max rel %.2e, polyline max rel %.2e", worst, poly)};
  });

  criterion("gradient check", 10.0, [&] {
    const WireAssembly a = crossed_wires();
    int n = 0;
    double worst = 0.0;
    while (n < 200) {
      const Vec3 x(uniform(-6e-4, 6e-4), uniform(-6e-4, 6e-4), uniform(-8e-4, 4e-4));
      double dist = 1e9;
      for (const Wire& w : a.wires) dist = std::min(dist, distance_to_wire(w.geometry, x));
      if (dist < 1e-5) continue;
      const PotentialSample s = dressed_potential(p, a, x);
      if (std::hypot(s.delta, s.rabi) < 1e-3 * p.drive.omega()) continue;
      Vec3 fd;
      const double h = 1e-9;  // U curves on a sub-micron scale near resonance
      for (int k = 0; k < 3; ++k) {
        const Vec3 e = Vec3::Unit(k) * h;
        fd[k] = (potential_value(p, a, x + e) - potential_value(p, a, x - e)) / (2.0 * h);
      }
      worst = std::max(worst, (s.grad - fd).norm() / fd.norm());
      ++n;
    }
    return Outcome{worst <= 1e-6, fmt("%.0f points, max rel %.2e", n, worst)};
  });

  criterion("resonance geometry", 10.0, [&] {
    const WireAssembly a = single_wire(0.0925, 0.05);
    const double oracle = mu0 * 0.0925 / (2.0 * std::numbers::pi * p.resonance_field());
    const MinimumSurface s = minimum_surface(p, a, 0, 16, {-1e-3, 1e-3, 5}, {0.2 * oracle, 3.0 * oracle});
    double worst = s.not_found() ? 1.0 : 0.0;
    for (double r : s.radius) worst = std::max(worst, std::abs(r - oracle));
    const bool paper = std::abs(oracle - 1.6183e-4) <= 1e-7;
    return Outcome{worst <= 1e-7 && paper, fmt("rho_res %.6e m, max |r - rho_res| %.2e m", oracle, worst)};
  });

  criterion("parallel-wire critical oracle", 60.0, [&] {
    CriticalOptions o;
    o.barrier.mode = BarrierMode::Geometric;
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double d = uniform(5e-5, 5e-4);
      const double oracle = std::numbers::pi * d * p.resonance_field() / mu0;
      const CriticalSearchResult r =
          critical_parameter(p, parallel_wires(d, 0.05, 0.0), parse_parameter("idc"), 0.005, 0.5, o);
      worst = std::max(worst, std::abs(r.critical_value - oracle));
    }
    return Outcome{worst <= 1e-4, fmt("5 separations, max |I - pi d B_res / mu0| %.2e A", worst)};
  });

  criterion("synthetic saddle oracle", 30.0, [&] {
    double worst = 0.0;
    bool index_ok = true;
    for (int i = 0; i < 10; ++i) {
      const double a = uniform(0.3, 3.0);
      const Objective f = [a](const Vec3& x) {
        const double s = x.x() * x.x() - a * a;
        return ValueGradient{s * s + x.y() * x.y() + x.z() * x.z(), Vec3(4.0 * x.x() * s, 2.0 * x.y(), 2.0 * x.z())};
      };
      const BarrierResult r = find_saddle(f, Vec3(-a, 0.2 * a, 0.1), Vec3(0.9 * a, -0.1 * a, 0.0), SaddleOptions{});
      worst = std::max(worst, std::abs(r.barrier() - std::pow(a, 4)) / std::pow(a, 4));
      index_ok = index_ok && r.hessian_index == 1;
    }
    return Outcome{worst <= 1e-6 && index_ok,
                   fmt("10 random wells, max rel %.2e", worst) + (index_ok ? ", Hessian index 1" : ", Hessian index != 1")};
  });

  criterion("qualitative crossed-wire behaviour", 300.0, [&] {
    std::string detail;
    bool ok = true;

    SweepSpec up;
    up.vary = parse_parameter("idc");
    up.from = 0.04;
    up.to = 0.1;
    up.steps = 13;
    const SweepTable t = parameter_sweep(p, crossed_wires(), up);
    // Strictly decreasing while open, zero once the wells merge.
    bool monotone = true;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      monotone = monotone && t.rows[i].status == "ok";
      if (i == 0) continue;
      const double prev = t.rows[i - 1].observable, cur = t.rows[i].observable;
      monotone = monotone && (prev > 0.0 ? cur < prev : cur <= 0.0);
    }
    const bool closed = t.rows.back().observable <= 1e-3 * t.rows.front().observable;
    ok = ok && monotone && closed;
    detail += std::string("iDC sweep ") + (monotone && closed ? "monotone to zero" : "NOT monotone to zero");

    SweepSpec down;
    down.vary = parse_parameter("irf");
    down.from = 0.005;
    down.to = 0.05;
    down.steps = 10;
    const SweepTable d = parameter_sweep(p, crossed_wires(), down);
    bool rf_ok = true;
    for (std::size_t i = 1; i < d.rows.size(); ++i) rf_ok = rf_ok && d.rows[i].observable > d.rows[i - 1].observable;
    ok = ok && rf_ok;
    detail += std::string("; iRF downward ") + (rf_ok ? "monotone decreasing" : "NOT monotone");

    const fs::path rep = scratch() / "critical.json";
    if (cli({"--report", rep.string(), "critical", "--vary", "idc", "--bracket", "0.04,0.2", "--compare", "0.0925"}) != 0) {
      return Outcome{false, detail + "; critical run failed"};
    }
    const auto j = nlohmann::json::parse(slurp(rep));
    critical_idc = j["results"]["criticalValue"].get<double>();
    const bool recorded = j["results"]["comparison"]["withinOrderOfMagnitude"].get<bool>();
    const bool within = critical_idc >= 0.00925 && critical_idc <= 0.925;
    ok = ok && recorded && within;
    detail += fmt("; critical iDC %.6f A (ratio %.3f to 0.0925 A, recorded in report)", critical_idc,
                  j["results"]["comparison"]["ratio"].get<double>());

    const fs::path bin = scratch() / "grid96.bin";
    const bool grid = cli({"--report", (scratch() / "grid96.json").string(), "grid", "--source", "potential", "--origin",
                           "-6e-4,-6e-4,-8e-4", "--extents", "1.2e-3,1.2e-3,1.2e-3", "--resolution", "96,96,96",
                           "--binary", bin.string()}) == 0 &&
                      fs::file_size(bin) == 8 + 12 + 48 + 96ull * 96 * 96 * 9;
    ok = ok && grid;
    detail += grid ? "; 96^3 grid written" : "; 96^3 grid FAILED";
    return Outcome{ok, detail};
  });

  criterion("transfer property", 120.0, [&] {
    if (critical_idc <= 0.0) return Outcome{false, "no critical current from the previous criterion"};
    SeedSpec seed;
    seed.particles = 100;
    const auto run = [&](double idc, BarrierResult& b) {
      CrossedSceneOptions o;
      o.idc = idc;
      const WireAssembly a = crossed_wires(o);
      b = barrier_height(p, a);
      const double dt = default_time_step(p, a, b.minA.position);
      return ensemble_transfer(p, a, BiasSchedule::constant(a.bias), seed, dt, 0.02);
    };
    BarrierResult low, crit;
    const TransferStats sub = run(0.05, low);
    const TransferStats open = run(critical_idc, crit);
    const double headroom = (sub.max_initial_energy - low.minA.U) / low.barrierA;
    const bool ok = sub.transferred == 0 && headroom < 0.9 && open.transferred >= 1;
    std::string detail = fmt("iDC 0.05 A: %.0f/100 transferred (max energy %.2f x barrier); ", sub.transferred, headroom);
    detail += fmt("iDC %.6f A: %.0f/100 transferred", critical_idc, open.transferred);
    return Outcome{ok, detail};
  });

  criterion("determinism across workers", 120.0, [&] {
    std::vector<std::string> outputs;
    for (const char* w : {"1", "4", "8"}) {
      const std::string tag = scratch().string() + "/det" + w;
      const std::string rep = tag + ".json";
      const bool ran =
          cli({"--report", rep, "--workers", w, "grid", "--source", "potential", "--origin", "-4e-4,-4e-4,-6e-4",
               "--extents", "8e-4,8e-4,8e-4", "--resolution", "24,24,24", "--csv", tag + "-grid.csv", "--binary",
               tag + "-grid.bin"}) == 0 &&
          cli({"--report", rep, "--workers", w, "sweep", "--vary", "idc", "--from", "0.06", "--to", "0.1", "--steps", "5",
               "--out", tag + "-sweep.csv"}) == 0 &&
          cli({"--report", rep, "--workers", w, "trace", "--mode", "ensemble", "--particles", "12", "--tmax", "0.003",
               "--out", tag + "-ensemble.csv"}) == 0 &&
          cli({"--report", rep, "--workers", w, "trace", "--mode", "single", "--tmax", "0.003", "--out", tag + "-single.csv"}) == 0;
      if (!ran) return Outcome{false, std::string("run failed with --workers ") + w};
      std::string all;
      for (const char* f : {"-grid.csv", "-grid.bin", "-sweep.csv", "-ensemble.csv", "-single.csv"}) all += slurp(tag + f);
      outputs.push_back(all);
    }
    const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2] && !outputs[0].empty();
    return Outcome{same, std::string("grid, sweep, trace outputs ") + (same ? "byte-identical" : "DIFFER") +
                             fmt(" across workers 1/4/8 (%.0f bytes)", static_cast<double>(outputs[0].size()))};
  });

  std::error_code ec;
  fs::remove_all(scratch(), ec);
  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
