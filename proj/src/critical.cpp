#include "synapse/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "synapse/parallel.hpp"

namespace synapse {
namespace {

struct Evaluation {
  double value = 0.0;
  BarrierResult barrier;
};

Evaluation evaluate(const DressedParams& params, const WireAssembly& assembly,
                    const ParameterSelector& vary, double value, const BarrierOptions& options) {
  DressedParams p = params;
  WireAssembly a = assembly;
  apply_parameter(p, a, vary, value);
  return {value, barrier_height(p, a, options)};
}

}  // namespace

std::string to_string(const ParameterSelector& s) {
  std::string base;
  switch (s.kind) {
    case ParameterKind::IDC: base = "idc"; break;
    case ParameterKind::IRF: base = "irf"; break;
    case ParameterKind::BiasX: return "bias.x";
    case ParameterKind::BiasY: return "bias.y";
    case ParameterKind::BiasZ: return "bias.z";
    case ParameterKind::Frequency: return "frequency";
  }
  return s.wire < 0 ? base : base + "[" + std::to_string(s.wire) + "]";
}

ParameterSelector parse_parameter(const std::string& text) {
  if (text == "bias.x") return {ParameterKind::BiasX, -1};
  if (text == "bias.y") return {ParameterKind::BiasY, -1};
  if (text == "bias.z") return {ParameterKind::BiasZ, -1};
  if (text == "frequency") return {ParameterKind::Frequency, -1};
  const std::string head = text.substr(0, 3);
  if (head != "idc" && head != "irf") {
    throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + text + "'");
  }
  ParameterSelector s{head == "idc" ? ParameterKind::IDC : ParameterKind::IRF, -1};
  const std::string rest = text.substr(3);
  if (rest.empty()) return s;
  if (rest.size() < 3 || rest.front() != '[' || rest.back() != ']' ||
      !std::all_of(rest.begin() + 1, rest.end() - 1, [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + text + "'");
  }
  s.wire = std::stoi(rest.substr(1, rest.size() - 2));
  return s;
}

void apply_parameter(DressedParams& params, WireAssembly& assembly, const ParameterSelector& s,
                     double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "parameter value must be finite");
  switch (s.kind) {
    case ParameterKind::IDC:
    case ParameterKind::IRF: {
      if (s.wire >= static_cast<int>(assembly.wires.size())) {
        throw Error(ErrorCode::InvalidArgument, "parameter " + to_string(s) + " names a missing wire");
      }
      for (int i = 0; i < static_cast<int>(assembly.wires.size()); ++i) {
        if (s.wire >= 0 && i != s.wire) continue;
        (s.kind == ParameterKind::IDC ? assembly.wires[i].idc : assembly.wires[i].irf) = value;
      }
      break;
    }
    case ParameterKind::BiasX: assembly.bias.x() = value; break;
    case ParameterKind::BiasY: assembly.bias.y() = value; break;
    case ParameterKind::BiasZ: assembly.bias.z() = value; break;
    case ParameterKind::Frequency:
      params.drive = RFDrive(value);
      assembly.drive = params.drive;
      break;
  }
}

CriticalSearchResult critical_parameter(const DressedParams& params, const WireAssembly& assembly,
                                        const ParameterSelector& vary, double lo, double hi,
                                        const CriticalOptions& options) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "critical bracket needs lo < hi");
  if (!(options.tol_param > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_param must be positive");
  const int n = std::max(options.prescan, 2);

  std::vector<std::optional<Evaluation>> scan(n);
  std::vector<std::string> failures(n);
  parallel_for(n, options.workers, [&](std::size_t i) {
    const double v = i + 1 == static_cast<std::size_t>(n) ? hi : lo + (hi - lo) * i / (n - 1);
    try {
      scan[i] = evaluate(params, assembly, vary, v, options.barrier);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });

  CriticalSearchResult result;
  result.parameter = to_string(vary);
  result.bracket_lo = lo;
  result.bracket_hi = hi;
  if (!scan.front() || !scan.back()) {
    const std::string& why = !scan.front() ? failures.front() : failures.back();
    throw Error(ErrorCode::NoBracket, "barrier could not be evaluated at a bracket end: " + why);
  }
  std::optional<int> first;
  std::optional<int> previous;
  for (int i = 0; i < n; ++i) {
    if (!scan[i]) {
      result.warnings.push_back("prescan point " + std::to_string(i) + " failed: " + failures[i]);
      continue;
    }
    if (previous && scan[*previous]->barrier.touching != scan[i]->barrier.touching) {
      result.crossings.push_back(0.5 * (scan[*previous]->value + scan[i]->value));
      if (!first) first = *previous;
    }
    previous = i;
  }
  if (scan.front()->barrier.touching == scan.back()->barrier.touching) {
    std::string msg = std::string("barrier does not straddle the touch tolerance on the bracket (both ends ") +
                      (scan.front()->barrier.touching ? "touching" : "separated") + ")";
    if (!result.crossings.empty()) msg += "; the prescan saw " + std::to_string(result.crossings.size()) + " interior changes";
    throw Error(ErrorCode::NoBracket, msg);
  }
  if (result.crossings.size() > 1) {
    std::string msg = "ambiguous bracket: touching changes " + std::to_string(result.crossings.size()) +
                      " times on the prescan, near";
    for (double c : result.crossings) msg += " " + std::to_string(c);
    result.warnings.push_back(msg + "; refining the first");
  }

  Evaluation a = *scan[*first];
  int j = *first + 1;
  while (!scan[j]) ++j;
  Evaluation b = *scan[j];
  int iter = 0;
  while (b.value - a.value > options.tol_param && iter < options.max_iterations) {
    Evaluation m = evaluate(params, assembly, vary, 0.5 * (a.value + b.value), options.barrier);
    (m.barrier.touching == a.barrier.touching ? a : b) = std::move(m);
    ++iter;
  }
  if (b.value - a.value > options.tol_param) {
    result.warnings.push_back("bisection hit the iteration limit");
  }
  result.final_lo = a.value;
  result.final_hi = b.value;
  result.tolerance_achieved = b.value - a.value;

  Evaluation best = a.barrier.touching ? a : b;
  if (options.barrier.mode == BarrierMode::Geometric) {
    // False position on the signed saddle value, kept inside the final bracket.
    Evaluation u = a, w = b;
    for (int k = 0; k < 40 && std::abs(best.barrier.barrier()) > best.barrier.touch_tolerance; ++k) {
      const double fu = u.barrier.barrier(), fw = w.barrier.barrier();
      if (fu == fw) break;
      const double v = std::clamp(u.value - fu * (w.value - u.value) / (fw - fu), a.value, b.value);
      Evaluation m = evaluate(params, assembly, vary, v, options.barrier);
      ++iter;
      if ((m.barrier.barrier() > 0.0) == (fu > 0.0)) u = m; else w = m;
      if (std::abs(m.barrier.barrier()) < std::abs(best.barrier.barrier()) || !best.barrier.touching) best = m;
    }
  }
  result.iterations = iter;
  result.critical_value = best.value;
  result.barrier = best.barrier.barrier();
  result.touch_tolerance = best.barrier.touch_tolerance;
  result.at_solution = best.barrier;
  for (const auto& w : best.barrier.warnings) result.warnings.push_back(w);
  return result;
}

const char* to_string(Observable o) {
  switch (o) {
    case Observable::Barrier: return "barrier";
    case Observable::MinRadius: return "minRadius";
    case Observable::Touching: return "touching";
  }
  return "?";
}

Observable parse_observable(const std::string& text) {
  if (text == "barrier") return Observable::Barrier;
  if (text == "minRadius" || text == "min-radius") return Observable::MinRadius;
  if (text == "touching") return Observable::Touching;
  throw Error(ErrorCode::InvalidArgument, "unknown observable '" + text + "'");
}

SweepTable parameter_sweep(const DressedParams& params, const WireAssembly& assembly,
                           const SweepSpec& spec, int workers) {
  if (!std::isfinite(spec.from) || !std::isfinite(spec.to)) {
    throw Error(ErrorCode::InvalidArgument, "sweep range must be finite");
  }
  if (spec.steps < 1) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one step");
  const int n = spec.from == spec.to ? 1 : spec.steps;
  if (n == 1 && spec.from != spec.to) throw Error(ErrorCode::InvalidArgument, "a one-row sweep needs from == to");

  SweepTable table;
  table.vary = spec.vary;
  table.observe = spec.observe;
  table.rows.resize(n);
  const double lo = std::min(spec.from, spec.to), hi = std::max(spec.from, spec.to);
  parallel_for(n, workers, [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    row.value = n == 1 ? lo : (i + 1 == static_cast<std::size_t>(n) ? hi : lo + (hi - lo) * i / (n - 1));
    try {
      DressedParams p = params;
      WireAssembly a = assembly;
      apply_parameter(p, a, spec.vary, row.value);
      switch (spec.observe) {
        case Observable::Barrier:
        case Observable::Touching: {
          const BarrierResult r = barrier_height(p, a, spec.barrier);
          row.observable = spec.observe == Observable::Barrier ? r.barrier() : (r.touching ? 1.0 : 0.0);
          break;
        }
        case Observable::MinRadius: {
          if (spec.wire < 0 || spec.wire >= static_cast<int>(a.wires.size())) {
            throw Error(ErrorCode::InvalidArgument, "sweep wire index out of range");
          }
          RadialRange range;
          if (spec.radial) {
            range = *spec.radial;
          } else {
            const double rr = resonance_radius(p, a.wires[spec.wire]);
            range.r_min = 0.05 * rr;
            range.r_max = 4.0 * rr;
            range.tolerance = 1e-9 * rr;
          }
          row.observable = radial_trap_minimum(p, a, spec.wire, spec.azimuth, spec.axial, range).radius;
          break;
        }
      }
    } catch (const Error& e) {
      row.observable = std::numeric_limits<double>::quiet_NaN();
      row.status = to_string(e.code());
    }
  });
  return table;
}

}  // namespace synapse
