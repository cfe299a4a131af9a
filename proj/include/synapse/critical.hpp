#pragma once

#include <string>
#include <vector>

#include "synapse/barrier.hpp"
#include "synapse/minimum_surface.hpp"

namespace synapse {

enum class ParameterKind { IDC, IRF, BiasX, BiasY, BiasZ, Frequency };

/// A scalar scene parameter. Currents apply to one wire, or to every wire
/// when wire < 0. Text form: idc, irf, idc[1], bias.x, bias.y, bias.z, frequency.
struct ParameterSelector {
  ParameterKind kind = ParameterKind::IDC;
  int wire = -1;

  bool operator==(const ParameterSelector&) const = default;
};

std::string to_string(const ParameterSelector& selector);
ParameterSelector parse_parameter(const std::string& text);

/// Writes `value` into the scene; frequency updates both the drive of the
/// params and of the assembly.
void apply_parameter(DressedParams& params, WireAssembly& assembly, const ParameterSelector& selector,
                     double value);

struct CriticalOptions {
  BarrierOptions barrier;
  double tol_param = 1e-5;
  int prescan = 9;        // coarse samples over the bracket, ends included
  int max_iterations = 200;
  int workers = 0;        // prescan parallelism
};

struct CriticalSearchResult {
  std::string parameter;
  double critical_value = 0.0;
  double bracket_lo = 0.0;  // as given
  double bracket_hi = 0.0;
  double final_lo = 0.0;    // bracket at termination
  double final_hi = 0.0;
  int iterations = 0;
  double barrier = 0.0;     // at critical_value, J
  double touch_tolerance = 0.0;
  double tolerance_achieved = 0.0;  // final bracket width
  BarrierResult at_solution;
  std::vector<double> crossings;    // touching changes seen on the prescan
  std::vector<std::string> warnings;
};

/// Bisection on the touching status of barrier_height over [lo, hi]. The ends
/// must disagree (Error(NoBracket) otherwise); more than one change on the
/// prescan adds an ambiguous-bracket warning and the first change is refined.
/// The reported value is the touching end of the final bracket; in geometric
/// mode, where the barrier is signed, a few false-position steps then bring
/// |barrier| under the touch tolerance.
CriticalSearchResult critical_parameter(const DressedParams& params, const WireAssembly& assembly,
                                        const ParameterSelector& vary, double lo, double hi,
                                        const CriticalOptions& options = {});

enum class Observable { Barrier, MinRadius, Touching };

const char* to_string(Observable observable);
Observable parse_observable(const std::string& text);

struct SweepSpec {
  ParameterSelector vary;
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
  Observable observe = Observable::Barrier;
  BarrierOptions barrier;
  // MinRadius: ray from `wire` at (azimuth, axial); the radial range defaults
  // to [0.05, 4] x the wire's resonance radius at each row.
  int wire = 0;
  double azimuth = 0.0;
  double axial = 0.0;
  std::optional<RadialRange> radial;
};

struct SweepRow {
  double value = 0.0;
  double observable = 0.0;  // NaN when the row failed
  std::string status = "ok";
};

struct SweepTable {
  ParameterSelector vary;
  Observable observe = Observable::Barrier;
  std::vector<SweepRow> rows;  // ascending parameter value
};

SweepTable parameter_sweep(const DressedParams& params, const WireAssembly& assembly,
                           const SweepSpec& spec, int workers = 0);

}  // namespace synapse
