#include "synapse/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synapse/error.hpp"

namespace synapse {

void GridSpec::validate() const {
  if (!origin.allFinite() || !extents.allFinite() || !(extents.array() > 0.0).all()) {
    throw Error(ErrorCode::InvalidArgument, "grid extents must be finite and positive");
  }
  if ((resolution.array() < 2).any()) {
    throw Error(ErrorCode::InvalidArgument, "grid resolution must be >= 2 per axis");
  }
}

Vec3 GridSpec::spacing() const {
  return extents.cwiseQuotient((resolution.cast<double>().array() - 1.0).matrix());
}

std::size_t GridSpec::size() const {
  return static_cast<std::size_t>(resolution.x()) * resolution.y() * resolution.z();
}

std::pair<double, double> ScalarField3D::range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask[i]) continue;
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  if (lo > hi) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  return {lo, hi};
}

std::string_view to_string(ScalarSource source) {
  switch (source) {
    case ScalarSource::FieldMagnitude: return "bmag";
    case ScalarSource::Potential: return "potential";
    case ScalarSource::Detuning: return "detuning";
    case ScalarSource::Rabi: return "rabi";
  }
  return "unknown";
}

std::optional<ScalarSource> parse_scalar_source(std::string_view name) {
  for (auto s : {ScalarSource::FieldMagnitude, ScalarSource::Potential, ScalarSource::Detuning,
                 ScalarSource::Rabi}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

ScalarField3D sample_grid(ScalarSource source, const DressedParams& params,
                          const WireAssembly& assembly, const GridSpec& spec, int workers) {
  if (source != ScalarSource::FieldMagnitude) require_in_phase(assembly);
  return sample_function(
      spec,
      [&](const Vec3& p) -> std::optional<double> {
        try {
          switch (source) {
            case ScalarSource::FieldMagnitude:
              return b_dc(assembly, p).norm();
            case ScalarSource::Potential:
              return potential_value(params, assembly, p);
            case ScalarSource::Detuning:
              return detuning(params, assembly, p);
            case ScalarSource::Rabi:
              return rabi_frequency(params, assembly, p);
          }
        } catch (const Error& e) {
          if (e.code() == ErrorCode::Singularity || e.code() == ErrorCode::QuantizationAxis) {
            return std::nullopt;
          }
          throw;
        }
        return std::nullopt;
      },
      workers);
}

}  // namespace synapse
