#include "synapse/exporters.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "synapse/config.hpp"

namespace synapse {
namespace {

static_assert(std::endian::native == std::endian::little, "binary grid writer assumes a little-endian host");

std::string num(double v) { return std::isnan(v) ? "nan" : format_double(v); }

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorCode::Io, "truncated binary grid");
  return v;
}

}  // namespace

std::string unit_of(ScalarSource source) {
  switch (source) {
    case ScalarSource::FieldMagnitude: return "T";
    case ScalarSource::Potential: return "J";
    case ScalarSource::Detuning:
    case ScalarSource::Rabi: return "rad/s";
  }
  return "";
}

std::string unit_of(const ParameterSelector& s) {
  switch (s.kind) {
    case ParameterKind::IDC:
    case ParameterKind::IRF: return "A";
    case ParameterKind::BiasX:
    case ParameterKind::BiasY:
    case ParameterKind::BiasZ: return "T";
    case ParameterKind::Frequency: return "Hz";
  }
  return "";
}

std::string unit_of(Observable o) {
  switch (o) {
    case Observable::Barrier: return "J";
    case Observable::MinRadius: return "m";
    case Observable::Touching: return "1";
  }
  return "";
}

void write_ply(std::ostream& out, const TriangleMesh& mesh, const std::string& comment) {
  out << "ply\nformat ascii 1.0\n";
  out << "comment units m\n";
  if (!comment.empty()) out << "comment " << comment << "\n";
  out << "element vertex " << mesh.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "element face " << mesh.triangles.size() << "\n"
      << "property list uchar int vertex_indices\n"
      << "end_header\n";
  for (const Vec3& v : mesh.vertices) out << num(v.x()) << ' ' << num(v.y()) << ' ' << num(v.z()) << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_grid_csv(std::ostream& out, const ScalarField3D& field, const std::string& source,
                    const std::string& unit) {
  const GridSpec& g = field.spec;
  out << "# source: " << source << "\n"
      << "# units: x,y,z [m]; value [" << unit << "]; mask 1 = valid\n"
      << "# resolution: " << g.resolution.x() << " " << g.resolution.y() << " " << g.resolution.z()
      << " (x fastest)\n"
      << "x,y,z,value,mask\n";
  for (int k = 0; k < g.resolution.z(); ++k) {
    for (int j = 0; j < g.resolution.y(); ++j) {
      for (int i = 0; i < g.resolution.x(); ++i) {
        const std::size_t id = g.index(i, j, k);
        const Vec3 p = g.node(i, j, k);
        out << num(p.x()) << ',' << num(p.y()) << ',' << num(p.z()) << ',' << num(field.values[id]) << ','
            << static_cast<int>(field.mask[id]) << '\n';
      }
    }
  }
}

void write_grid_binary(std::ostream& out, const ScalarField3D& field) {
  const GridSpec& g = field.spec;
  out.write("SYNGRID1", 8);
  for (int i = 0; i < 3; ++i) put<std::int32_t>(out, g.resolution[i]);
  for (int i = 0; i < 3; ++i) put<double>(out, g.origin[i]);
  const Vec3 h = g.spacing();
  for (int i = 0; i < 3; ++i) put<double>(out, h[i]);
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(field.mask.data()), static_cast<std::streamsize>(field.mask.size()));
}

ScalarField3D read_grid_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), 8) || std::memcmp(magic.data(), "SYNGRID1", 8) != 0) {
    throw Error(ErrorCode::Io, "not a binary grid block");
  }
  ScalarField3D f;
  for (int i = 0; i < 3; ++i) f.spec.resolution[i] = get<std::int32_t>(in);
  for (int i = 0; i < 3; ++i) f.spec.origin[i] = get<double>(in);
  Vec3 h;
  for (int i = 0; i < 3; ++i) h[i] = get<double>(in);
  for (int i = 0; i < 3; ++i) f.spec.extents[i] = h[i] * (f.spec.resolution[i] - 1);
  f.spec.validate();
  f.values.resize(f.spec.size());
  f.mask.resize(f.spec.size());
  if (!in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double))) ||
      !in.read(reinterpret_cast<char*>(f.mask.data()), static_cast<std::streamsize>(f.mask.size()))) {
    throw Error(ErrorCode::Io, "truncated binary grid");
  }
  return f;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "# parameter: " << to_string(table.vary) << " [" << unit_of(table.vary) << "]\n"
      << "# observable: " << to_string(table.observe) << " [" << unit_of(table.observe) << "]\n"
      << "value,observable,status\n";
  for (const SweepRow& r : table.rows) out << num(r.value) << ',' << num(r.observable) << ',' << r.status << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  out << "# units: t [s]; x,y,z [m]; vx,vy,vz [m/s]; U [J]; eta [1]\n"
      << "# termination: " << to_string(t.reason) << "\n"
      << "t,x,y,z,vx,vy,vz,U,eta\n";
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const ParticleState& s = t.states[i];
    out << num(s.time) << ',' << num(s.position.x()) << ',' << num(s.position.y()) << ',' << num(s.position.z())
        << ',' << num(s.velocity.x()) << ',' << num(s.velocity.y()) << ',' << num(s.velocity.z()) << ','
        << num(t.U[i]) << ',' << num(t.eta[i]) << '\n';
  }
}

}  // namespace synapse
