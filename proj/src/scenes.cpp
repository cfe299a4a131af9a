#include "synapse/scenes.hpp"

namespace synapse {

WireAssembly crossed_wires(const CrossedSceneOptions& options) {
  WireAssembly a;
  a.wires.push_back(Wire{InfiniteLine{Vec3::Zero(), Vec3::UnitX()}, options.idc, options.irf, 0.0});
  a.wires.push_back(
      Wire{InfiniteLine{Vec3(0.0, 0.0, -options.gap), Vec3::UnitY()}, options.idc, options.irf, 0.0});
  a.bias = options.bias;
  a.drive = RFDrive(options.frequency);
  return a;
}

WireAssembly single_wire(double idc, double irf, const Vec3& bias, double frequency) {
  WireAssembly a;
  a.wires.push_back(Wire{InfiniteLine{Vec3::Zero(), Vec3::UnitX()}, idc, irf, 0.0});
  a.bias = bias;
  a.drive = RFDrive(frequency);
  return a;
}

WireAssembly parallel_wires(double separation, double idc, double irf, const Vec3& bias,
                            double frequency) {
  WireAssembly a;
  a.wires.push_back(Wire{InfiniteLine{Vec3(0.0, -separation / 2, 0.0), Vec3::UnitX()}, idc, irf, 0.0});
  a.wires.push_back(Wire{InfiniteLine{Vec3(0.0, separation / 2, 0.0), Vec3::UnitX()}, idc, irf, 0.0});
  a.bias = bias;
  a.drive = RFDrive(frequency);
  return a;
}

}  // namespace synapse
