#include "synapse/report.hpp"

#include <algorithm>
#include <cmath>

namespace synapse {
namespace {

// JSON has no NaN/inf; those become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

const char* artifact_version() { return SYNAPSE_VERSION; }

Json to_json(const Vec3& v) { return Json::array({number(v.x()), number(v.y()), number(v.z())}); }

Json energy_json(double joules) {
  const EnergyReport e = energy_report(joules);
  return {{"J", number(e.joules)}, {"Hz", number(e.hertz)}, {"K", number(e.kelvin)}};
}

Json to_json(const PotentialSample& s) {
  Json j = {{"p", to_json(s.p)},
            {"U", number(s.U)},
            {"delta", number(s.delta)},
            {"rabi", number(s.rabi)},
            {"bMag", number(s.bMag)}};
  j["grad"] = s.gradient_defined ? to_json(s.grad) : Json(nullptr);
  return j;
}

Json to_json(const BarrierResult& r, bool with_path) {
  Json j = {{"minA", {{"position", to_json(r.minA.position)}, {"U", number(r.minA.U)}}},
            {"minB", {{"position", to_json(r.minB.position)}, {"U", number(r.minB.U)}}},
            {"saddle", {{"position", to_json(r.saddle.position)}, {"U", number(r.saddle.U)}}},
            {"barrierA", energy_json(r.barrierA)},
            {"barrierB", energy_json(r.barrierB)},
            {"converged", r.converged},
            {"residual", number(r.residual)},
            {"hessianIndex", r.hessian_index},
            {"iterations", r.iterations},
            {"merged", r.merged},
            {"touching", r.touching},
            {"touchTolerance", number(r.touch_tolerance)}};
  if (with_path) {
    Json path = Json::array();
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      path.push_back({{"position", to_json(r.path[i])}, {"U", number(r.path_energy[i])}});
    }
    j["path"] = path;
  }
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const CriticalSearchResult& r) {
  Json crossings = Json::array();
  for (double c : r.crossings) crossings.push_back(number(c));
  return {{"parameter", r.parameter},
          {"criticalValue", number(r.critical_value)},
          {"bracket", {number(r.bracket_lo), number(r.bracket_hi)}},
          {"finalBracket", {number(r.final_lo), number(r.final_hi)}},
          {"iterations", r.iterations},
          {"barrier", energy_json(r.barrier)},
          {"touchTolerance", number(r.touch_tolerance)},
          {"toleranceAchieved", number(r.tolerance_achieved)},
          {"crossings", crossings},
          {"atSolution", to_json(r.at_solution, false)},
          {"warnings", r.warnings}};
}

Json to_json(const TransferStats& s) {
  Json outcomes = Json::object();
  for (Termination t : {Termination::TimeLimit, Termination::DomainExit, Termination::Fence,
                        Termination::Adiabaticity, Termination::Transferred}) {
    outcomes[to_string(t)] = std::count(s.outcomes.begin(), s.outcomes.end(), t);
  }
  return {{"nParticles", s.particles},
          {"nTransferred", s.transferred},
          {"nLost", s.lost},
          {"meanTransferTime", number(s.mean_transfer_time)},
          {"maxEta", number(s.max_eta)},
          {"maxInitialEnergy", number(s.max_initial_energy)},
          {"outcomes", outcomes}};
}

Json to_json(const FieldZeros& z) {
  Json zeros = Json::array();
  for (const Vec3& p : z.zeros) zeros.push_back(to_json(p));
  return {{"zeros", zeros}, {"threshold", number(z.threshold)}};
}

Json to_json(const RunReport& r) {
  Json j = {{"artifact", {{"name", "quantum_synapse"}, {"version", artifact_version()}}},
            {"command", r.command},
            {"argv", r.argv},
            {"config", r.config},
            {"results", r.results},
            {"warnings", r.warnings},
            {"wallTime", number(r.wall_time)},
            {"exitCode", r.exit_code}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace synapse
