#pragma once

#include <random>

#include "synapse/dressed.hpp"
#include "synapse/scenes.hpp"

namespace test {

using synapse::Vec3;

/// Fixed-seed generator for property tests.
inline std::mt19937_64& rng() {
  static std::mt19937_64 r(20061017);
  return r;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Vec3 uniform_vec(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

inline Vec3 unit_vec() {
  std::normal_distribution<double> n;
  Vec3 v(n(rng()), n(rng()), n(rng()));
  return v.normalized();
}

inline synapse::DressedParams params(double frequency = 0.8e6) {
  synapse::DressedParams p;
  p.drive = synapse::RFDrive(frequency);
  return p;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace test
