#pragma once

#include <stdexcept>
#include <vector>

#include "quadloco/types.hpp"

namespace quadloco {

enum class TerrainKind { RigidFlat, RigidSlope, Soft };

struct TerrainModel {
  TerrainKind kind = TerrainKind::RigidFlat;
  // plane z(x,y) = a0 + a1 x + a2 y (slope; soft uses its nominal plane)
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  double soft_stiffness = 8000.0;   // N/m
  double soft_damping = 300.0;      // N s/m
  double soft_force_cap = 400.0;    // N

  static TerrainModel rigid_flat() { return {}; }
  static TerrainModel rigid_slope(double a0, double a1, double a2) {
    return {TerrainKind::RigidSlope, a0, a1, a2};
  }
  static TerrainModel soft(double k, double c, double cap) {
    return {TerrainKind::Soft, 0, 0, 0, k, c, cap};
  }
};

struct DegeneratePlane : std::runtime_error {
  DegeneratePlane() : std::runtime_error("collinear points: plane fit degenerate") {}
};

double height_at(const TerrainModel& terrain, double x, double y);

struct FootContactState {
  Vec3 position = Vec3::Zero();
  double penetration = 0.0;       // m, >= 0
  double penetration_rate = 0.0;  // m/s
};

/// Impact model: commanded-to-realized force map for one stance foot.
/// Identity on rigid ground; spring-damper normal force on soft ground
/// with the commanded tangential ratio preserved.
Vec3 realize_force(const TerrainModel& terrain, const Vec3& commanded,
                   const FootContactState& foot);

/// Least-squares plane through >= 3 points; (a0, a1, a2).
Vec3 fit_slope(const std::vector<Vec3>& points);

/// Desired (roll, pitch) aligning the body with the fitted plane.
std::pair<double, double> slope_orientation(double a1, double a2);

}  // namespace quadloco
