#include "quadloco/terrain.hpp"

#include <algorithm>
#include <cmath>

namespace quadloco {

double height_at(const TerrainModel& terrain, double x, double y) {
  switch (terrain.kind) {
    case TerrainKind::RigidFlat:
      return 0.0;
    case TerrainKind::RigidSlope:
    case TerrainKind::Soft:
      return terrain.a0 + terrain.a1 * x + terrain.a2 * y;
  }
  return 0.0;
}

Vec3 realize_force(const TerrainModel& terrain, const Vec3& commanded,
                   const FootContactState& foot) {
  if (terrain.kind != TerrainKind::Soft) return commanded;
  const double fn_cmd = commanded.z();
  const double fn = std::clamp(terrain.soft_stiffness * foot.penetration +
                                   terrain.soft_damping * foot.penetration_rate,
                               0.0, terrain.soft_force_cap);
  Vec3 actual = Vec3::Zero();
  actual.z() = fn;
  if (fn > 0.0 && fn_cmd > 1e-12) {
    const double ratio = fn / fn_cmd;
    actual.x() = commanded.x() * ratio;
    actual.y() = commanded.y() * ratio;
  }
  return actual;
}

Vec3 fit_slope(const std::vector<Vec3>& points) {
  if (points.size() < 3) throw DegeneratePlane();
  // normal equations for z = a0 + a1 x + a2 y
  Mat3 ata = Mat3::Zero();
  Vec3 atz = Vec3::Zero();
  for (const Vec3& p : points) {
    Vec3 row(1.0, p.x(), p.y());
    ata += row * row.transpose();
    atz += row * p.z();
  }
  Eigen::FullPivLU<Mat3> lu(ata);
  if (lu.rank() < 3) throw DegeneratePlane();
  return lu.solve(atz);
}

std::pair<double, double> slope_orientation(double a1, double a2) {
  return {std::atan(a2), std::atan(a1)};
}

}  // namespace quadloco
