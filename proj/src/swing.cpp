#include "quadloco/swing.hpp"

#include <algorithm>
#include <cmath>

namespace quadloco {

Vec3 footstep_target(const Vec3& hip_pos, double stance_time,
                     const Vec3& v_des, const Vec3& v_act, double z0,
                     double g_norm, const TerrainModel& terrain) {
  Vec3 p = hip_pos + 0.5 * stance_time * v_des +
           std::sqrt(z0 / g_norm) * (v_act - v_des);
  p.z() = height_at(terrain, p.x(), p.y());
  return p;
}

namespace {

// quintic smoothstep: zero velocity and acceleration at both ends
inline double chord_blend(double s) {
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}
inline double chord_blend_d(double s) {
  return 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

// degree-6 Bezier bump, peak 1 at s = 1/2, triple zeros at the ends
inline double apex_bump(double s) {
  return 64.0 * s * s * s * (1.0 - s) * (1.0 - s) * (1.0 - s);
}
inline double apex_bump_d(double s) {
  return 192.0 * s * s * (1.0 - s) * (1.0 - s) * (1.0 - 2.0 * s);
}

}  // namespace

std::pair<Vec3, Vec3> swing_position(const SwingPlan& plan, double s) {
  s = std::clamp(s, 0.0, 1.0);
  const double w = chord_blend(s);
  const double wd = chord_blend_d(s);
  Vec3 pos = plan.liftoff + w * (plan.target - plan.liftoff);
  Vec3 vel = wd * (plan.target - plan.liftoff) / plan.swing_duration;
  pos.z() += plan.apex_height * apex_bump(s);
  vel.z() += plan.apex_height * apex_bump_d(s) / plan.swing_duration;
  return {pos, vel};
}

}  // namespace quadloco
