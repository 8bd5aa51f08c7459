#pragma once

#include "quadloco/terrain.hpp"
#include "quadloco/types.hpp"

namespace quadloco {

struct SwingPlan {
  Vec3 liftoff = Vec3::Zero();
  Vec3 target = Vec3::Zero();
  double swing_duration = 0.2;  // s
  double apex_height = 0.08;    // m above the chord
};

/// Raibert heuristic plus capture-point correction, projected onto the
/// terrain plane.
Vec3 footstep_target(const Vec3& hip_pos, double stance_time,
                     const Vec3& v_des, const Vec3& v_act, double z0,
                     double g_norm, const TerrainModel& terrain);

/// Bezier swing trajectory sampled at normalized phase s in [0,1].
/// Returns position and velocity (the exact time derivative).
std::pair<Vec3, Vec3> swing_position(const SwingPlan& plan, double s);

}  // namespace quadloco
