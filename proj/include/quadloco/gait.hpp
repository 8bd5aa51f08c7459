#pragma once

#include <array>
#include <vector>

#include "quadloco/types.hpp"

namespace quadloco {

// Leg indexing: 0 = FR, 1 = FL, 2 = RR, 3 = RL.

enum class GaitName { Stand, QuasiStaticWalk, Trot, Bound };

struct GaitSpec {
  GaitName name = GaitName::Stand;
  double period = 0.4;                          // s
  std::array<double, 4> duty{1, 1, 1, 1};       // stance fraction
  std::array<double, 4> offsets{0, 0, 0, 0};    // phase offsets in [0,1)

  static GaitSpec stand();
  static GaitSpec trot(double period = 0.4);
  static GaitSpec bound(double period = 0.4);
  static GaitSpec quasi_static_walk(double period = 1.2);
};

struct ContactState {
  std::array<bool, 4> stance{};
  std::array<double, 4> phase{};  // per-leg fractional phase in [0,1)
};

struct ContactSchedule {
  std::vector<std::array<bool, 4>> flags;  // horizon x 4
  double stance_time = 0.0;                // duty * period
};

ContactState contacts_at(const GaitSpec& gait, double t);

ContactSchedule horizon_schedule(const GaitSpec& gait, double t,
                                 double dt_mpc, int horizon);

}  // namespace quadloco
