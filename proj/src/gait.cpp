#include "quadloco/gait.hpp"

#include <cmath>

namespace quadloco {

GaitSpec GaitSpec::stand() {
  return {GaitName::Stand, 1.0, {1, 1, 1, 1}, {0, 0, 0, 0}};
}

GaitSpec GaitSpec::trot(double period) {
  return {GaitName::Trot, period, {0.5, 0.5, 0.5, 0.5}, {0.0, 0.5, 0.5, 0.0}};
}

GaitSpec GaitSpec::bound(double period) {
  return {GaitName::Bound, period, {0.5, 0.5, 0.5, 0.5}, {0.0, 0.0, 0.5, 0.5}};
}

GaitSpec GaitSpec::quasi_static_walk(double period) {
  return {GaitName::QuasiStaticWalk,
          period,
          {0.75, 0.75, 0.75, 0.75},
          {0.0, 0.5, 0.25, 0.75}};
}

ContactState contacts_at(const GaitSpec& gait, double t) {
  ContactState cs;
  for (int i = 0; i < 4; ++i) {
    double phase = std::fmod(t / gait.period + gait.offsets[i], 1.0);
    if (phase < 0) phase += 1.0;
    cs.phase[i] = phase;
    cs.stance[i] = phase < gait.duty[i];
  }
  return cs;
}

ContactSchedule horizon_schedule(const GaitSpec& gait, double t,
                                 double dt_mpc, int horizon) {
  ContactSchedule sched;
  sched.flags.reserve(horizon);
  for (int j = 0; j < horizon; ++j)
    sched.flags.push_back(contacts_at(gait, t + j * dt_mpc).stance);
  sched.stance_time = gait.duty[0] * gait.period;
  return sched;
}

}  // namespace quadloco
