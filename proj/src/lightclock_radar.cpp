#include "lightclock/lightclock_radar.hpp"

#include <cmath>

namespace lightclock {

ClockState::ClockState(BigInt count_, Rational tick_, Hyper arm)
    : count(std::move(count_)), tick_duration(std::move(tick_)), arm_length(std::move(arm)) {
  if (count < 0) throw Error(ErrorKind::Parameter, "tick count must be nonnegative");
  if (tick_duration <= 0) throw Error(ErrorKind::Parameter, "tick duration must be positive");
  if (!arm_length.is_pure_infinitesimal()) {
    throw Error(ErrorKind::Parameter, "arm length must be a pure infinitesimal");
  }
}

double clock_elapsed(const ClockState& before, const ClockState& after) {
  if (before.tick_duration != after.tick_duration) {
    throw Error(ErrorKind::Unit, "snapshots use different tick durations");
  }
  if (after.count < before.count) {
    throw Error(ErrorKind::Monotonicity, "clock count decreased between snapshots");
  }
  Rational elapsed = Rational(after.count - before.count) * after.tick_duration;
  return static_cast<double>(elapsed);
}

RadarRecord einstein_measures(double t1, double t3, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::Parameter, "light speed c must be positive");
  if (!std::isfinite(t1) || !std::isfinite(t3)) throw Error(ErrorKind::Parameter, "times must be finite");
  if (t3 < t1) throw Error(ErrorKind::Causality, "reception precedes emission");

  RadarRecord rec;
  rec.t1 = t1;
  rec.t3 = t3;
  rec.c = c;
  rec.r_e = 0.5 * c * (t3 - t1);
  rec.t_e = rec.r_e == 0.0 ? t3 : 0.5 * (t3 + t1);
  if (rec.t_e != 0.0) rec.v_e = rec.r_e / rec.t_e;
  return rec;
}

RadarRecord simulate_ping(const Reflector& refl, double t1, double c) {
  if (!(c > 0.0)) throw Error(ErrorKind::Parameter, "light speed c must be positive");
  if (!(std::abs(refl.v) < c)) {
    throw Error(ErrorKind::Parameter, "reflector speed |v| must be below c (superluminal reflector)");
  }
  // outbound light c (t - t1) meets x0 + v t
  const double t_reflect = (refl.x0 + c * t1) / (c - refl.v);
  const double x_reflect = refl.position(t_reflect);
  if (x_reflect < 0.0 || t_reflect < t1) {
    throw Error(ErrorKind::Geometry, "reflector is behind the emitter at the intercept");
  }
  const double t3 = t_reflect + x_reflect / c;
  return einstein_measures(t1, t3, c);
}

double radar_velocity(const RadarRecord& ping_a, const RadarRecord& ping_b) {
  const double dt = ping_b.t_e - ping_a.t_e;
  if (dt == 0.0) throw Error(ErrorKind::DegeneratePair, "pings share the same Einstein time");
  return (ping_b.r_e - ping_a.r_e) / dt;
}

}  // namespace lightclock
