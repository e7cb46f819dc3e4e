#pragma once

// Count-based light-clocks and the radar (Einstein) measurement protocol
// between a stationary s-point at the origin and a moving m-point.

#include <optional>

#include "lightclock/infinitesimals.hpp"
#include "lightclock/scalar.hpp"

namespace lightclock {

/// Snapshot of a light-clock. Elapsed time is count * tick_duration, exactly.
struct ClockState {
  BigInt count{0};
  Rational tick_duration{1};
  Hyper arm_length = Hyper::infinitesimal(1.0);

  ClockState() = default;
  ClockState(BigInt count_, Rational tick_, Hyper arm = Hyper::infinitesimal(1.0));

  Rational elapsed() const { return Rational(count) * tick_duration; }
};

/// Time between two snapshots of the same clock.
double clock_elapsed(const ClockState& before, const ClockState& after);

struct RadarRecord {
  double t1 = 0.0;  // emission, s-clock
  double t3 = 0.0;  // reception, s-clock
  double c = 1.0;
  double t_e = 0.0;
  double r_e = 0.0;
  std::optional<double> v_e;
};

/// Uniformly moving reflector x(t) = x0 + v t in the s-frame.
struct Reflector {
  double x0 = 0.0;
  double v = 0.0;

  double position(double t) const { return x0 + v * t; }
};

RadarRecord einstein_measures(double t1, double t3, double c);

/// Emits a pulse at t1 from the origin, reflects it off refl and returns the
/// measures of the round trip.
RadarRecord simulate_ping(const Reflector& refl, double t1, double c);

/// Einstein velocity from two pings, (r_E(b) - r_E(a)) / (t_E(b) - t_E(a)).
double radar_velocity(const RadarRecord& ping_a, const RadarRecord& ping_b);

}  // namespace lightclock
