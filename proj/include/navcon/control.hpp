#pragma once

#include <optional>

#include "navcon/potential.hpp"
#include "navcon/vec2.hpp"

namespace navcon {

struct ControlGains {
  double K = 1.0;    // gradient-descent gain (fully actuated)
  double k_v = 1.0;  // linear-velocity gain (unicycle)
  double k_w = 2.0;  // angular-velocity gain (unicycle)

  void validate() const;  // throws InvalidInput unless all > 0

  bool operator==(const ControlGains&) const = default;
};

/// Backward-difference state for the desired-heading rate; owned by one
/// agent's control loop.
struct HeadingTracker {
  std::optional<double> previous_desired_heading;
  std::optional<double> previous_time;
};

struct UnicycleCommand {
  double v = 0.0;      // m/s (may be negative; the cosine law backs up)
  double omega = 0.0;  // rad/s
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// u = -K * grad(phi).
Vec2 gradient_control(const FieldEval& field, const ControlGains& gains);

/// Four-quadrant angle of the negated gradient. A vanishing gradient holds
/// the current heading, which keeps the desired heading continuous at the goal.
double desired_heading(const FieldEval& field, double current_heading);

/// wrap(current - desired) into (-pi, pi].
double heading_error(double current, double desired);

/// Wrap-aware backward difference of the desired heading; 0 on the first
/// call. Throws InvalidInput when time does not strictly increase.
double heading_rate(HeadingTracker& tracker, double desired, double time);

/// v = k_v * ||grad|| * cos(heading error), omega = -k_w * error + d/dt desired.
UnicycleCommand unicycle_control(const FieldEval& field, double current_heading,
                                 HeadingTracker& tracker, double time,
                                 const ControlGains& gains);

}  // namespace navcon
