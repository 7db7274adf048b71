#include "navcon/control.hpp"

#include <cmath>
#include <numbers>

#include "navcon/errors.hpp"

namespace navcon {

void ControlGains::validate() const {
  if (!(K > 0.0)) throw InvalidInput("gain K must be > 0");
  if (!(k_v > 0.0)) throw InvalidInput("gain k_v must be > 0");
  if (!(k_w > 0.0)) throw InvalidInput("gain k_w must be > 0");
}

double wrap_angle(double angle) {
  double w = std::remainder(angle, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

Vec2 gradient_control(const FieldEval& field, const ControlGains& gains) {
  return -gains.K * field.gradient;
}

double desired_heading(const FieldEval& field, double current_heading) {
  const Vec2 g = field.gradient;
  if (g.x == 0.0 && g.y == 0.0) return wrap_angle(current_heading);
  // atan2 can land on -pi (negative-zero ordinate); fold it into (-pi, pi].
  return wrap_angle(std::atan2(-g.y, -g.x));
}

double heading_error(double current, double desired) {
  return wrap_angle(current - desired);
}

double heading_rate(HeadingTracker& tracker, double desired, double time) {
  double rate = 0.0;
  if (tracker.previous_time.has_value()) {
    if (!(time > *tracker.previous_time))
      throw InvalidInput("heading_rate: time must strictly increase");
    const double dt = time - *tracker.previous_time;
    rate = wrap_angle(desired - *tracker.previous_desired_heading) / dt;
  }
  tracker.previous_desired_heading = desired;
  tracker.previous_time = time;
  return rate;
}

UnicycleCommand unicycle_control(const FieldEval& field, double current_heading,
                                 HeadingTracker& tracker, double time,
                                 const ControlGains& gains) {
  const double theta_d = desired_heading(field, current_heading);
  const double err = heading_error(current_heading, theta_d);
  const double theta_d_rate = heading_rate(tracker, theta_d, time);
  UnicycleCommand cmd;
  cmd.v = gains.k_v * field.gradient.norm() * std::cos(err);
  cmd.omega = -gains.k_w * err + theta_d_rate;
  return cmd;
}

}  // namespace navcon
