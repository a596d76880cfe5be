#include "stmesh/problems.hpp"

#include <algorithm>
#include <cmath>

namespace stmesh {

double Manufactured1d::exact_u(double x, double t) const {
  return std::sin(M_PI * x) * std::exp(-t);
}

double Manufactured1d::exact_p(double x, double t) const {
  (void)t;
  return x - 0.5;
}

ProblemData Manufactured1d::problem_data() const {
  ProblemData data;
  data.nu = nu;
  const double v = nu;
  data.f = [v](const Point& xt) {
    const double x = xt[0], t = xt[1];
    Point out = Point::Zero();
    // du/dt - nu u_xx + dp/dx
    out[0] = (-1.0 + v * M_PI * M_PI) * std::sin(M_PI * x) * std::exp(-t) + 1.0;
    return out;
  };
  data.g_D = [](const Point& xt) {
    Point out = Point::Zero();
    out[0] = std::sin(M_PI * xt[0]) * std::exp(-xt[1]);
    return out;
  };
  data.u0 = [](const Point& xt) {
    Point out = Point::Zero();
    out[0] = std::sin(M_PI * xt[0]);
    return out;
  };
  data.div_source = [](const Point& xt) {
    return M_PI * std::cos(M_PI * xt[0]) * std::exp(-xt[1]);
  };
  return data;
}

ProblemData constant_velocity_problem(const Point& velocity, double nu) {
  ProblemData data;
  data.nu = nu;
  data.g_D = [velocity](const Point&) { return velocity; };
  data.u0 = [velocity](const Point&) { return velocity; };
  return data;
}

ProblemData pump_problem(const MotionSpec& motion, double nu) {
  ProblemData data;
  data.nu = nu;
  data.u0 = [](const Point&) { return Point::Zero(); };
  data.alpha_R = [](const Point& xt, SpatialTag tag) { return robin_valve(xt[3], tag); };
  // Membrane velocity d/dt g_mov, extended into the chamber by the positive
  // part of the membrane profile and a linear fade towards the bottom so the
  // extension vanishes on all fixed walls (chamber z in [-0.4, 0.4]).
  data.g_D = [motion](const Point& xt) {
    const double t = xt[3];
    const double r2 =
        (xt[0] * xt[0] + xt[1] * xt[1]) / (motion.pump_radius * motion.pump_radius);
    const double profile = std::max(1.0 - r2, 0.0);
    const double fade = std::clamp((xt[2] - (motion.pump_z0 - 0.8)) / 0.8, 0.0, 1.0);
    Point out = Point::Zero();
    out[2] = motion.pump_amplitude * M_PI * std::sin(2.0 * M_PI * t) * profile * fade;
    return out;
  };
  return data;
}

ProblemData pipe_problem(const MotionSpec& motion, double nu) {
  ProblemData data;
  data.nu = nu;
  data.u0 = [](const Point&) { return Point::Zero(); };
  data.alpha_R = [](const Point& xt, SpatialTag tag) { return robin_valve(xt[3], tag); };
  // Strip velocity d/dt g_mov = scale |Z+3| pi sin(2 pi t) e_z with the
  // current z pulled back to the reference height; zero above z = -3 so the
  // extension vanishes on the fixed part of the mantle.
  data.g_D = [motion](const Point& xt) {
    const double t = xt[3];
    const double s2 = std::sin(M_PI * t) * std::sin(M_PI * t);
    const double z_off = xt[2] + motion.ypipe_offset;
    Point out = Point::Zero();
    if (z_off < 0.0) {
      const double ref = -z_off / (1.0 - motion.ypipe_scale * s2);
      out[2] = motion.ypipe_scale * ref * M_PI * std::sin(2.0 * M_PI * t);
    }
    return out;
  };
  return data;
}

}  // namespace stmesh
