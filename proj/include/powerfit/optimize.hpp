#ifndef POWERFIT_OPTIMIZE_HPP
#define POWERFIT_OPTIMIZE_HPP

#include <array>
#include <functional>

namespace powerfit::optimize {

struct Minimum1d {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's method (golden section with parabolic steps) on [lo, hi].
Minimum1d brent_minimize(const std::function<double(double)> &f, double lo,
                         double hi, double xtol = 1e-10, int max_iter = 500);

/// Coarse scan over `grid_points` values between lo and hi (geometric in
/// x - lo when `log_spaced`), then Brent on the best cell's neighbours.
Minimum1d scan_then_brent(const std::function<double(double)> &f, double lo,
                          double hi, int grid_points, bool log_spaced,
                          double xtol = 1e-10);

/// Root of a monotone function by bisection-safeguarded secant (Brent-Dekker).
double brent_root(const std::function<double(double)> &f, double lo, double hi,
                  double xtol = 1e-14, int max_iter = 200);

using Vec2 = std::array<double, 2>;

struct Minimum2d {
  Vec2 x{};
  double f = 0.0;
  Vec2 gradient{};
  int iterations = 0;
  bool converged = false;
};

struct NewtonOptions {
  double step_tol = 1e-9;
  double grad_tol = 1e-7;
  int max_iter = 200;
  double fd_step = 1e-6;
};

/// Newton's method with analytic gradient and a central-difference Hessian
/// of that gradient, backtracking line search, and steepest descent when the
/// Hessian is not positive definite. `grad_norm(x, g)` is the quantity
/// compared against grad_tol (defaults to the Euclidean norm of g).
Minimum2d newton_minimize(const std::function<double(const Vec2 &)> &f,
                          const std::function<Vec2(const Vec2 &)> &grad,
                          Vec2 start, const NewtonOptions &opts = {},
                          const std::function<double(const Vec2 &, const Vec2 &)> &grad_norm =
                              nullptr);

/// Nelder-Mead simplex.
Minimum2d nelder_mead(const std::function<double(const Vec2 &)> &f, Vec2 start,
                      Vec2 scale, double ftol = 1e-15, int max_iter = 20000);

}  // namespace powerfit::optimize

#endif  // POWERFIT_OPTIMIZE_HPP
