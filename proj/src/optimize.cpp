#include "powerfit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "powerfit/errors.hpp"

namespace powerfit::optimize {

namespace {

constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt 5) / 2

double norm2(const Vec2 &v) { return std::hypot(v[0], v[1]); }

}  // namespace

Minimum1d brent_minimize(const std::function<double(double)> &f, double lo,
                         double hi, double xtol, int max_iter) {
  double a = lo;
  double b = hi;
  double x = a + kGolden * (b - a);
  double w = x;
  double v = x;
  double fx = f(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = xtol * 0.5 + 1e-15 * std::fabs(x);
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - mid) <= tol2 - 0.5 * (b - a)) {
      return {x, fx, iter, true};
    }
    bool golden = true;
    if (std::fabs(e) > tol1) {
      // parabola through x, w, v
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double e_prev = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < mid ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < mid ? b : a) - x;
      d = kGolden * e;
    }
    const double u =
        std::fabs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx, max_iter, false};
}

Minimum1d scan_then_brent(const std::function<double(double)> &f, double lo,
                          double hi, int grid_points, bool log_spaced,
                          double xtol) {
  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / (grid_points - 1);
    grid[i] = log_spaced ? lo + std::exp(std::log(1e-6) * (1.0 - t) +
                                         std::log(hi - lo) * t)
                         : lo + t * (hi - lo);
  }
  grid.front() = std::max(grid.front(), lo);
  grid.back() = hi;
  std::size_t best = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v < best_f) {
      best_f = v;
      best = i;
    }
  }
  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(best + 1, grid.size() - 1)];
  auto result = brent_minimize(f, a, b, xtol);
  result.iterations += grid_points;
  if (best_f < result.f) {
    result.x = grid[best];
    result.f = best_f;
  }
  return result;
}

double brent_root(const std::function<double(double)> &f, double lo, double hi,
                  double xtol, int max_iter) {
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw ConvergenceError("brent_root: interval does not bracket a root");
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * 1e-16 * std::fabs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return b;
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q),
                             std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw ConvergenceError("brent_root: iteration limit reached");
}

Minimum2d newton_minimize(const std::function<double(const Vec2 &)> &f,
                          const std::function<Vec2(const Vec2 &)> &grad,
                          Vec2 start, const NewtonOptions &opts,
                          const std::function<double(const Vec2 &, const Vec2 &)> &grad_norm) {
  const auto measure = [&](const Vec2 &at, const Vec2 &g) {
    return grad_norm ? grad_norm(at, g) : norm2(g);
  };
  Minimum2d out;
  Vec2 x = start;
  double fx = f(x);
  Vec2 g = grad(x);
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    // Hessian by central differences of the gradient, symmetrised.
    std::array<Vec2, 2> h{};
    for (int j = 0; j < 2; ++j) {
      const double step = opts.fd_step * std::max(1.0, std::fabs(x[j]));
      Vec2 xp = x;
      Vec2 xm = x;
      xp[j] += step;
      xm[j] -= step;
      const Vec2 gp = grad(xp);
      const Vec2 gm = grad(xm);
      for (int i = 0; i < 2; ++i) h[i][j] = (gp[i] - gm[i]) / (2.0 * step);
    }
    const double off = 0.5 * (h[0][1] + h[1][0]);
    h[0][1] = h[1][0] = off;
    const double det = h[0][0] * h[1][1] - off * off;

    Vec2 dir;
    if (h[0][0] > 0.0 && det > 0.0) {
      dir = {-(h[1][1] * g[0] - off * g[1]) / det,
             -(-off * g[0] + h[0][0] * g[1]) / det};
    } else {
      dir = {-g[0], -g[1]};
    }

    double t = 1.0;
    Vec2 next{};
    double f_next = fx;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      next = {x[0] + t * dir[0], x[1] + t * dir[1]};
      f_next = f(next);
      if (std::isfinite(f_next) && f_next <= fx) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    const double step_len = t * norm2(dir);
    if (!accepted) {
      // No descent at machine resolution: converged iff the gradient is small.
      out = {x, fx, g, iter, measure(x, g) < opts.grad_tol};
      return out;
    }
    x = next;
    fx = f_next;
    g = grad(x);
    if (step_len < opts.step_tol && measure(x, g) < opts.grad_tol) {
      return {x, fx, g, iter, true};
    }
  }
  return {x, fx, g, opts.max_iter, false};
}

Minimum2d nelder_mead(const std::function<double(const Vec2 &)> &f, Vec2 start,
                      Vec2 scale, double ftol, int max_iter) {
  std::array<Vec2, 3> p = {start, start, start};
  p[1][0] += scale[0];
  p[2][1] += scale[1];
  std::array<double, 3> fv = {f(p[0]), f(p[1]), f(p[2])};
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return fv[a] < fv[b]; });
    const int lo = idx[0];
    const int mid = idx[1];
    const int hi = idx[2];
    if (std::fabs(fv[hi] - fv[lo]) <=
        ftol * (std::fabs(fv[lo]) + std::fabs(fv[hi])) + 1e-300) {
      return {p[lo], fv[lo], {}, iter, true};
    }
    const Vec2 centroid = {0.5 * (p[lo][0] + p[mid][0]),
                           0.5 * (p[lo][1] + p[mid][1])};
    const auto along = [&](double coef) {
      return Vec2{centroid[0] + coef * (p[hi][0] - centroid[0]),
                  centroid[1] + coef * (p[hi][1] - centroid[1])};
    };
    const Vec2 refl = along(-1.0);
    const double f_refl = f(refl);
    if (f_refl < fv[lo]) {
      const Vec2 exp = along(-2.0);
      const double f_exp = f(exp);
      if (f_exp < f_refl) {
        p[hi] = exp;
        fv[hi] = f_exp;
      } else {
        p[hi] = refl;
        fv[hi] = f_refl;
      }
    } else if (f_refl < fv[mid]) {
      p[hi] = refl;
      fv[hi] = f_refl;
    } else {
      const Vec2 con = f_refl < fv[hi] ? along(-0.5) : along(0.5);
      const double f_con = f(con);
      if (f_con < std::min(f_refl, fv[hi])) {
        p[hi] = con;
        fv[hi] = f_con;
      } else {
        for (int i : {mid, hi}) {
          p[i] = {0.5 * (p[i][0] + p[lo][0]), 0.5 * (p[i][1] + p[lo][1])};
          fv[i] = f(p[i]);
        }
      }
    }
  }
  const int best = static_cast<int>(
      std::min_element(fv.begin(), fv.end()) - fv.begin());
  return {p[best], fv[best], {}, max_iter, false};
}

}  // namespace powerfit::optimize
