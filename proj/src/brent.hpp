#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace cladecheck::detail {

struct BrentResult {
  double x;
  double value;
};

// Brent's method on [lo, hi]: golden-section steps, replaced by a parabola
// through the three best points whenever that step is short enough and lands
// inside the bracket. Maximizes f. Stops once the bracket around the best
// point is within roughly 4 * (tol * |x| + tol / 4).
template <class F>
BrentResult brent_maximize(const F& f, double lo, double hi, double tol, int max_evals = 200) {
  constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
  tol = std::max(tol, std::sqrt(std::numeric_limits<double>::epsilon()));
  // Work on g = -f so the usual minimization bookkeeping applies.
  auto g = [&f](double t) { return -f(t); };

  double x = hi, w = hi, v = hi;  // best, second best, previous second best
  double gx = g(x), gw = gx, gv = gx;
  double step = 0.0;       // last move
  double step_prev = 0.0;  // move before that
  for (int evals = 1; evals < max_evals; ++evals) {
    const double mid = 0.5 * (lo + hi);
    const double tol1 = tol * std::abs(x) + tol / 4;
    const double tol2 = 2 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (hi - lo)) break;

    bool parabolic = false;
    if (std::abs(step_prev) > tol1) {
      const double r = (x - w) * (gx - gv);
      double q = (x - v) * (gx - gw);
      double p = (x - v) * q - (x - w) * r;
      q = 2 * (q - r);
      if (q > 0) p = -p;
      q = std::abs(q);
      const double older = step_prev;
      step_prev = step;
      // accept only a step shorter than half the one before last, inside the bracket
      if (std::abs(p) < std::abs(q * older / 2) && p > q * (lo - x) && p < q * (hi - x)) {
        step = p / q;
        const double u = x + step;
        if (u - lo < tol2 || hi - u < tol2) step = mid > x ? tol1 : -tol1;
        parabolic = true;
      }
    }
    if (!parabolic) {
      step_prev = x >= mid ? lo - x : hi - x;
      step = kGolden * step_prev;
    }

    const double u = std::abs(step) >= tol1 ? x + step : x + (step > 0 ? tol1 : -tol1);
    const double gu = g(u);
    if (gu <= gx) {
      (u >= x ? lo : hi) = x;
      v = w;
      gv = gw;
      w = x;
      gw = gx;
      x = u;
      gx = gu;
    } else {
      (u < x ? lo : hi) = u;
      if (gu <= gw || w == x) {
        v = w;
        gv = gw;
        w = u;
        gw = gu;
      } else if (gu <= gv || v == x || v == w) {
        v = u;
        gv = gu;
      }
    }
  }
  return {x, -gx};
}

}  // namespace cladecheck::detail
