#pragma once

// Adaptive Gauss-Kronrod (G7, K15) quadrature on finite intervals. The
// worst-error interval is bisected until the global error estimate meets the
// requested tolerance or the subdivision budget runs out.

#include <cmath>
#include <queue>
#include <vector>

#include "hcn/specfun.hpp"

namespace hcn {

struct QuadratureSpec {
  double relative_tolerance = 1e-8;
  double absolute_tolerance = 1e-12;
  int max_subdivisions = 400;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

namespace detail {

// K15 abscissae (nonnegative half) and weights, Gauss-7 weights on the odd
// Kronrod nodes.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// One G7/K15 evaluation with the QUADPACK-style sharpened error estimate.
template <class F>
Panel gk15(F&& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  double fv[15];
  const double fc = f(center);
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }

  double resk = kWgk[7] * fc;
  double resabs = std::fabs(resk);
  double resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    resk += kWgk[j] * (fv[j] + fv[14 - j]);
    resabs += kWgk[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
    if (j % 2 == 1) {
      resg += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
  }

  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
  }
  resasc *= half;
  resabs *= half;

  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }

  (void)resabs;
  return Panel{lo, hi, resk * half, err};
}

}  // namespace detail

template <class F>
QuadratureResult integrate(F&& f, double lo, double hi,
                           const QuadratureSpec& spec = {}) {
  if (lo == hi) {
    return QuadratureResult{0.0, 0.0, 0};
  }

  std::priority_queue<detail::Panel> panels;
  detail::Panel first = detail::gk15(f, lo, hi);
  double total = first.value;
  double total_err = first.error;
  panels.push(first);

  int splits = 0;
  while (total_err > std::max(spec.absolute_tolerance,
                              spec.relative_tolerance * std::fabs(total))) {
    if (splits >= spec.max_subdivisions || panels.empty()) {
      throw NumericalError("integrate: tolerance not reached after " +
                               std::to_string(splits) + " subdivisions",
                           total_err);
    }
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      // interval no longer splittable in double precision
      throw NumericalError("integrate: interval exhausted at machine precision",
                           total_err);
    }
    detail::Panel left = detail::gk15(f, worst.lo, mid);
    detail::Panel right = detail::gk15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++splits;
  }

  return QuadratureResult{total, total_err, splits};
}

}  // namespace hcn
