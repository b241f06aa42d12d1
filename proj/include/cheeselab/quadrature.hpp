#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheeselab/util.hpp"

namespace cheeselab::quad {

using Complex = std::complex<double>;

struct Result {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  long panels = 0;
};

struct Options {
  double tol_per_unit = 1e-10;  // absolute error budget per unit of parameter length
  long initial_panels = 4;
  long panel_cap = 1 << 20;
  // conditioning floor: a panel whose rule difference is below rel_floor
  // times its own L1 magnitude is at the integrand's evaluation-noise level
  // (points constructed as center + R e^{i theta} feed factors like
  // 1/(z - pole) with relative noise eps |center| / R) and cannot be
  // improved by subdivision
  double rel_floor = 1e-11;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double a, double b, double err, long cap)
      : std::runtime_error("quadrature did not converge within " + std::to_string(cap) +
                           " panels; worst panel [" + util::fmt_g17(a) + ", " + util::fmt_g17(b) +
                           "] error " + util::fmt_g17(err)),
        worst_a(a),
        worst_b(b),
        worst_error(err) {}
  double worst_a, worst_b, worst_error;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
inline constexpr double kWgk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
inline constexpr double kWg[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

template <class F>
void gk15(F&& f, double a, double b, Complex& value, double& err, double& magnitude) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  Complex f_mid = f(mid);
  Complex k15 = kWgk[7] * f_mid;
  Complex g7 = kWg[3] * f_mid;
  double mag = kWgk[7] * std::abs(f_mid);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    Complex lo = f(mid - dx);
    Complex hi = f(mid + dx);
    Complex pair = lo + hi;
    k15 += kWgk[i] * pair;
    mag += kWgk[i] * (std::abs(lo) + std::abs(hi));
    if (i % 2 == 1) g7 += kWg[i / 2] * pair;
  }
  value = half * k15;
  err = std::abs(half * (k15 - g7));
  magnitude = half * mag;
}

}  // namespace detail

// Adaptive panel-bisection integration of a complex-valued function of a real
// parameter. A panel is accepted when its high/low rule difference is below
// tol_per_unit times the panel length, so the total error budget scales with
// the parameter interval.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  Result out;
  if (!(b > a)) return out;

  struct Panel {
    double a, b;
  };
  std::vector<Panel> stack;
  const long seed_panels = std::clamp<long>(opt.initial_panels, 1, 1L << 16);
  stack.reserve(static_cast<size_t>(seed_panels) + 64);
  const double step = (b - a) / static_cast<double>(seed_panels);
  for (long i = seed_panels - 1; i >= 0; --i) {
    stack.push_back({a + step * static_cast<double>(i), (i + 1 == seed_panels) ? b : a + step * static_cast<double>(i + 1)});
  }

  util::KahanSum sum;
  double err_total = 0.0;
  long processed = 0;
  double worst_a = a, worst_b = b, worst_err = 0.0;

  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    ++processed;

    Complex v;
    double e, mag;
    detail::gk15(f, p.a, p.b, v, e, mag);

    const double len = p.b - p.a;
    if (e <= opt.tol_per_unit * len + opt.rel_floor * mag || len < 1e-15 * (b - a)) {
      sum.add(v);
      err_total += e;
      continue;
    }
    if (e > worst_err) {
      worst_err = e;
      worst_a = p.a;
      worst_b = p.b;
    }
    if (processed + static_cast<long>(stack.size()) + 2 > opt.panel_cap) {
      throw ConvergenceError(worst_a, worst_b, worst_err, opt.panel_cap);
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b});
    stack.push_back({p.a, mid});
  }

  out.value = sum.value();
  out.error_estimate = err_total;
  out.panels = processed;
  return out;
}

}  // namespace cheeselab::quad
