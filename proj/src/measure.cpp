#include "cheeselab/measure.hpp"

#include <algorithm>
#include <cmath>

#include "cheeselab/util.hpp"

namespace cheeselab::measure {

namespace {

constexpr Complex kOne{1.0, 0.0};

long oscillation_panels(const geom::BoundaryArc& arc, double osc_rho) {
  const double len = arc.length();
  long base = std::max<long>(4, static_cast<long>(std::ceil(len / 0.5)));
  if (osc_rho > 0.0) {
    // The weight's exponent has derivative 2 rho / (z-1)^2; seed panels so a
    // panel sees a bounded phase change.
    const double d1 = std::abs(Complex{1.0, 0.0} - arc.circle.center);
    const double s_min = std::max(std::abs(d1 - arc.circle.radius), 1e-3);
    const double rate = 1.0 + 2.0 * osc_rho / (s_min * s_min);
    base = std::max(base, static_cast<long>(std::ceil(len * rate / geom::kTau)));
  }
  return std::min<long>(base, 1L << 16);
}

}  // namespace

QuadratureResult integrate_arc(const fn::Fn& f, const geom::BoundaryArc& arc, double tol,
                               double osc_rho) {
  const Complex center = arc.circle.center;
  const double radius = arc.circle.radius;
  auto integrand = [&](double theta) {
    const Complex e{std::cos(theta), std::sin(theta)};
    const Complex z = center + radius * e;
    return fn::eval(f, z) * Complex(0.0, 1.0) * radius * e;
  };

  quad::Options opt;
  // tol is an error budget per unit of arc length; the parameter is the
  // angle, so convert by the radius.
  opt.tol_per_unit = tol * std::max(radius, 1e-300);
  opt.initial_panels = oscillation_panels(arc, osc_rho);

  auto result = quad::integrate(integrand, arc.interval.start, arc.interval.end(), opt);
  if (arc.orientation < 0) result.value = -result.value;
  return result;
}

QuadratureResult contour_integral(const fn::Fn& f, const geom::Contour& c, double tol,
                                  double osc_rho) {
  // boundary_arcs already emits arcs in canonical order; keep that order for
  // bit-stable accumulation.
  util::KahanSum sum;
  QuadratureResult total;
  for (const auto& arc : c.arcs) {
    auto r = integrate_arc(f, arc, tol, osc_rho);
    sum.add(r.value);
    total.error_estimate += r.error_estimate;
    total.panels += r.panels;
  }
  total.value = sum.value();
  return total;
}

WeightedBoundaryMeasure make_measure(geom::Contour contour, double rho2, double tol,
                                     uint64_t seed) {
  if (rho2 < 0.0) throw std::invalid_argument("measure weight requires rho2 >= 0");
  WeightedBoundaryMeasure mu;
  mu.contour = std::move(contour);
  mu.rho2 = rho2;
  mu.tolerance = tol;

  const geom::Region& region = mu.contour.region;

  // interior probes: winding must be 1
  int interior_found = 0;
  for (uint64_t i = 0; i < 4096 && interior_found < 3; ++i) {
    auto [u, v] = util::kronecker_2d(i, seed);
    const double r = region.outer.radius * std::sqrt(u);
    const double t = geom::kTau * v;
    const Complex z = region.outer.center + r * Complex(std::cos(t), std::sin(t));
    if (!geom::point_in_region(region, z)) continue;
    if (geom::distance_to_contour(mu.contour, z) < 1e-6) continue;
    ++interior_found;
    if (geom::winding_number(mu.contour, z, 1e-9, tol) != 1) {
      throw CertificationError("contour winds " + std::to_string(geom::winding_number(
                                   mu.contour, z, 1e-9, tol)) +
                               " times about an interior point");
    }
  }
  if (interior_found == 0) {
    throw CertificationError("no interior probe found; region appears empty");
  }

  // hole probes: winding 0 (hole centers inside the outer disc)
  for (const auto& h : region.holes) {
    if (std::abs(h.center - region.outer.center) >= region.outer.radius) continue;
    if (geom::distance_to_contour(mu.contour, h.center) < 1e-9) continue;
    if (geom::winding_number(mu.contour, h.center, 1e-9, tol) != 0) {
      throw CertificationError("contour winds about a hole interior");
    }
  }

  // exterior probe
  const Complex outside = region.outer.center + Complex(region.outer.radius * 1.5 + 1.0, 0.0);
  if (geom::winding_number(mu.contour, outside, 1e-9, tol) != 0) {
    throw CertificationError("contour winds about an exterior point");
  }

  mu.certified = true;
  return mu;
}

QuadratureResult mu_apply(const WeightedBoundaryMeasure& mu, const fn::Fn& f) {
  if (!mu.certified) throw CertificationError("measure used before winding certification");
  return contour_integral(f * fn::measure_weight(mu.rho2), mu.contour, mu.tolerance, mu.rho2);
}

double total_variation(const WeightedBoundaryMeasure& mu) {
  if (!mu.certified) throw CertificationError("measure used before winding certification");
  const fn::Fn weight = fn::measure_weight(mu.rho2);
  util::KahanSum sum;
  for (const auto& arc : mu.contour.arcs) {
    const Complex center = arc.circle.center;
    const double radius = arc.circle.radius;
    auto integrand = [&](double theta) {
      const Complex z = center + radius * Complex(std::cos(theta), std::sin(theta));
      return Complex(std::abs(fn::eval(weight, z)) * radius, 0.0);
    };
    quad::Options opt;
    opt.tol_per_unit = mu.tolerance * std::max(radius, 1e-300);
    opt.initial_panels = oscillation_panels(arc, mu.rho2);
    sum.add(quad::integrate(integrand, arc.interval.start, arc.interval.end(), opt).value);
  }
  return sum.value().real();
}

geom::Contour truncated_contour(const cheese::CheesePlan& plan, int n) {
  const geom::Region region = plan.truncated_region(n);
  return geom::boundary_arcs(region.outer, region.holes);
}

bool poles_off_region(const fn::RationalFunction& g, const cheese::CheesePlan& plan, int n) {
  return fn::poles_off_region(g, plan.truncated_outer(n), plan.truncated_holes(n));
}

TestOutcome annihilation_test(const cheese::CheesePlan& plan, int n, double rho2,
                              const fn::RationalFunction& g, double tol) {
  if (!poles_off_region(g, plan, n)) {
    throw ConfigurationError("rational test function has a pole on the truncated region");
  }
  auto mu = make_measure(truncated_contour(plan, n), rho2, tol);
  const fn::Fn integrand = fn::singular_generator(rho2) * fn::rational(g);

  auto r = mu_apply(mu, integrand);
  const double tv = total_variation(mu);

  // sup |F_{rho2} g| over the contour arcs
  double sup = 0.0;
  for (const auto& arc : mu.contour.arcs) {
    const long steps = 64;
    for (long k = 0; k <= steps; ++k) {
      const double theta =
          arc.interval.start + arc.interval.span * static_cast<double>(k) / static_cast<double>(steps);
      sup = std::max(sup, std::abs(fn::eval(integrand, arc.point_at(theta))));
    }
  }

  TestOutcome out;
  out.observed = r.value;
  out.expected = {0.0, 0.0};
  out.quad_error = r.error_estimate;
  out.residual = std::abs(r.value);
  out.threshold = tol * (1.0 + tv * sup);
  out.pass = out.residual < out.threshold;
  out.detail = "tv=" + util::fmt_g17(tv) + " sup=" + util::fmt_g17(sup);
  return out;
}

TestOutcome separation_test(const cheese::CheesePlan& plan, int n, double rho1, double rho2,
                            double tol) {
  if (!(rho1 >= 0.0) || !(rho1 < rho2)) {
    throw ConfigurationError("separation requires 0 <= rho1 < rho2");
  }
  auto mu = make_measure(truncated_contour(plan, n), rho2, tol);
  if (geom::winding_number(mu.contour, kOne, 1e-9, tol) != 1) {
    throw CertificationError("the point 1 is not interior to the truncated region");
  }

  auto r = mu_apply(mu, fn::singular_generator(rho1));
  const double c = rho1 - rho2;
  const Complex expected = Complex(0.0, 2.0 * geom::kTau) * c * c * std::exp(c);

  TestOutcome out;
  out.observed = r.value;
  out.expected = expected;
  out.quad_error = r.error_estimate;
  out.residual = std::abs(r.value - expected) / std::abs(expected);
  out.threshold = tol;
  out.pass = out.residual < out.threshold;
  return out;
}

Complex residue_series_oracle(double c) {
  // exp(c) summed term by term until the partial sum stagnates
  double exp_c = 1.0;
  double term = 1.0;
  for (int k = 1; k < 512; ++k) {
    term *= c / static_cast<double>(k);
    const double next = exp_c + term;
    if (next == exp_c) break;
    exp_c = next;
  }
  const double two_c = 2.0 * c;
  return Complex(exp_c * two_c * two_c / 2.0, 0.0);
}

DeformationOutcome deformation_check(const cheese::CheesePlan& plan,
                                     const std::vector<int>& truncations, double rho1, double rho2,
                                     double tol) {
  if (truncations.empty()) throw ConfigurationError("no truncations given");
  DeformationOutcome out;
  for (int n : truncations) {
    auto r = separation_test(plan, n, rho1, rho2, tol);
    out.values.emplace_back(n, r.observed);
  }
  double spread = 0.0;
  for (size_t i = 0; i < out.values.size(); ++i) {
    for (size_t j = i + 1; j < out.values.size(); ++j) {
      const double scale =
          std::max(std::abs(out.values[i].second), std::abs(out.values[j].second));
      if (scale > 0.0) {
        spread = std::max(spread, std::abs(out.values[i].second - out.values[j].second) / scale);
      }
    }
  }
  out.max_relative_spread = spread;
  out.pass = spread < tol;
  return out;
}

}  // namespace cheeselab::measure
