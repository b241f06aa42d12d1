#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheeselab/cheese.hpp"
#include "cheeselab/function.hpp"
#include "cheeselab/geometry.hpp"
#include "cheeselab/quadrature.hpp"

namespace cheeselab::measure {

using Complex = std::complex<double>;
using QuadratureResult = quad::Result;

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// f |-> oint_{dK_n} f(z) exp(-rho2 (z+1)/(z-1)) dz, realized by adaptive
// quadrature over the winding-certified contour.
struct WeightedBoundaryMeasure {
  geom::Contour contour;
  double rho2 = 0.0;
  double tolerance = 1e-10;
  bool certified = false;
};

// Certifies winding numbers (1 on interior probes, 0 on hole and exterior
// probes) before the measure is used.
WeightedBoundaryMeasure make_measure(geom::Contour contour, double rho2, double tol,
                                     uint64_t seed = 0x5eed);

// Integral of f over one oriented arc; the quadrature's initial panel count
// is seeded by the oscillation bound 2 rho R / s^2 of the exponential weight
// when osc_rho > 0 (s = arc distance to the point 1).
QuadratureResult integrate_arc(const fn::Fn& f, const geom::BoundaryArc& arc, double tol,
                               double osc_rho = 0.0);

// Orientation-signed sum of integrate_arc over all arcs in canonical order,
// accumulated with compensated summation.
QuadratureResult contour_integral(const fn::Fn& f, const geom::Contour& c, double tol,
                                  double osc_rho = 0.0);

QuadratureResult mu_apply(const WeightedBoundaryMeasure& mu, const fn::Fn& f);

// oint |weight| |dz|
double total_variation(const WeightedBoundaryMeasure& mu);

struct TestOutcome {
  bool pass = false;
  Complex observed{0, 0};
  Complex expected{0, 0};
  double residual = 0.0;   // the quantity compared against threshold
  double threshold = 0.0;
  double quad_error = 0.0;
  std::string detail;
};

// | mu_n(F_{rho2} g) | must vanish (Cauchy): pass iff the modulus is below
// tol * (1 + TV * sup |F_{rho2} g|). Rational g must have poles off K_n.
TestOutcome annihilation_test(const cheese::CheesePlan& plan, int n, double rho2,
                              const fn::RationalFunction& g, double tol);

// mu_n(F_{rho1}) against 4 pi i (rho1-rho2)^2 exp(rho1-rho2); requires
// 0 <= rho1 < rho2 and a certified winding of 1 about the point 1.
TestOutcome separation_test(const cheese::CheesePlan& plan, int n, double rho1, double rho2,
                            double tol);

// Residue at 1 of (z-1) exp(c (z+1)/(z-1)) from the Laurent expansion
// exp(c) * sum_k (2c)^k / (k! (z-1)^k): the 1/(z-1) coefficient after
// multiplying by (z-1) is exp(c) (2c)^2/2, with exp(c) summed to stagnation.
Complex residue_series_oracle(double c);

struct DeformationOutcome {
  bool pass = false;
  std::vector<std::pair<int, Complex>> values;
  double max_relative_spread = 0.0;
};

// Separation values across truncations must agree pairwise within tol.
DeformationOutcome deformation_check(const cheese::CheesePlan& plan,
                                     const std::vector<int>& truncations, double rho1, double rho2,
                                     double tol);

// Oriented boundary of K_n = closed disc(0, 1 + 1/n) minus the first n holes.
geom::Contour truncated_contour(const cheese::CheesePlan& plan, int n);

bool poles_off_region(const fn::RationalFunction& g, const cheese::CheesePlan& plan, int n);

}  // namespace cheeselab::measure
