#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cheeselab/geometry.hpp"

namespace cheeselab::fn {

using Complex = std::complex<double>;

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// scale * prod (z - zero_i)^m_i / prod (z - pole_j)^m_j
struct RationalFunction {
  std::vector<std::pair<Complex, int>> zeros;
  std::vector<std::pair<Complex, int>> poles;
  Complex scale{1.0, 0.0};
};

// (z - lambda) exp(rho (z + lambda)/(z - lambda)); value 0 at z = lambda by
// continuous extension (|F| <= |z - lambda| on the closed unit disc).
struct SingularGenerator {
  double rho = 0.0;
  Complex lambda{1.0, 0.0};
};

// exp(coeff (z + lambda)/(z - lambda)); the boundary-measure density is the
// case coeff = -rho2, lambda = 1. Evaluation at z = lambda is an error
// (essential singularity).
struct CayleyExp {
  Complex coeff{0.0, 0.0};
  Complex lambda{1.0, 0.0};
};

struct Expr;
using Fn = std::shared_ptr<const Expr>;

struct Constant {
  Complex value;
};
struct Identity {};
struct Sum {
  Fn a, b;
};
struct Product {
  Fn a, b;
};
struct Scaled {
  Complex factor;
  Fn inner;
};

struct Expr {
  std::variant<Constant, Identity, RationalFunction, SingularGenerator, CayleyExp, Sum, Product,
               Scaled>
      node;
};

Fn constant(Complex c);
Fn identity();
Fn rational(RationalFunction r);
Fn singular_generator(double rho, Complex lambda = Complex(1.0, 0.0));
Fn cayley_exp(Complex coeff, Complex lambda = Complex(1.0, 0.0));
Fn measure_weight(double rho);  // requires rho >= 0
Fn sum(Fn a, Fn b);
Fn product(Fn a, Fn b);
Fn scaled(Complex factor, Fn inner);

inline Fn operator+(Fn a, Fn b) { return sum(std::move(a), std::move(b)); }
inline Fn operator*(Fn a, Fn b) { return product(std::move(a), std::move(b)); }
inline Fn operator*(Complex c, Fn f) { return scaled(c, std::move(f)); }

Complex eval(const Fn& f, Complex z);

// Collected pole locations of every rational factor in the expression.
std::vector<Complex> rational_poles(const Fn& f);

// True iff every pole lies strictly inside one of the open holes or strictly
// outside the closed outer disc.
bool poles_off_region(const RationalFunction& g, const geom::Disc& outer,
                      const std::vector<geom::Disc>& holes);

// Piecewise combination: phi*h + (1-phi)*f on the region N, plain f off N.
Complex glue(const Fn& phi, const Fn& h, const Fn& f, const geom::Region& n_region, Complex z);

// Max modulus over a deterministic low-discrepancy sample of the region
// interior plus its boundary arcs.
double sup_norm_estimate(const Fn& f, const geom::Region& region, long samples, uint64_t seed);

// 1 - max |(1+z)/2| over region samples with |z - 1| >= neighborhood_radius.
double peak_margin(const geom::Region& region, double neighborhood_radius, long samples,
                   uint64_t seed);

// Deterministic samples of the region (interior + boundary), shared by the
// sup-norm estimator and the test suites.
std::vector<Complex> sample_region(const geom::Region& region, long samples, uint64_t seed);

}  // namespace cheeselab::fn
