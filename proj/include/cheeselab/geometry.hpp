#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cheeselab::geom {

using Complex = std::complex<double>;

inline constexpr double kTau = 6.28318530717958647692528676656;

bool is_finite(Complex z);

// Relative tolerance below which a circle pair is treated as tangent and
// therefore non-intersecting (tangency contributes isolated points only).
inline constexpr double kTangencyTol = 1e-12;

struct Disc {
  Complex center;
  double radius;

  Disc(Complex c, double r) : center(c), radius(r) {
    if (!is_finite(c) || !(r > 0.0)) {
      throw std::invalid_argument("disc requires finite center and radius > 0");
    }
  }
};

// Counterclockwise angular span: start canonical in [0, tau), 0 < span <= tau.
struct AngularInterval {
  double start;
  double span;

  AngularInterval(double start_angle, double angular_span);
  static AngularInterval from_endpoints(double a, double b);  // b > a
  double end() const { return start + span; }
  double midpoint() const { return start + 0.5 * span; }
  bool contains(double theta) const;
};

struct BoundaryArc {
  Disc circle;
  AngularInterval interval;
  int orientation;  // +1 outer boundary (ccw), -1 hole boundary (cw)

  Complex point_at(double theta) const {
    return circle.center + circle.radius * Complex(std::cos(theta), std::sin(theta));
  }
  double length() const { return circle.radius * interval.span; }
};

struct Region {
  Disc outer{Complex{0, 0}, 1.0};
  std::vector<Disc> holes;
};

// Oriented boundary of "closed outer disc minus open holes". Winds once
// around region-interior points, zero around hole interiors and the exterior.
struct Contour {
  std::vector<BoundaryArc> arcs;
  Region region;

  double total_length() const;
};

// Distance from the closed disc to a point: max(|center - p| - radius, 0).
double distance_to_point(const Disc& d, Complex p);

// Angles theta on circle a with |a.center + a.radius e^{i theta} - b.center| =
// b.radius, returned as (phi - alpha, phi + alpha) where phi points from a's
// center toward b's. Absent for disjoint, nested, concentric, and (by the
// tolerance rule) tangent pairs.
std::optional<std::pair<double, double>> circle_intersection_angles(const Disc& a, const Disc& b);

enum class Coverage { None, Partial, Full };

struct CoveredInterval {
  Coverage kind = Coverage::None;
  std::optional<AngularInterval> interval;  // set iff kind == Partial
};

// Angular interval of circle a strictly inside the open disc b.
CoveredInterval covered_interval(const Disc& a, const Disc& b);

class AmbiguousBoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Contour boundary_arcs(const Disc& outer, const std::vector<Disc>& holes);

double arc_length(const BoundaryArc& a);

bool point_in_region(const Disc& outer, const std::vector<Disc>& holes, Complex z);
bool point_in_region(const Region& region, Complex z);

// Distance from a point to the nearest arc of the contour.
double distance_to_contour(const Contour& c, Complex w);

class BoundaryPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WindingResidualError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nearest integer to (1/2 pi i) oint dz/(z - w), by adaptive quadrature over
// the arcs. Throws BoundaryPointError when w is within tol of an arc and
// WindingResidualError when the integral strays more than 0.25 from an
// integer.
int winding_number(const Contour& c, Complex w, double tol = 1e-9, double quad_tol = 1e-10);

}  // namespace cheeselab::geom
