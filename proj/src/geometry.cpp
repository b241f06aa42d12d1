#include "cheeselab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "cheeselab/quadrature.hpp"

namespace cheeselab::geom {

namespace {

// Sub-resolution arcs are the "isolated points" of a decomposition and are
// dropped.
constexpr double kDegenerateSpan = 1e-12;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTau);
  if (t < 0) t += kTau;
  // fmod can return kTau after the correction when theta is a tiny negative
  if (t >= kTau) t -= kTau;
  return t;
}

struct Segment {
  double a, b;  // 0 <= a < b <= tau after normalization
};

// Union of angular intervals as plain segments of [0, tau], wrap-around spans
// split at 0.
std::vector<Segment> to_segments(const std::vector<AngularInterval>& intervals) {
  std::vector<Segment> segs;
  for (const auto& iv : intervals) {
    double a = iv.start;
    double b = iv.end();
    if (b <= kTau) {
      segs.push_back({a, b});
    } else {
      segs.push_back({a, kTau});
      segs.push_back({0.0, b - kTau});
    }
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  });
  std::vector<Segment> merged;
  for (const auto& s : segs) {
    if (!merged.empty() && s.a <= merged.back().b + kDegenerateSpan) {
      merged.back().b = std::max(merged.back().b, s.b);
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

// Complement of a segment union within [0, tau].
std::vector<Segment> complement_segments(const std::vector<Segment>& covered) {
  std::vector<Segment> kept;
  double cursor = 0.0;
  for (const auto& s : covered) {
    if (s.a > cursor + kDegenerateSpan) kept.push_back({cursor, s.a});
    cursor = std::max(cursor, s.b);
  }
  if (cursor < kTau - kDegenerateSpan) kept.push_back({cursor, kTau});
  return kept;
}

}  // namespace

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

AngularInterval::AngularInterval(double start_angle, double angular_span)
    : start(wrap_angle(start_angle)), span(angular_span) {
  if (!(angular_span > 0.0) || !(angular_span <= kTau + 1e-15)) {
    throw std::invalid_argument("angular span must lie in (0, tau]");
  }
  span = std::min(angular_span, kTau);
}

AngularInterval AngularInterval::from_endpoints(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("interval endpoints must satisfy b > a");
  return AngularInterval(a, b - a);
}

bool AngularInterval::contains(double theta) const {
  double t = wrap_angle(theta - start);
  return t <= span;
}

double Contour::total_length() const {
  double len = 0.0;
  for (const auto& a : arcs) len += a.length();
  return len;
}

double distance_to_point(const Disc& d, Complex p) {
  return std::max(std::abs(d.center - p) - d.radius, 0.0);
}

std::optional<std::pair<double, double>> circle_intersection_angles(const Disc& a, const Disc& b) {
  const double d = std::abs(b.center - a.center);
  const double scale = std::max(a.radius, b.radius);
  const double tol = kTangencyTol * scale;

  if (d >= a.radius + b.radius - tol) return std::nullopt;           // disjoint or ext. tangent
  if (d <= std::abs(a.radius - b.radius) + tol) return std::nullopt;  // nested, concentric, int. tangent

  const double cos_alpha =
      (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d * a.radius);
  const double alpha = std::acos(std::clamp(cos_alpha, -1.0, 1.0));
  const double phi = std::arg(b.center - a.center);
  return std::make_pair(phi - alpha, phi + alpha);
}

CoveredInterval covered_interval(const Disc& a, const Disc& b) {
  const double d = std::abs(b.center - a.center);
  const double scale = std::max(a.radius, b.radius);
  const double tol = kTangencyTol * scale;

  if (d >= a.radius + b.radius - tol) return {Coverage::None, std::nullopt};
  if (d <= b.radius - a.radius + tol) return {Coverage::Full, std::nullopt};
  if (d <= a.radius - b.radius + tol) return {Coverage::None, std::nullopt};

  auto angles = circle_intersection_angles(a, b);
  if (!angles) return {Coverage::None, std::nullopt};
  double lo = angles->first, hi = angles->second;
  if (hi - lo <= kDegenerateSpan) return {Coverage::None, std::nullopt};
  return {Coverage::Partial, AngularInterval::from_endpoints(lo, hi)};
}

Contour boundary_arcs(const Disc& outer, const std::vector<Disc>& holes) {
  // Coincident circles make the boundary ambiguous.
  std::vector<Disc> circles;
  circles.push_back(outer);
  circles.insert(circles.end(), holes.begin(), holes.end());
  for (size_t i = 0; i < circles.size(); ++i) {
    for (size_t j = i + 1; j < circles.size(); ++j) {
      const double scale = std::max(circles[i].radius, circles[j].radius);
      if (std::abs(circles[i].center - circles[j].center) < kTangencyTol * scale &&
          std::abs(circles[i].radius - circles[j].radius) < kTangencyTol * scale) {
        throw AmbiguousBoundaryError("coincident circles in region specification");
      }
    }
  }

  Contour contour;
  contour.region = Region{outer, holes};

  // Outer circle: keep what no hole covers.
  {
    std::vector<AngularInterval> covered;
    bool fully_covered = false;
    for (const auto& h : holes) {
      auto c = covered_interval(outer, h);
      if (c.kind == Coverage::Full) {
        fully_covered = true;
        break;
      }
      if (c.kind == Coverage::Partial) covered.push_back(*c.interval);
    }
    if (!fully_covered) {
      for (const auto& seg : complement_segments(to_segments(covered))) {
        if (seg.b - seg.a > kDegenerateSpan) {
          contour.arcs.push_back({outer, AngularInterval::from_endpoints(seg.a, seg.b), +1});
        }
      }
    }
  }

  // Hole circles: keep what lies inside the closed outer disc and outside
  // every other open hole.
  for (size_t i = 0; i < holes.size(); ++i) {
    const Disc& hi = holes[i];

    auto inside_outer = covered_interval(hi, outer);
    if (inside_outer.kind == Coverage::None) continue;  // hole misses the region

    std::vector<Segment> candidate;
    if (inside_outer.kind == Coverage::Full) {
      candidate.push_back({0.0, kTau});
    } else {
      candidate = to_segments({*inside_outer.interval});
    }

    std::vector<AngularInterval> covered;
    bool swallowed = false;
    for (size_t j = 0; j < holes.size(); ++j) {
      if (j == i) continue;
      auto c = covered_interval(hi, holes[j]);
      if (c.kind == Coverage::Full) {
        swallowed = true;
        break;
      }
      if (c.kind == Coverage::Partial) covered.push_back(*c.interval);
    }
    if (swallowed) continue;

    const auto covered_segs = to_segments(covered);
    // candidate minus covered, all as plain segments of [0, tau]
    for (const auto& cand : candidate) {
      double cursor = cand.a;
      for (const auto& cov : covered_segs) {
        if (cov.b <= cursor) continue;
        if (cov.a >= cand.b) break;
        if (cov.a > cursor + kDegenerateSpan) {
          contour.arcs.push_back({hi, AngularInterval::from_endpoints(cursor, cov.a), -1});
        }
        cursor = std::max(cursor, cov.b);
        if (cursor >= cand.b) break;
      }
      if (cand.b > cursor + kDegenerateSpan) {
        contour.arcs.push_back({hi, AngularInterval::from_endpoints(cursor, cand.b), -1});
      }
    }
  }

  // Canonical arc order: anchored to circle identity then start angle.
  std::sort(contour.arcs.begin(), contour.arcs.end(), [](const BoundaryArc& x, const BoundaryArc& y) {
    if (x.circle.center.real() != y.circle.center.real())
      return x.circle.center.real() < y.circle.center.real();
    if (x.circle.center.imag() != y.circle.center.imag())
      return x.circle.center.imag() < y.circle.center.imag();
    if (x.circle.radius != y.circle.radius) return x.circle.radius < y.circle.radius;
    return x.interval.start < y.interval.start;
  });
  return contour;
}

double arc_length(const BoundaryArc& a) { return a.length(); }

bool point_in_region(const Disc& outer, const std::vector<Disc>& holes, Complex z) {
  if (std::abs(z - outer.center) > outer.radius) return false;
  for (const auto& h : holes) {
    if (std::abs(z - h.center) < h.radius) return false;
  }
  return true;
}

bool point_in_region(const Region& region, Complex z) {
  return point_in_region(region.outer, region.holes, z);
}

double distance_to_contour(const Contour& c, Complex w) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& arc : c.arcs) {
    const Complex rel = w - arc.circle.center;
    const double radial = std::abs(std::abs(rel) - arc.circle.radius);
    if (arc.interval.contains(std::arg(rel))) {
      best = std::min(best, radial);
    } else {
      best = std::min(best, std::abs(w - arc.point_at(arc.interval.start)));
      best = std::min(best, std::abs(w - arc.point_at(arc.interval.end())));
    }
  }
  return best;
}

int winding_number(const Contour& c, Complex w, double tol, double quad_tol) {
  if (distance_to_contour(c, w) <= tol) {
    throw BoundaryPointError("winding probe lies on the contour (within tol)");
  }
  util::KahanSum sum;
  quad::Options opt;
  opt.tol_per_unit = quad_tol;
  for (const auto& arc : c.arcs) {
    const Complex center = arc.circle.center;
    const double radius = arc.circle.radius;
    auto f = [&](double theta) {
      const Complex e{std::cos(theta), std::sin(theta)};
      const Complex z = center + radius * e;
      return Complex(0.0, 1.0) * radius * e / (z - w);
    };
    opt.initial_panels = std::max<long>(4, static_cast<long>(arc.interval.span / 0.5) + 1);
    auto r = quad::integrate(f, arc.interval.start, arc.interval.end(), opt);
    sum.add(static_cast<double>(arc.orientation) * r.value);
  }
  const Complex total = sum.value() / Complex(0.0, kTau);
  const double rounded = std::round(total.real());
  const double residual = std::hypot(total.real() - rounded, total.imag());
  if (residual > 0.25) {
    throw WindingResidualError("winding integral residual " + util::fmt_g17(residual) +
                               " exceeds 0.25 at probe (" + util::fmt_g17(w.real()) + ", " +
                               util::fmt_g17(w.imag()) + ")");
  }
  return static_cast<int>(rounded);
}

}  // namespace cheeselab::geom
