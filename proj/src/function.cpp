#include "cheeselab/function.hpp"

#include <algorithm>
#include <cmath>

#include "cheeselab/util.hpp"

namespace cheeselab::fn {

namespace {

Fn make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

bool is_const(const Fn& f, Complex v) {
  const auto* c = std::get_if<Constant>(&f->node);
  return c && c->value == v;
}

Complex pow_int(Complex base, int exp) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

Fn constant(Complex c) { return make(Expr{Constant{c}}); }

Fn identity() { return make(Expr{Identity{}}); }

Fn rational(RationalFunction r) {
  for (const auto& [z, mz] : r.zeros) {
    for (const auto& [p, mp] : r.poles) {
      if (z == p) throw std::invalid_argument("rational function has coincident zero and pole");
    }
  }
  return make(Expr{std::move(r)});
}

Fn singular_generator(double rho, Complex lambda) {
  if (rho < 0.0) throw std::invalid_argument("singular generator requires rho >= 0");
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) {
    throw std::invalid_argument("singular generator base point must lie on the unit circle");
  }
  return make(Expr{SingularGenerator{rho, lambda}});
}

Fn cayley_exp(Complex coeff, Complex lambda) { return make(Expr{CayleyExp{coeff, lambda}}); }

Fn measure_weight(double rho) {
  if (rho < 0.0) throw std::invalid_argument("measure weight requires rho >= 0");
  return cayley_exp(Complex(-rho, 0.0), Complex(1.0, 0.0));
}

Fn sum(Fn a, Fn b) {
  if (is_const(a, Complex{0, 0})) return b;
  if (is_const(b, Complex{0, 0})) return a;
  const auto* ca = std::get_if<Constant>(&a->node);
  const auto* cb = std::get_if<Constant>(&b->node);
  if (ca && cb) return constant(ca->value + cb->value);
  return make(Expr{Sum{std::move(a), std::move(b)}});
}

Fn product(Fn a, Fn b) {
  if (is_const(a, Complex{0, 0}) || is_const(b, Complex{0, 0})) return constant({0, 0});
  if (is_const(a, Complex{1, 0})) return b;
  if (is_const(b, Complex{1, 0})) return a;
  const auto* ca = std::get_if<Constant>(&a->node);
  const auto* cb = std::get_if<Constant>(&b->node);
  if (ca && cb) return constant(ca->value * cb->value);
  return make(Expr{Product{std::move(a), std::move(b)}});
}

Fn scaled(Complex factor, Fn inner) {
  if (factor == Complex{0, 0}) return constant({0, 0});
  if (factor == Complex{1, 0}) return inner;
  const auto* c = std::get_if<Constant>(&inner->node);
  if (c) return constant(factor * c->value);
  return make(Expr{Scaled{factor, std::move(inner)}});
}

Complex eval(const Fn& f, Complex z) {
  return std::visit(
      [&](const auto& node) -> Complex {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return node.value;
        } else if constexpr (std::is_same_v<T, Identity>) {
          return z;
        } else if constexpr (std::is_same_v<T, RationalFunction>) {
          Complex num = node.scale;
          for (const auto& [zero, m] : node.zeros) num *= pow_int(z - zero, m);
          Complex den{1.0, 0.0};
          for (const auto& [pole, m] : node.poles) {
            const Complex d = z - pole;
            if (d == Complex{0, 0}) {
              throw EvalError("evaluation at pole (" + util::fmt_g17(pole.real()) + ", " +
                              util::fmt_g17(pole.imag()) + ") of rational factor");
            }
            den *= pow_int(d, m);
          }
          return num / den;
        } else if constexpr (std::is_same_v<T, SingularGenerator>) {
          const Complex d = z - node.lambda;
          if (d == Complex{0, 0}) return {0.0, 0.0};
          return d * std::exp(node.rho * (z + node.lambda) / d);
        } else if constexpr (std::is_same_v<T, CayleyExp>) {
          const Complex d = z - node.lambda;
          if (d == Complex{0, 0}) {
            throw EvalError("essential singularity of exponential weight at (" +
                            util::fmt_g17(node.lambda.real()) + ", " +
                            util::fmt_g17(node.lambda.imag()) + ")");
          }
          return std::exp(node.coeff * (z + node.lambda) / d);
        } else if constexpr (std::is_same_v<T, Sum>) {
          return eval(node.a, z) + eval(node.b, z);
        } else if constexpr (std::is_same_v<T, Product>) {
          return eval(node.a, z) * eval(node.b, z);
        } else {
          return node.factor * eval(node.inner, z);
        }
      },
      f->node);
}

namespace {

void collect_poles(const Fn& f, std::vector<Complex>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, RationalFunction>) {
          for (const auto& [p, m] : node.poles) out.push_back(p);
        } else if constexpr (std::is_same_v<T, Sum> || std::is_same_v<T, Product>) {
          collect_poles(node.a, out);
          collect_poles(node.b, out);
        } else if constexpr (std::is_same_v<T, Scaled>) {
          collect_poles(node.inner, out);
        }
      },
      f->node);
}

}  // namespace

std::vector<Complex> rational_poles(const Fn& f) {
  std::vector<Complex> out;
  collect_poles(f, out);
  return out;
}

bool poles_off_region(const RationalFunction& g, const geom::Disc& outer,
                      const std::vector<geom::Disc>& holes) {
  for (const auto& [p, m] : g.poles) {
    if (std::abs(p - outer.center) > outer.radius) continue;
    bool inside_hole = false;
    for (const auto& h : holes) {
      if (std::abs(p - h.center) < h.radius) {
        inside_hole = true;
        break;
      }
    }
    if (!inside_hole) return false;
  }
  return true;
}

Complex glue(const Fn& phi, const Fn& h, const Fn& f, const geom::Region& n_region, Complex z) {
  if (!geom::point_in_region(n_region, z)) return eval(f, z);
  const Complex p = eval(phi, z);
  return p * eval(h, z) + (Complex{1.0, 0.0} - p) * eval(f, z);
}

std::vector<Complex> sample_region(const geom::Region& region, long samples, uint64_t seed) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<size_t>(samples) + 64);

  // Interior: low-discrepancy points of the outer disc filtered by membership.
  long produced = 0;
  for (uint64_t i = 0; produced < samples && i < static_cast<uint64_t>(samples) * 64; ++i) {
    auto [u, v] = util::kronecker_2d(i, seed);
    const double r = region.outer.radius * std::sqrt(u);
    const double t = geom::kTau * v;
    const Complex z = region.outer.center + r * Complex(std::cos(t), std::sin(t));
    if (geom::point_in_region(region, z)) {
      pts.push_back(z);
      ++produced;
    }
  }

  // Boundary: walk every arc, sample count proportional to length.
  const geom::Contour contour = geom::boundary_arcs(region.outer, region.holes);
  const double total_len = std::max(contour.total_length(), 1e-300);
  const long boundary_budget = std::max<long>(samples / 2, 16);
  for (const auto& arc : contour.arcs) {
    const long n = std::max<long>(
        4, static_cast<long>(static_cast<double>(boundary_budget) * arc.length() / total_len));
    for (long k = 0; k < n; ++k) {
      const double frac = util::kronecker_1d(static_cast<uint64_t>(k), seed ^ 0x5eedULL);
      pts.push_back(arc.point_at(arc.interval.start + frac * arc.interval.span));
    }
  }
  return pts;
}

double sup_norm_estimate(const Fn& f, const geom::Region& region, long samples, uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sup_norm_estimate requires samples >= 1");
  double best = 0.0;
  for (const Complex& z : sample_region(region, samples, seed)) {
    best = std::max(best, std::abs(eval(f, z)));
  }
  return best;
}

double peak_margin(const geom::Region& region, double neighborhood_radius, long samples,
                   uint64_t seed) {
  double worst = 0.0;
  const Complex one{1.0, 0.0};
  for (const Complex& z : sample_region(region, samples, seed)) {
    if (std::abs(z - one) < neighborhood_radius) continue;
    worst = std::max(worst, std::abs((one + z) / 2.0));
  }
  return 1.0 - worst;
}

}  // namespace cheeselab::fn
