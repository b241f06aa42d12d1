#include "cheeselab/cheese.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cheeselab/util.hpp"

namespace cheeselab::cheese {

namespace {

constexpr double kRadiusFloor = 1e-280;  // below this a disc radius underflows usefully

double wrap_angle(double theta) {
  double t = std::fmod(theta, geom::kTau);
  if (t < 0) t += geom::kTau;
  if (t >= geom::kTau) t -= geom::kTau;
  return t;
}

struct ScheduledDisc {
  geom::Disc disc;
  CoverKind kind;
  double radius_key;
  int stream;  // near-target / boundary discs sort ahead of grid fill on ties
  long ordinal;
};

// Square-grid disc wave of a given radius; spacing equals the radius so the
// open discs cover the plane strip they are laid over.
void append_grid_wave(std::vector<ScheduledDisc>& out, double radius, bool thm15_interior,
                      long& ordinal) {
  const double h = radius;
  const long span = static_cast<long>(std::ceil((1.0 + radius) / h)) + 1;
  for (long j = -span; j <= span; ++j) {
    for (long i = -span; i <= span; ++i) {
      const Complex c(static_cast<double>(i) * h, static_cast<double>(j) * h);
      if (std::abs(c) > 1.0 + 0.75 * radius) continue;
      if (thm15_interior) {
        if (std::abs(c) + radius >= 1.0) continue;  // must be contained in the open unit disc
      } else {
        if (std::abs(c - Complex{1.0, 0.0}) <= radius) continue;  // closed disc must avoid 1
      }
      out.push_back({geom::Disc(c, radius), CoverKind::Interior, radius, 1, ordinal++});
    }
  }
}

std::vector<CoverDisc> schedule_thm14(int count, double mesh) {
  std::vector<ScheduledDisc> pool;
  long ordinal = 0;

  // Near-target stream: the discs centered at 1 with radii 1/j.
  const int max_near = count + 4;
  for (int j = 1; j <= max_near; ++j) {
    const double r = 1.0 / static_cast<double>(j);
    pool.push_back({geom::Disc(Complex{1.0, 0.0}, r), CoverKind::NearTarget, r, 0, ordinal++});
  }

  // Grid waves at radii mesh/2^{t+1}, halting once the wave count clearly
  // exceeds the request.
  long grid_emitted = 0;
  for (int t = 1; grid_emitted < 4L * count + 64 && t < 48; ++t) {
    const double radius = mesh * std::ldexp(1.0, -(t + 1));
    if (radius < 1e-9) break;
    const size_t before = pool.size();
    append_grid_wave(pool, radius, false, ordinal);
    grid_emitted += static_cast<long>(pool.size() - before);
  }

  std::stable_sort(pool.begin(), pool.end(), [](const ScheduledDisc& a, const ScheduledDisc& b) {
    if (a.radius_key != b.radius_key) return a.radius_key > b.radius_key;
    if (a.stream != b.stream) return a.stream < b.stream;
    return a.ordinal < b.ordinal;
  });

  std::vector<CoverDisc> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count && i < static_cast<int>(pool.size()); ++i) {
    out.push_back({i + 1, pool[static_cast<size_t>(i)].disc, pool[static_cast<size_t>(i)].kind});
  }
  return out;
}

std::vector<CoverDisc> schedule_thm15(int count, double mesh) {
  std::vector<ScheduledDisc> pool;
  long ordinal = 0;
  const double base = std::min(mesh, 1.0);

  long emitted = 0;
  for (int t = 1; emitted < 4L * count + 64 && t < 48; ++t) {
    const double radius = base * std::ldexp(1.0, -t);
    if (radius < 1e-9) break;
    const size_t before = pool.size();

    // Boundary-centered wave, phased half a step off the positive real axis
    // so the removed bands around each circle stay clear of the point 1.
    const long m = static_cast<long>(std::ceil(geom::kTau / radius));
    for (long k = 0; k < m; ++k) {
      const double theta = geom::kTau * (static_cast<double>(k) + 0.5) / static_cast<double>(m);
      const Complex c(std::cos(theta), std::sin(theta));
      pool.push_back({geom::Disc(c, radius), CoverKind::BoundaryCentered, radius, 0, ordinal++});
    }
    append_grid_wave(pool, radius, true, ordinal);
    emitted += static_cast<long>(pool.size() - before);
  }

  std::stable_sort(pool.begin(), pool.end(), [](const ScheduledDisc& a, const ScheduledDisc& b) {
    if (a.radius_key != b.radius_key) return a.radius_key > b.radius_key;
    if (a.stream != b.stream) return a.stream < b.stream;
    return a.ordinal < b.ordinal;
  });

  std::vector<CoverDisc> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count && i < static_cast<int>(pool.size()); ++i) {
    out.push_back({i + 1, pool[static_cast<size_t>(i)].disc, pool[static_cast<size_t>(i)].kind});
  }
  return out;
}

}  // namespace

bool LambdaSet::contains_angle(double theta) const {
  for (const auto& arc : arcs) {
    if (arc.contains(theta)) return true;
  }
  return false;
}

double LambdaSet::distance_to_point(Complex p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& arc : arcs) {
    const double phi = std::arg(p == Complex{0, 0} ? Complex{1, 0} : p);
    double d;
    if (arc.contains(phi)) {
      d = std::abs(std::abs(p) - 1.0);
    } else {
      const Complex e0{std::cos(arc.start), std::sin(arc.start)};
      const Complex e1{std::cos(arc.end()), std::sin(arc.end())};
      d = std::min(std::abs(p - e0), std::abs(p - e1));
    }
    best = std::min(best, d);
  }
  return best;
}

double LambdaSet::distance_to_disc(const geom::Disc& d) const {
  return std::max(distance_to_point(d.center) - d.radius, 0.0);
}

double CheesePlan::radius_sum() const {
  double s = 0.0;
  for (const auto& h : holes) s += h.disc.radius;
  return s;
}

geom::Disc CheesePlan::truncated_outer(int n) const {
  if (n < 1) throw std::invalid_argument("truncation index must be >= 1");
  return geom::Disc(outer.center, outer.radius + 1.0 / static_cast<double>(n));
}

std::vector<geom::Disc> CheesePlan::truncated_holes(int n) const {
  if (n < 0 || static_cast<size_t>(n) > holes.size()) {
    throw std::invalid_argument("truncation exceeds the number of holes in the plan");
  }
  std::vector<geom::Disc> out;
  out.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(holes[static_cast<size_t>(k)].disc);
  return out;
}

geom::Region CheesePlan::truncated_region(int n) const {
  return geom::Region{truncated_outer(n), truncated_holes(n)};
}

geom::Region CheesePlan::full_region() const {
  std::vector<geom::Disc> hs;
  hs.reserve(holes.size());
  for (const auto& h : holes) hs.push_back(h.disc);
  return geom::Region{outer, hs};
}

std::vector<CoverDisc> cover_family(Mode mode, int count, double mesh) {
  if (count < 1) throw std::invalid_argument("cover_family requires count >= 1");
  if (!(mesh > 0.0)) throw std::invalid_argument("cover_family requires mesh > 0");
  return mode == Mode::Thm14 ? schedule_thm14(count, mesh) : schedule_thm15(count, mesh);
}

double epsilon_budget(int n, double r, double delta_n) {
  if (n < 1) throw std::invalid_argument("epsilon_budget requires n >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("epsilon_budget requires r > 0");
  if (!(delta_n > 0.0)) throw std::invalid_argument("epsilon_budget requires delta_n > 0");
  const double a = std::ldexp(r, -(n + 1));
  const double b = std::ldexp(std::exp(-static_cast<double>(n) / delta_n), -n);
  return std::min(a, b);
}

namespace {

double annulus_distance_from_range(double d_min, double d_max, double r_inner, double r_outer) {
  if (d_max < r_inner) return r_inner - d_max;
  if (d_min > r_outer) return d_min - r_outer;
  return 0.0;
}

}  // namespace

double annulus_distance(Complex a, double r_outer, double r_inner, Complex target) {
  if (!(r_outer > r_inner) || !(r_inner >= 0.0)) {
    throw std::invalid_argument("annulus requires 0 <= r_inner < r_outer");
  }
  const double d = std::abs(target - a);
  const double dist = annulus_distance_from_range(d, d, r_inner, r_outer);
  if (dist <= 0.0) {
    throw InvalidPlacementError("target lies inside the working annulus");
  }
  return dist;
}

double annulus_distance(Complex a, double r_outer, double r_inner, const LambdaSet& target) {
  if (!(r_outer > r_inner) || !(r_inner >= 0.0)) {
    throw std::invalid_argument("annulus requires 0 <= r_inner < r_outer");
  }
  if (target.arcs.empty()) throw std::invalid_argument("empty arc set");

  double best = std::numeric_limits<double>::infinity();
  const double mod_a = std::abs(a);
  const double phi = std::arg(mod_a == 0.0 ? Complex{1, 0} : a);
  for (const auto& arc : target.arcs) {
    // |e^{i theta} - a| is monotone in the angular distance to phi, so the
    // extremes sit at the aligned/opposed angles or at the arc endpoints.
    double d_min, d_max;
    const Complex e0{std::cos(arc.start), std::sin(arc.start)};
    const Complex e1{std::cos(arc.end()), std::sin(arc.end())};
    const double d0 = std::abs(e0 - a);
    const double d1 = std::abs(e1 - a);
    d_min = std::min(d0, d1);
    d_max = std::max(d0, d1);
    if (arc.contains(phi)) d_min = std::abs(1.0 - mod_a);
    if (arc.contains(phi + geom::kTau / 2.0)) d_max = 1.0 + mod_a;
    best = std::min(best, annulus_distance_from_range(d_min, d_max, r_inner, r_outer));
  }
  if (best <= 0.0) {
    throw InvalidPlacementError("arc target meets the working annulus");
  }
  return best;
}

std::vector<geom::Disc> place_mckissick_family(const CoverDisc& cover, double eps, int m,
                                               double phase) {
  const double r = cover.disc.radius;
  if (!(eps > 0.0)) throw std::invalid_argument("family budget eps must be positive");
  if (eps > r / 2.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("family budget exceeds half the cover radius");
  }
  if (m < 1) throw std::invalid_argument("family size must be >= 1");

  const double disc_radius = eps / (2.0 * static_cast<double>(m));
  const double ring = r - eps / 2.0;
  // strict containment in the open shell { r - eps < |z - a| < r }
  if (!(ring - disc_radius > r - eps) || !(ring + disc_radius < r)) {
    throw PlacementError("family of " + std::to_string(m) + " discs escapes the shell");
  }

  std::vector<geom::Disc> out;
  out.reserve(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double theta = phase + geom::kTau * static_cast<double>(k) / static_cast<double>(m);
    out.push_back(geom::Disc(
        cover.disc.center + ring * Complex(std::cos(theta), std::sin(theta)), disc_radius));
  }
  return out;
}

LambdaSet lambda_arcs(const std::vector<double>& gammas,
                      const std::vector<CoverDisc>& boundary_covers) {
  if (gammas.size() != boundary_covers.size()) {
    throw std::invalid_argument("one gamma per boundary cover required");
  }

  struct Segment {
    double a, b;
  };
  std::vector<Segment> excluded;
  for (size_t i = 0; i < boundary_covers.size(); ++i) {
    const auto& cover = boundary_covers[i];
    const double gamma = gammas[i];
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma_n must be positive");
    if (std::abs(std::abs(cover.disc.center) - 1.0) > 1e-9) {
      throw std::invalid_argument("lambda_arcs expects boundary-centered covers");
    }
    const double r = cover.disc.radius;
    const double theta_n = std::arg(cover.disc.center);
    // chord |e^{i theta} - e^{i theta_n}| = 2 |sin((theta - theta_n)/2)|
    const double lo = std::max(r - gamma, 0.0);
    const double hi = std::min(r + gamma, 2.0);
    const double u_lo = 2.0 * std::asin(lo / 2.0);
    const double u_hi = 2.0 * std::asin(hi / 2.0);
    if (u_hi - u_lo <= 0.0) continue;
    if (u_lo == 0.0) {
      excluded.push_back({theta_n - u_hi, theta_n + u_hi});
    } else {
      excluded.push_back({theta_n + u_lo, theta_n + u_hi});
      excluded.push_back({theta_n - u_hi, theta_n - u_lo});
    }
  }

  // Normalize to [0, tau), split wrap-around, merge.
  std::vector<Segment> segs;
  for (const auto& s : excluded) {
    double a = wrap_angle(s.a);
    double len = s.b - s.a;
    if (len >= geom::kTau) {
      segs.push_back({0.0, geom::kTau});
      continue;
    }
    double b = a + len;
    if (b <= geom::kTau) {
      segs.push_back({a, b});
    } else {
      segs.push_back({a, geom::kTau});
      segs.push_back({0.0, b - geom::kTau});
    }
  }
  std::sort(segs.begin(), segs.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  std::vector<Segment> merged;
  for (const auto& s : segs) {
    if (!merged.empty() && s.a <= merged.back().b) {
      merged.back().b = std::max(merged.back().b, s.b);
    } else {
      merged.push_back(s);
    }
  }

  LambdaSet lambda;
  double excluded_len = 0.0;
  double cursor = 0.0;
  for (const auto& s : merged) {
    excluded_len += s.b - s.a;
    if (s.a > cursor + 1e-15) {
      lambda.arcs.push_back(geom::AngularInterval::from_endpoints(cursor, s.a));
    }
    cursor = std::max(cursor, s.b);
  }
  if (cursor < geom::kTau - 1e-15) {
    lambda.arcs.push_back(geom::AngularInterval::from_endpoints(cursor, geom::kTau));
  }
  lambda.excluded_measure = excluded_len;
  return lambda;
}

namespace {

struct WorkingFamily {
  FamilyType type;
  int index;  // wave-local n
  geom::Disc working_disc;
  CoverKind kind;
  double gamma;
};

// delta: distance from the working annulus to the target (drives the budget);
// guard_dist: distance from the working annulus to the point 1 (keeps the
// measure weight representable at desk scale).
void place_family(CheesePlan& plan, const WorkingFamily& wf, double delta, double guard_dist,
                  int m, double r_budget, uint64_t seed) {
  FamilyRecord rec;
  rec.type = wf.type;
  rec.index = wf.index;
  rec.working_disc = wf.working_disc;
  rec.gamma = wf.gamma;
  rec.delta = delta;

  const double r_n = wf.working_disc.radius;
  const double shell_cap =
      (wf.kind == CoverKind::BoundaryCentered) ? wf.gamma / 2.0 : r_n / 2.0;

  if (guard_dist < plan.s_min) {
    rec.skip_reason = "s_min_guard";
    plan.families.push_back(rec);
    return;
  }
  rec.epsilon = epsilon_budget(wf.index, r_budget, delta);
  rec.eps_used = std::min(rec.epsilon, shell_cap);
  if (rec.eps_used / (2.0 * static_cast<double>(m)) < kRadiusFloor) {
    rec.skip_reason = "radius_underflow";
    plan.families.push_back(rec);
    return;
  }

  const uint64_t wave_tag = (wf.type == FamilyType::McKissick) ? 0u : 1u;
  util::SplitMix64 rng(util::mix_seed(seed, (wave_tag << 32) | static_cast<uint64_t>(wf.index)));
  const double phase = geom::kTau * rng.next_double();

  CoverDisc cover{wf.index, wf.working_disc, wf.kind};
  std::vector<geom::Disc> discs;
  try {
    discs = place_mckissick_family(cover, rec.eps_used, m, phase);
  } catch (const PlacementError&) {
    // the shell is thinner than the float resolution at the cover radius
    rec.skip_reason = "radius_underflow";
    plan.families.push_back(rec);
    return;
  }
  rec.first_hole = static_cast<int>(plan.holes.size());
  rec.hole_count = static_cast<int>(discs.size());
  for (size_t k = 0; k < discs.size(); ++k) {
    plan.holes.push_back({discs[k], wf.index, static_cast<int>(k) + 1, wf.type});
  }
  plan.families.push_back(rec);
}

}  // namespace

CheesePlan build_plan(const BuildOptions& options) {
  if (options.covers < 1 || options.discs_per_family < 2 || !(options.budget > 0.0) ||
      !(options.mesh > 0.0) || !(options.s_min > 0.0) || options.rho_max < 0.0) {
    throw std::invalid_argument("build options out of range");
  }

  CheesePlan plan;
  plan.mode = options.mode;
  plan.outer = geom::Disc(Complex{0, 0}, 1.0);
  plan.budget_r = options.budget;
  plan.truncation_covers = options.covers;
  plan.rho_max = options.rho_max;
  plan.s_min = options.s_min;
  plan.mesh = options.mesh;
  plan.discs_per_family = options.discs_per_family;
  plan.seed = options.seed;

  plan.covers = cover_family(options.mode, options.covers, options.mesh);

  // thm15: fix the gamma bands and the surviving arc set first.
  std::vector<double> gamma_by_cover(plan.covers.size(), 0.0);
  if (options.mode == Mode::Thm15) {
    std::vector<CoverDisc> boundary;
    std::vector<double> gammas;
    for (const auto& c : plan.covers) {
      if (c.kind != CoverKind::BoundaryCentered) continue;
      const double gamma =
          std::min(options.budget * std::ldexp(1.0, -(c.index + 2)) / 8.0, c.disc.radius / 2.0);
      gamma_by_cover[static_cast<size_t>(c.index - 1)] = gamma;
      boundary.push_back(c);
      gammas.push_back(gamma);
    }
    plan.lambda = lambda_arcs(gammas, boundary);
    if (plan.lambda->excluded_measure >= options.budget) {
      throw PlacementError("excluded boundary measure reached the budget");
    }
    if (!plan.lambda->contains_angle(0.0)) {
      throw PlacementError("the point 1 fell outside the surviving boundary arcs");
    }
  }

  // Main wave: one McKissick family per cover, in the working annulus.
  for (const auto& c : plan.covers) {
    double r_inner;
    double gamma = 0.0;
    if (options.mode == Mode::Thm14) {
      r_inner = c.disc.radius / 2.0;
    } else if (c.kind == CoverKind::BoundaryCentered) {
      gamma = gamma_by_cover[static_cast<size_t>(c.index - 1)];
      r_inner = c.disc.radius - gamma / 2.0;
    } else {
      r_inner = c.disc.radius / 2.0;  // interior covers use the thm14 annulus shape
    }

    double delta;
    if (options.mode == Mode::Thm14) {
      delta = annulus_distance(c.disc.center, c.disc.radius, r_inner, Complex{1.0, 0.0});
    } else {
      delta = annulus_distance(c.disc.center, c.disc.radius, r_inner, *plan.lambda);
    }
    const double d1 = std::abs(Complex{1.0, 0.0} - c.disc.center);
    const double guard_dist = annulus_distance_from_range(d1, d1, r_inner, c.disc.radius);

    WorkingFamily wf{FamilyType::McKissick, c.index, c.disc, c.kind, gamma};
    place_family(plan, wf, delta, guard_dist, options.discs_per_family, options.budget,
                 options.seed);
  }

  // Second wave: the strong-regularity cover {B_n} with budgets eps~_n.
  std::vector<geom::Disc> second_wave;
  if (options.mode == Mode::Thm14) {
    // grid discs (closed discs avoiding 1) drawn from an extended schedule
    int request = options.covers + 64;
    while (true) {
      auto extended = cover_family(Mode::Thm14, request, options.mesh);
      for (const auto& c : extended) {
        if (c.kind == CoverKind::Interior) second_wave.push_back(c.disc);
        if (static_cast<int>(second_wave.size()) == options.covers) break;
      }
      if (static_cast<int>(second_wave.size()) == options.covers || request > 1 << 16) break;
      second_wave.clear();
      request *= 2;
    }
  } else {
    for (int n = 1; n <= options.covers; ++n) {
      second_wave.push_back(
          geom::Disc(Complex{0, 0}, 1.0 - 1.0 / static_cast<double>(n + 1)));
    }
  }

  for (size_t i = 0; i < second_wave.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const geom::Disc& b = second_wave[i];
    double alpha;
    if (options.mode == Mode::Thm14) {
      alpha = geom::distance_to_point(b, Complex{1.0, 0.0});
    } else {
      alpha = plan.lambda->distance_to_disc(b);
    }
    if (alpha <= 0.0) {
      throw PlacementError("strong-regularity disc touches the target set");
    }
    const double guard_dist = geom::distance_to_point(b, Complex{1.0, 0.0});
    WorkingFamily wf{FamilyType::StrongRegularity, n, b, CoverKind::Interior, 0.0};
    place_family(plan, wf, alpha, guard_dist, options.discs_per_family, options.budget,
                 options.seed);
  }

  // Construction invariants.
  if (!(plan.radius_sum() < plan.budget_r)) {
    throw PlacementError("hole radius sum reached the budget");
  }
  for (const auto& h : plan.holes) {
    if (!(hole_separation(plan, h.disc) > 0.0)) {
      throw PlacementError("a hole touches the target set");
    }
  }
  return plan;
}

double hole_separation(const CheesePlan& plan, const geom::Disc& hole) {
  if (plan.mode == Mode::Thm14) {
    return geom::distance_to_point(hole, Complex{1.0, 0.0});
  }
  return plan.lambda->distance_to_disc(hole);
}

BudgetReport verify_budgets(const CheesePlan& plan, double nu) {
  if (nu < 0.0) throw std::invalid_argument("nu must be >= 0");
  BudgetReport report;

  auto push = [&](std::string name, double value, double bound) {
    BudgetCheck check;
    check.name = std::move(name);
    check.value = value;
    check.bound = bound;
    check.margin = bound - value;
    check.pass = value < bound;
    if (!check.pass) {
      report.all_pass = false;
      report.violations.push_back(check.name);
    }
    report.checks.push_back(std::move(check));
  };

  push("total_radius", plan.radius_sum(), plan.budget_r);

  for (const auto& fam : plan.families) {
    if (fam.skipped()) continue;
    double weighted = 0.0;
    for (int k = 0; k < fam.hole_count; ++k) {
      const auto& hole = plan.holes[static_cast<size_t>(fam.first_hole + k)];
      const double s = hole_separation(plan, hole.disc);
      weighted += hole.disc.radius * std::exp(nu / s);
    }
    const char* wave = (fam.type == FamilyType::McKissick) ? "mckissick" : "strong_regularity";
    push(std::string(wave) + "_family_" + std::to_string(fam.index) + "_weighted", weighted,
         fam.epsilon * std::exp(nu / fam.delta));
    if (static_cast<double>(fam.index) > nu) {
      push(std::string(wave) + "_family_" + std::to_string(fam.index) + "_tail", weighted,
           std::ldexp(1.0, -fam.index));
    }
  }
  return report;
}

}  // namespace cheeselab::cheese
