#include "cheeselab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cheeselab/cole.hpp"
#include "cheeselab/measure.hpp"
#include "cheeselab/planio.hpp"
#include "cheeselab/svg.hpp"

namespace cheeselab::suites {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::string fmt_rho(double rho) {
  std::string s = util::fmt_g17(rho);
  return s;
}

fn::Fn polynomial(const std::vector<Complex>& coeffs) {
  fn::Fn acc = fn::constant({0, 0});
  fn::Fn power = fn::constant({1, 0});
  for (size_t k = 0; k < coeffs.size(); ++k) {
    acc = acc + fn::scaled(coeffs[k], power);
    power = power * fn::identity();
  }
  return acc;
}

std::string param_value(const std::string& params, const std::string& key) {
  std::istringstream in(params);
  std::string item;
  while (std::getline(in, item, ';')) {
    const auto eq = item.find('=');
    if (eq != std::string::npos && item.substr(0, eq) == key) return item.substr(eq + 1);
  }
  return "";
}

struct RowTimer {
  io::VerificationLedger& ledger;
  io::LedgerRow row;
  Clock::time_point start = Clock::now();

  RowTimer(io::VerificationLedger& l, std::string id, std::string suite, std::string params)
      : ledger(l) {
    row.test_id = std::move(id);
    row.suite = std::move(suite);
    row.params = std::move(params);
  }
  void commit(Complex expected, Complex observed, double residual, double tolerance, bool pass) {
    row.expected = expected;
    row.observed = observed;
    row.residual = residual;
    row.tolerance = tolerance;
    row.pass = pass;
    row.millis = elapsed_ms(start);
    ledger.append(row);
  }
};

}  // namespace

fn::RationalFunction random_hole_rational(const cheese::CheesePlan& plan, int n,
                                          util::SplitMix64& rng) {
  std::vector<Complex> centers;
  for (int k = 0; k < n && k < static_cast<int>(plan.holes.size()); ++k) {
    const auto& d = plan.holes[static_cast<size_t>(k)].disc;
    if (d.radius >= 1e-6) centers.push_back(d.center);
  }
  if (centers.empty()) throw VerificationFailure("no hole large enough to host a pole");

  fn::RationalFunction g;
  const int n_poles = rng.next_int(1, 2);
  for (int i = 0; i < n_poles; ++i) {
    g.poles.emplace_back(centers[rng.next_below(centers.size())], rng.next_int(1, 2));
  }
  g.scale = Complex(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
  if (rng.next_below(2) == 0) {
    g.zeros.emplace_back(Complex(rng.next_double() - 0.5, rng.next_double() - 0.5), 1);
  }
  return g;
}

std::pair<std::vector<fn::Fn>, std::vector<Complex>> cole_family(const cheese::CheesePlan& plan,
                                                                 double rho2, int members) {
  std::vector<fn::Fn> family;
  std::vector<Complex> hull;

  if (plan.mode == cheese::Mode::Thm14) {
    hull.push_back({1.0, 0.0});
    const fn::Fn generator = fn::singular_generator(rho2);
    // rational basis: monomials plus one factor with a pole in a hole
    Complex pole{0, 0};
    bool have_pole = false;
    for (const auto& h : plan.holes) {
      if (h.disc.radius >= 1e-6) {
        pole = h.disc.center;
        have_pole = true;
        break;
      }
    }
    for (int i = 0; i < members; ++i) {
      if (i + 1 == members && have_pole) {
        fn::RationalFunction r;
        r.poles.emplace_back(pole, 1);
        family.push_back(generator * fn::rational(r));
      } else {
        fn::RationalFunction r;
        if (i > 0) r.zeros.emplace_back(Complex{0, 0}, i);
        family.push_back(generator * fn::rational(r));
      }
    }
  } else {
    // hull: the point 1 plus sampled points of the surviving arcs
    hull.push_back({1.0, 0.0});
    for (const auto& arc : plan.lambda->arcs) {
      if (hull.size() >= 3) break;
      const double theta = arc.midpoint();
      const Complex p{std::cos(theta), std::sin(theta)};
      if (std::abs(p - Complex{1.0, 0.0}) > 1e-3) hull.push_back(p);
    }
    for (int i = 0; i < members; ++i) {
      const size_t j = static_cast<size_t>(i) % hull.size();
      fn::RationalFunction r;
      for (size_t k = 0; k < hull.size(); ++k) {
        if (k != j) r.zeros.emplace_back(hull[k], 1);
      }
      if (i >= static_cast<int>(hull.size())) {
        r.zeros.emplace_back(Complex{0, 0}, i / static_cast<int>(hull.size()));
      }
      family.push_back(fn::singular_generator(rho2, hull[j]) * fn::rational(r));
    }
  }
  return {std::move(family), std::move(hull)};
}

io::VerificationLedger run_ideals_suite(const io::RunConfig& config,
                                        const cheese::CheesePlan& plan) {
  io::VerificationLedger ledger;
  const int n_max = *std::max_element(config.truncations.begin(), config.truncations.end());
  if (static_cast<size_t>(n_max) > plan.holes.size()) {
    throw io::ConfigError("<config>", 0, "truncation exceeds the plan hole count");
  }

  // separation + deformation + oracle agreement, per rho pair
  for (const auto& [rho1, rho2] : config.rho_pairs) {
    std::vector<std::pair<int, Complex>> values;
    for (int n : config.truncations) {
      RowTimer t(ledger, "separation_n" + std::to_string(n), "separation",
                 "rho1=" + fmt_rho(rho1) + ";rho2=" + fmt_rho(rho2) + ";n=" + std::to_string(n));
      try {
        auto r = measure::separation_test(plan, n, rho1, rho2, config.pass_tol);
        values.emplace_back(n, r.observed);
        t.commit(r.expected, r.observed, r.residual, r.threshold, r.pass);
      } catch (const measure::CertificationError&) {
        // winding certification failed: an unconditionally failing row
        t.row.params += ";error=winding_certification";
        t.commit({0, 0}, {0, 0}, std::numeric_limits<double>::infinity(), config.pass_tol,
                 false);
      }
    }
    {
      RowTimer t(ledger, "deformation", "deformation",
                 "rho1=" + fmt_rho(rho1) + ";rho2=" + fmt_rho(rho2));
      double spread = 0.0;
      for (size_t i = 0; i < values.size(); ++i) {
        for (size_t j = i + 1; j < values.size(); ++j) {
          const double scale = std::max(std::abs(values[i].second), std::abs(values[j].second));
          if (scale > 0) {
            spread = std::max(spread, std::abs(values[i].second - values[j].second) / scale);
          }
        }
      }
      t.commit({0, 0}, {spread, 0}, spread, config.pass_tol, spread < config.pass_tol);
    }
    {
      const double c = rho1 - rho2;
      RowTimer t(ledger, "residue_oracle", "separation",
                 "c=" + fmt_rho(c));
      const Complex series = Complex(0.0, geom::kTau) * measure::residue_series_oracle(c);
      const Complex closed = Complex(0.0, 2.0 * geom::kTau) * c * c * std::exp(c);
      const double rel = std::abs(series - closed) / std::abs(closed);
      t.commit(closed, series, rel, 1e-12, rel < 1e-12);
    }
    {
      RowTimer t(ledger, "tv_bound", "norm_bound",
                 "rho2=" + fmt_rho(rho2) + ";n=" + std::to_string(n_max));
      auto mu = measure::make_measure(measure::truncated_contour(plan, n_max), rho2,
                                      config.quad_tol);
      const double tv = measure::total_variation(mu);
      double weighted = 0.0;
      for (int k = 0; k < n_max; ++k) {
        const auto& h = plan.holes[static_cast<size_t>(k)].disc;
        const double s = geom::distance_to_point(h, Complex{1.0, 0.0});
        weighted += h.radius * std::exp(2.0 * rho2 / s);
      }
      const double bound = geom::kTau * (weighted + 2.0);
      t.commit({bound, 0}, {tv, 0}, bound - tv, 0.0, tv <= bound && bound - tv > 0.0);
    }
  }

  // Cauchy annihilation with random rational data
  {
    const double rho2 = config.rho_pairs.front().second;
    util::SplitMix64 rng(util::mix_seed(config.seed, 0xA11));
    for (int i = 0; i < 10; ++i) {
      auto g = random_hole_rational(plan, n_max, rng);
      std::string params = "rho2=" + fmt_rho(rho2) + ";n=" + std::to_string(n_max) +
                           ";poles=" + std::to_string(g.poles.size());
      RowTimer t(ledger, "annihilation_" + std::to_string(i), "annihilation", params);
      auto r = measure::annihilation_test(plan, n_max, rho2, g, config.pass_tol);
      t.commit({0, 0}, r.observed, r.residual, r.threshold, r.pass);
    }
  }

  // budget suite per nu
  for (double nu : config.nu) {
    auto report = cheese::verify_budgets(plan, nu);
    double min_radius_margin = 0.0, min_weighted = 1e308, min_tail = 1e308;
    std::string worst_weighted = "-", worst_tail = "-";
    bool pass_weighted = true, pass_tail = true;
    for (const auto& check : report.checks) {
      if (check.name == "total_radius") {
        min_radius_margin = check.margin;
      } else if (check.name.find("_tail") != std::string::npos) {
        if (check.margin < min_tail) {
          min_tail = check.margin;
          worst_tail = check.name;
        }
        pass_tail = pass_tail && check.pass;
      } else {
        if (check.margin < min_weighted) {
          min_weighted = check.margin;
          worst_weighted = check.name;
        }
        pass_weighted = pass_weighted && check.pass;
      }
    }
    {
      RowTimer t(ledger, "budget_radius_sum", "budget", "nu=" + fmt_rho(nu));
      t.commit({plan.budget_r, 0}, {plan.radius_sum(), 0}, min_radius_margin, 0.0,
               min_radius_margin > 0.0);
    }
    {
      RowTimer t(ledger, "budget_weighted", "budget",
                 "nu=" + fmt_rho(nu) + ";worst=" + worst_weighted);
      t.commit({0, 0}, {min_weighted, 0}, min_weighted, 0.0, pass_weighted && min_weighted > 0.0);
    }
    {
      RowTimer t(ledger, "budget_tail", "budget", "nu=" + fmt_rho(nu) + ";worst=" + worst_tail);
      t.commit({0, 0}, {min_tail, 0}, min_tail, 0.0, pass_tail && min_tail > 0.0);
    }
  }

  // winding certification probes
  {
    RowTimer t(ledger, "winding_probes", "geometry", "n=" + std::to_string(n_max) + ";probes=100");
    const auto contour = measure::truncated_contour(plan, n_max);
    const auto& region = contour.region;
    util::SplitMix64 rng(util::mix_seed(config.seed, 0x91d));
    int mismatches = 0, checked = 0;
    // interior
    for (uint64_t i = 0; checked < 100 && i < 100000; ++i) {
      auto [u, v] = util::kronecker_2d(i, config.seed);
      const double r = region.outer.radius * std::sqrt(u);
      const double a = geom::kTau * v;
      const Complex z = region.outer.center + r * Complex(std::cos(a), std::sin(a));
      if (!geom::point_in_region(region, z)) continue;
      if (geom::distance_to_contour(contour, z) < 1e-7) continue;
      ++checked;
      if (geom::winding_number(contour, z, 1e-9, config.quad_tol) != 1) ++mismatches;
    }
    // hole interiors
    for (int i = 0; i < 100; ++i) {
      const auto& h = region.holes[rng.next_below(region.holes.size())];
      if (std::abs(h.center - region.outer.center) >= region.outer.radius) continue;
      if (geom::distance_to_contour(contour, h.center) < 1e-9) continue;
      if (geom::winding_number(contour, h.center, 1e-9, config.quad_tol) != 0) ++mismatches;
    }
    // exterior
    for (int i = 0; i < 100; ++i) {
      const double a = geom::kTau * rng.next_double();
      const double r = region.outer.radius * (1.05 + rng.next_double());
      const Complex z = region.outer.center + r * Complex(std::cos(a), std::sin(a));
      if (geom::distance_to_contour(contour, z) < 1e-7) continue;
      if (geom::winding_number(contour, z, 1e-9, config.quad_tol) != 0) ++mismatches;
    }
    t.commit({0, 0}, {static_cast<double>(mismatches), 0}, mismatches, 0.0, mismatches == 0);
  }

  // closed-contour exactness for random polynomials
  {
    RowTimer t(ledger, "polynomial_exactness", "geometry",
               "n=" + std::to_string(n_max) + ";degree<=6");
    const auto contour = measure::truncated_contour(plan, n_max);
    util::SplitMix64 rng(util::mix_seed(config.seed, 0x901));
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<Complex> coeffs;
      const int deg = rng.next_int(0, 6);
      for (int k = 0; k <= deg; ++k) {
        coeffs.emplace_back(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
      }
      auto r = measure::contour_integral(polynomial(coeffs), contour, config.quad_tol);
      worst = std::max(worst, std::abs(r.value));
    }
    t.commit({0, 0}, {worst, 0}, worst, 1e-9, worst < 1e-9);
  }

  if (plan.mode == cheese::Mode::Thm14) {
    {
      RowTimer t(ledger, "target_clearance", "geometry", "");
      double min_sep = 1e308;
      for (const auto& h : plan.holes) {
        min_sep = std::min(min_sep, cheese::hole_separation(plan, h.disc));
      }
      t.commit({0, 0}, {min_sep, 0}, min_sep, 0.0, min_sep > 0.0);
    }
    RowTimer t(ledger, "peak_margin", "peak", "neighborhood=0.1;samples=100000");
    const double margin = fn::peak_margin(plan.full_region(), 0.1, 100000, plan.seed);
    t.commit({0, 0}, {margin, 0}, margin, 0.0, margin > 0.0);
  } else {
    const auto& lambda = *plan.lambda;
    {
      RowTimer t(ledger, "lambda_excluded_budget", "lambda", "");
      t.commit({plan.budget_r, 0}, {lambda.excluded_measure, 0},
               plan.budget_r - lambda.excluded_measure, 0.0,
               lambda.excluded_measure < plan.budget_r);
    }
    {
      RowTimer t(ledger, "lambda_measure_sampling", "lambda", "samples=1000000");
      const long n_samples = 1000000;
      std::vector<uint8_t> excluded(static_cast<size_t>(n_samples), 0);
      util::parallel_for(n_samples, [&](long i) {
        const double theta = geom::kTau * util::kronecker_1d(static_cast<uint64_t>(i), plan.seed);
        excluded[static_cast<size_t>(i)] = lambda.contains_angle(theta) ? 0 : 1;
      });
      long count = 0;
      for (uint8_t e : excluded) count += e;
      const double estimate =
          geom::kTau * static_cast<double>(count) / static_cast<double>(n_samples);
      const double err = std::abs(estimate - lambda.excluded_measure);
      t.commit({lambda.excluded_measure, 0}, {estimate, 0}, err, 1e-3, err < 1e-3);
    }
    {
      RowTimer t(ledger, "lambda_hole_clearance", "lambda", "");
      double min_sep = 1e308;
      for (const auto& h : plan.holes) {
        min_sep = std::min(min_sep, cheese::hole_separation(plan, h.disc));
      }
      t.commit({0, 0}, {min_sep, 0}, min_sep, 0.0, min_sep > 0.0);
    }
  }

  return ledger;
}

namespace {

// Random normal-form elements with small Gaussian-integer scalars; products
// and sums of these stay exact in double arithmetic.
cole::ExtensionElement random_element(const cole::ExtensionContext& ctx,
                                      const std::vector<cole::AtomId>& atom_pool,
                                      util::SplitMix64& rng) {
  const cole::Tower& tower = ctx.tower();
  cole::ExtensionElement e = tower.zero(1);
  const int n_terms = rng.next_int(1, 3);
  const int nf = ctx.family_size();
  for (int t = 0; t < n_terms; ++t) {
    cole::Mask mask = static_cast<cole::Mask>(rng.next_below(1ull << nf));
    std::vector<cole::Term> terms;
    cole::Term term;
    const int n_atoms = rng.next_int(0, 2);
    for (int a = 0; a < n_atoms; ++a) {
      term.atoms.push_back(atom_pool[rng.next_below(atom_pool.size())]);
    }
    std::sort(term.atoms.begin(), term.atoms.end());
    term.scalar = Complex(static_cast<double>(rng.next_int(-3, 3)),
                          static_cast<double>(rng.next_int(-3, 3)));
    terms.push_back(std::move(term));
    cole::ExtensionElement mono = tower.zero(1);
    cole::TowerElement coeff = tower.from_poly(cole::Poly::from_terms(std::move(terms)));
    if (!tower.is_zero(coeff)) mono.coeffs.emplace(mask, std::move(coeff));
    e = tower.add(e, mono);
  }
  return e;
}

cole::TowerElement random_tower_element(const cole::Tower& tower, int level,
                                        const std::vector<cole::AtomId>& atom_pool,
                                        util::SplitMix64& rng) {
  if (level == 0) {
    std::vector<cole::Term> terms;
    const int n_terms = rng.next_int(1, 2);
    for (int t = 0; t < n_terms; ++t) {
      cole::Term term;
      const int n_atoms = rng.next_int(0, 2);
      for (int a = 0; a < n_atoms; ++a) {
        term.atoms.push_back(atom_pool[rng.next_below(atom_pool.size())]);
      }
      std::sort(term.atoms.begin(), term.atoms.end());
      term.scalar = Complex(static_cast<double>(rng.next_int(-3, 3)),
                            static_cast<double>(rng.next_int(-3, 3)));
      terms.push_back(std::move(term));
    }
    return tower.from_poly(cole::Poly::from_terms(std::move(terms)));
  }
  cole::TowerElement e = tower.zero(level);
  const int nf = static_cast<int>(tower.family(level - 1).size());
  const int n_terms = rng.next_int(1, 2);
  for (int t = 0; t < n_terms; ++t) {
    const cole::Mask mask = static_cast<cole::Mask>(rng.next_below(1ull << nf));
    cole::TowerElement mono = tower.zero(level);
    cole::TowerElement coeff = random_tower_element(tower, level - 1, atom_pool, rng);
    if (!tower.is_zero(coeff)) mono.coeffs.emplace(mask, std::move(coeff));
    e = tower.add(e, mono);
  }
  return e;
}

}  // namespace

io::VerificationLedger run_cole_suite(const io::RunConfig& config,
                                      const cheese::CheesePlan& plan) {
  io::VerificationLedger ledger;
  const double rho2 = config.rho_pairs.front().second;
  auto [family, hull] = cole_family(plan, rho2, 10);
  cole::ExtensionContext ctx(family, hull);
  const cole::Tower& tower = ctx.tower();
  util::SplitMix64 rng(util::mix_seed(config.seed, 0xC01e));

  // atom pool: the family members plus a few plain functions
  std::vector<cole::AtomId> atom_pool;
  for (const auto& f : family) atom_pool.push_back(ctx.intern(f));
  atom_pool.push_back(ctx.intern(fn::identity()));
  atom_pool.push_back(ctx.intern(fn::constant({0.5, 0.25})));

  std::vector<Complex> base_samples;
  for (const Complex& z : fn::sample_region(plan.full_region(), 24, config.seed)) {
    if (base_samples.size() >= 12) break;
    base_samples.push_back(z);
  }

  {
    RowTimer t(ledger, "family_vanishes_on_hull", "cole",
               "members=" + std::to_string(family.size()) +
                   ";hull=" + std::to_string(hull.size()));
    double worst = 0.0;
    for (const auto& f : family) {
      for (Complex x : hull) worst = std::max(worst, std::abs(fn::eval(f, x)));
    }
    t.commit({0, 0}, {worst, 0}, worst, cole::kHullTol, worst <= cole::kHullTol);
  }

  {
    RowTimer t(ledger, "T_pistar_identity", "cole", "trials=20");
    int failures = 0;
    for (int i = 0; i < 20; ++i) {
      const fn::Fn f =
          fn::scaled(Complex(static_cast<double>(rng.next_int(-3, 3)), 1.0), fn::identity());
      const auto lifted = ctx.pistar(f);
      if (!(ctx.T_poly(lifted) == cole::Poly::atom(ctx.intern(f)))) ++failures;
    }
    t.commit({0, 0}, {static_cast<double>(failures), 0}, failures, 0.0, failures == 0);
  }

  {
    RowTimer t(ledger, "T_kills_signed_monomials", "cole", "trials=30");
    int failures = 0;
    for (int i = 0; i < 30; ++i) {
      cole::Mask mask = 0;
      while (mask == 0) {
        mask = static_cast<cole::Mask>(rng.next_below(1ull << ctx.family_size()));
      }
      // pi*(g) p_{f_1} ... p_{f_r}, built through mul
      const auto g = tower.from_poly(cole::Poly::atom(atom_pool[rng.next_below(atom_pool.size())]));
      auto prod = tower.pistar_step(g);
      cole::Mask rest = mask;
      for (int bit = 0; rest != 0; ++bit, rest >>= 1) {
        if (rest & 1) prod = tower.mul(prod, ctx.generator(bit));
      }
      if (!tower.is_zero(tower.T_step(prod))) ++failures;
      if (prod.coeffs.size() > 1) ++failures;
    }
    t.commit({0, 0}, {static_cast<double>(failures), 0}, failures, 0.0, failures == 0);
  }

  {
    RowTimer t(ledger, "generator_square", "cole", "members=" + std::to_string(family.size()));
    int failures = 0;
    for (int i = 0; i < ctx.family_size(); ++i) {
      const auto h = ctx.generator(i);
      const auto square = tower.mul(h, h);
      const auto expected = tower.pistar_step(tower.family(0)[static_cast<size_t>(i)]);
      if (!tower.equal(square, expected)) ++failures;
    }
    t.commit({0, 0}, {static_cast<double>(failures), 0}, failures, 0.0, failures == 0);
  }

  {
    RowTimer t(ledger, "mul_associative_commutative", "cole", "trials=30");
    int failures = 0;
    for (int i = 0; i < 30; ++i) {
      const auto a = random_element(ctx, atom_pool, rng);
      const auto b = random_element(ctx, atom_pool, rng);
      const auto c = random_element(ctx, atom_pool, rng);
      if (!tower.equal(tower.mul(tower.mul(a, b), c), tower.mul(a, tower.mul(b, c)))) ++failures;
      if (!tower.equal(tower.mul(a, b), tower.mul(b, a))) ++failures;
    }
    t.commit({0, 0}, {static_cast<double>(failures), 0}, failures, 0.0, failures == 0);
  }

  {
    RowTimer t(ledger, "eval_respects_mul", "cole", "trials=20");
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto a = random_element(ctx, atom_pool, rng);
      const auto b = random_element(ctx, atom_pool, rng);
      const Complex x = base_samples[rng.next_below(base_samples.size())];
      cole::ExtensionPoint pt{x, {}};
      for (int k = 0; k < ctx.family_size(); ++k) {
        pt.signs.push_back(rng.next_below(2) == 0 ? +1 : -1);
      }
      const Complex lhs = ctx.eval_ext(ctx.mul(a, b), pt);
      const Complex rhs = ctx.eval_ext(a, pt) * ctx.eval_ext(b, pt);
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
    t.commit({0, 0}, {worst, 0}, worst, config.cole_tol, worst < config.cole_tol);
  }

  {
    RowTimer t(ledger, "fiber_average_equals_T", "cole",
               "sign_vectors=" + std::to_string(1ull << ctx.family_size()));
    double worst = 0.0;
    const size_t combos = size_t{1} << ctx.family_size();
    for (int trial = 0; trial < 6; ++trial) {
      const auto a = random_element(ctx, atom_pool, rng);
      const Complex x = base_samples[static_cast<size_t>(trial) % base_samples.size()];
      util::KahanSum sum;
      for (size_t bits = 0; bits < combos; ++bits) {
        cole::ExtensionPoint pt{x, std::vector<int>(static_cast<size_t>(ctx.family_size()), +1)};
        for (int k = 0; k < ctx.family_size(); ++k) {
          if (bits & (size_t{1} << k)) pt.signs[static_cast<size_t>(k)] = -1;
        }
        sum.add(ctx.eval_ext(a, pt));
      }
      const Complex average = sum.value() / static_cast<double>(combos);
      const Complex direct = ctx.T_poly(a).eval(tower.atoms(), x);
      worst = std::max(worst, std::abs(average - direct) / (1.0 + std::abs(direct)));
    }
    t.commit({0, 0}, {worst, 0}, worst, config.cole_tol, worst < config.cole_tol);
  }

  {
    RowTimer t(ledger, "fiber_sizes", "cole", "");
    const auto over_hull = ctx.fiber_of({1.0, 0.0});
    const auto generic = ctx.fiber_of({0.25, 0.1});
    const bool pass = over_hull.size() == 1 &&
                      generic.size() == (size_t{1} << ctx.family_size());
    t.commit({1, 0}, {static_cast<double>(over_hull.size()), 0},
             static_cast<double>(over_hull.size() - 1), 0.0, pass);
  }

  {
    RowTimer t(ledger, "multiplicativity_at_hull", "cole", "pairs=100");
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto a = random_element(ctx, atom_pool, rng);
      const auto b = random_element(ctx, atom_pool, rng);
      worst = std::max(worst, ctx.multiplicativity_residual(a, b));
    }
    t.commit({0, 0}, {worst, 0}, worst, config.cole_tol, worst < config.cole_tol);
  }

  {
    RowTimer t(ledger, "norm_contraction", "cole", "trials=100");
    int failures = 0;
    std::vector<Complex> small_samples(base_samples.begin(),
                                       base_samples.begin() + std::min<size_t>(6, base_samples.size()));
    for (int i = 0; i < 100; ++i) {
      const auto a = random_element(ctx, atom_pool, rng);
      if (!ctx.norm_contraction_check(a, small_samples)) ++failures;
    }
    t.commit({0, 0}, {static_cast<double>(failures), 0}, failures, 0.0, failures == 0);
  }

  // two-level tower
  {
    cole::AtomTable atoms;
    std::vector<cole::AtomId> pool;
    std::vector<cole::TowerElement> f0;
    cole::Tower t2(atoms, hull);
    for (int i = 0; i < 3; ++i) {
      const auto id = t2.atoms().intern(family[static_cast<size_t>(i)]);
      pool.push_back(id);
      f0.push_back(t2.from_poly(cole::Poly::atom(id)));
    }
    pool.push_back(t2.atoms().intern(fn::identity()));
    t2.extend(f0);
    // level-1 family drawn from the lifted ideal
    std::vector<cole::TowerElement> f1;
    {
      cole::TowerElement m1 = t2.zero(1);  // pi*(f0) p_0
      m1.coeffs.emplace(cole::Mask{1}, t2.from_poly(cole::Poly::atom(pool[0])));
      f1.push_back(m1);
      cole::TowerElement m2 = t2.zero(1);  // p_1 p_2
      m2.coeffs.emplace(cole::Mask{6}, t2.one(0));
      f1.push_back(m2);
      f1.push_back(t2.pistar_step(f0[1]));  // pi* of an ideal member
    }
    t2.extend(f1);

    {
      RowTimer t(ledger, "tower_T_composition", "tower", "trials=100");
      int failures = 0;
      auto t01 = cole::tower_T(t2, 0, 1);
      auto t12 = cole::tower_T(t2, 1, 2);
      auto t02 = cole::tower_T(t2, 0, 2);
      for (int i = 0; i < 100; ++i) {
        const auto x = random_tower_element(t2, 2, pool, rng);
        if (!t2.equal(t02(x), t01(t12(x)))) ++failures;
        if (!t2.equal(t2.T(x, 2), x)) ++failures;  // T_{alpha,alpha} = id
      }
      t.commit({0, 0}, {static_cast<double>(failures), 0}, failures, 0.0, failures == 0);
    }
    {
      RowTimer t(ledger, "tower_T_pistar_roundtrip", "tower", "trials=100");
      int failures = 0;
      auto p02 = cole::tower_pistar(t2, 0, 2);
      auto t02 = cole::tower_T(t2, 0, 2);
      for (int i = 0; i < 100; ++i) {
        const auto x = random_tower_element(t2, 0, pool, rng);
        if (!t2.equal(t02(p02(x)), x)) ++failures;
      }
      t.commit({0, 0}, {static_cast<double>(failures), 0}, failures, 0.0, failures == 0);
    }
    {
      RowTimer t(ledger, "tower_square_roots", "tower", "levels=2");
      int failures = 0;
      for (int level = 0; level < 2; ++level) {
        for (size_t i = 0; i < t2.family(level).size(); ++i) {
          try {
            const auto h = cole::square_root_check(t2, level, static_cast<int>(i));
            if (!t2.is_zero(t2.T_step(h))) ++failures;
          } catch (const std::exception&) {
            ++failures;
          }
        }
      }
      t.commit({0, 0}, {static_cast<double>(failures), 0}, failures, 0.0, failures == 0);
    }
    {
      RowTimer t(ledger, "tower_root_eval", "tower", "points<=1000");
      // eval(h, .)^2 must equal f(pi(.)) across fiber points
      double worst = 0.0;
      const auto h = t2.generator(0, 0);
      const auto& f = t2.family(0)[0];
      int counted = 0;
      for (size_t si = 0; si < base_samples.size() && counted < 1000; ++si) {
        for (const auto& pt : t2.fiber(base_samples[si])) {
          if (counted >= 1000) break;
          const Complex lhs = t2.eval(h, pt) * t2.eval(h, pt);
          const Complex rhs = t2.eval(f, pt);
          worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
          ++counted;
        }
      }
      t.commit({0, 0}, {worst, 0}, worst, config.cole_tol, worst < config.cole_tol);
    }
    {
      RowTimer t(ledger, "tower_singleton_fiber", "tower", "");
      const auto fiber = t2.fiber({1.0, 0.0});
      t.commit({1, 0}, {static_cast<double>(fiber.size()), 0},
               static_cast<double>(fiber.size()) - 1.0, 0.0, fiber.size() == 1);
    }
  }

  return ledger;
}

bool cmd_build(const io::RunConfig& config) {
  const cheese::CheesePlan plan = cheese::build_plan(config.build_options());
  fs::create_directories(config.out_dir);
  io::save_plan(plan, config.out_dir + "/plan.txt");
  std::ofstream svg(config.out_dir + "/plan.svg", std::ios::binary);
  if (!svg) throw io::ConfigError(config.out_dir + "/plan.svg", 0, "cannot write rendering");
  svg << io::render_plan_svg(plan);
  std::printf("plan: %zu holes, radius sum %s < %s\n", plan.holes.size(),
              util::fmt_g17(plan.radius_sum()).c_str(), util::fmt_g17(plan.budget_r).c_str());
  return true;
}

namespace {

bool finish_verify(const io::VerificationLedger& ledger, const std::string& path) {
  io::save_ledger(ledger, path);
  for (const auto& row : ledger.rows()) {
    std::printf("[%s] %s/%s residual=%s tol=%s\n", row.pass ? "PASS" : "FAIL",
                row.suite.c_str(), row.test_id.c_str(), util::fmt_g17(row.residual).c_str(),
                util::fmt_g17(row.tolerance).c_str());
  }
  std::printf("%zu/%zu checks passed; ledger written to %s\n", ledger.pass_count(),
              ledger.rows().size(), path.c_str());
  return ledger.all_pass();
}

}  // namespace

bool cmd_verify_ideals(const io::RunConfig& config, const std::string& plan_path) {
  const std::string path = plan_path.empty() ? config.out_dir + "/plan.txt" : plan_path;
  const cheese::CheesePlan plan = io::load_plan(path);
  fs::create_directories(config.out_dir);
  return finish_verify(run_ideals_suite(config, plan), config.out_dir + "/ideals_ledger.csv");
}

bool cmd_verify_cole(const io::RunConfig& config, const std::string& plan_path) {
  const std::string path = plan_path.empty() ? config.out_dir + "/plan.txt" : plan_path;
  const cheese::CheesePlan plan = io::load_plan(path);
  fs::create_directories(config.out_dir);
  return finish_verify(run_cole_suite(config, plan), config.out_dir + "/cole_ledger.csv");
}

bool cmd_report(const std::vector<std::string>& ledger_paths, const std::string& out_dir) {
  if (ledger_paths.empty()) {
    throw io::ConfigError("<args>", 0, "report requires at least one ledger");
  }
  std::map<std::string, std::pair<size_t, size_t>> by_suite;  // suite -> (pass, total)
  std::vector<std::pair<int, double>> convergence;
  std::string convergence_key;

  for (const auto& path : ledger_paths) {
    const auto ledger = io::load_ledger(path);
    for (const auto& row : ledger.rows()) {
      auto& [pass, total] = by_suite[row.suite];
      pass += row.pass ? 1 : 0;
      total += 1;
      if (row.suite == "separation" && row.test_id.rfind("separation_n", 0) == 0) {
        const std::string key = param_value(row.params, "rho1") + "/" +
                                param_value(row.params, "rho2");
        const std::string n_str = param_value(row.params, "n");
        if (convergence_key.empty()) convergence_key = key;
        if (key == convergence_key && !n_str.empty()) {
          convergence.emplace_back(std::stoi(n_str), row.residual);
        }
      }
    }
  }

  fs::create_directories(out_dir);
  std::ostringstream summary;
  summary << "suite,passed,total\n";
  bool all_pass = true;
  for (const auto& [suite, counts] : by_suite) {
    summary << suite << ',' << counts.first << ',' << counts.second << "\n";
    all_pass = all_pass && counts.first == counts.second;
  }
  {
    std::ofstream out(out_dir + "/summary.csv", std::ios::binary);
    if (!out) throw io::ConfigError(out_dir + "/summary.csv", 0, "cannot write summary");
    out << summary.str();
  }
  std::sort(convergence.begin(), convergence.end());
  {
    std::ofstream out(out_dir + "/convergence.svg", std::ios::binary);
    if (!out) throw io::ConfigError(out_dir + "/convergence.svg", 0, "cannot write plot");
    out << io::convergence_plot_svg(convergence, "separation residual (rho pair " +
                                                     convergence_key + ")");
  }
  std::printf("%s", summary.str().c_str());
  std::printf("report written to %s\n", out_dir.c_str());
  return all_pass;
}

}  // namespace cheeselab::suites
