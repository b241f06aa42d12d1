// Acceptance runner: each criterion prints one [PASS]/[FAIL] line; the
// process exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cheeselab/cheese.hpp"
#include "cheeselab/cole.hpp"
#include "cheeselab/config.hpp"
#include "cheeselab/function.hpp"
#include "cheeselab/measure.hpp"
#include "cheeselab/suites.hpp"
#include "cheeselab/util.hpp"

using namespace cheeselab;
using fn::Complex;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  int id;
  std::string label;
  std::function<bool(std::string&)> run;
};

cheese::CheesePlan thm14_plan() {
  cheese::BuildOptions opt;
  opt.mode = cheese::Mode::Thm14;
  opt.covers = 12;
  opt.budget = 1.0;
  opt.discs_per_family = 5;
  opt.s_min = 0.05;
  opt.mesh = 1.0;
  opt.seed = 7;
  return cheese::build_plan(opt);
}

cheese::CheesePlan thm15_plan() {
  cheese::BuildOptions opt;
  opt.mode = cheese::Mode::Thm15;
  opt.covers = 8;
  opt.budget = 0.5;
  opt.discs_per_family = 5;
  opt.s_min = 0.02;
  opt.mesh = 1.0;
  opt.seed = 7;
  return cheese::build_plan(opt);
}

std::string fmt(double x) { return util::fmt_g17(x); }

}  // namespace

int main() {
  const auto plan14 = thm14_plan();
  const auto plan15 = thm15_plan();

  std::vector<Criterion> criteria;

  criteria.push_back({1, "separation identity at truncation 10", [&](std::string& detail) {
    if (plan14.holes.size() < 30) {
      detail = "plan has fewer than 30 holes";
      return false;
    }
    const auto start = Clock::now();
    bool ok = true;
    double worst = 0.0;
    for (const auto& [r1, r2] :
         std::vector<std::pair<double, double>>{{0, 1}, {1, 2}, {0.5, 2.5}}) {
      const auto r = measure::separation_test(plan14, 10, r1, r2, 1e-8);
      ok = ok && r.pass;
      worst = std::max(worst, r.residual);
    }
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count() /
        1000.0;
    detail = "worst relative residual " + fmt(worst) + ", " + fmt(seconds) + " s";
    return ok && seconds < 30.0;
  }});

  criteria.push_back(
      {2, "residue series oracle matches the closed form", [&](std::string& detail) {
         double worst = 0.0;
         for (double c : {-0.25, -1.0, -2.0}) {
           const Complex series = Complex{0, geom::kTau} * measure::residue_series_oracle(c);
           const Complex closed = Complex{0, 2 * geom::kTau} * c * c * std::exp(c);
           worst = std::max(worst, std::abs(series - closed) / std::abs(closed));
         }
         detail = "worst relative difference " + fmt(worst);
         return worst < 1e-12;
       }});

  criteria.push_back({3, "Cauchy annihilation for 10 random rational functions",
                      [&](std::string& detail) {
                        util::SplitMix64 rng(util::mix_seed(7, 0xACC3));
                        bool ok = true;
                        double worst_ratio = 0.0;
                        for (int i = 0; i < 10; ++i) {
                          const auto g = suites::random_hole_rational(plan14, 10, rng);
                          const auto r = measure::annihilation_test(plan14, 10, 1.0, g, 1e-8);
                          ok = ok && r.pass;
                          worst_ratio = std::max(worst_ratio, r.residual / r.threshold);
                        }
                        detail = "worst residual/threshold " + fmt(worst_ratio);
                        return ok;
                      }});

  criteria.push_back({4, "deformation invariance across truncations 5, 10, 20",
                      [&](std::string& detail) {
                        const auto r = measure::deformation_check(plan14, {5, 10, 20}, 0.0, 1.0,
                                                                  1e-8);
                        detail = "max pairwise relative spread " + fmt(r.max_relative_spread);
                        return r.pass;
                      }});

  criteria.push_back({5, "total variation bound with positive margin", [&](std::string& detail) {
    double min_margin = 1e308;
    for (const auto* plan : {&plan14, &plan15}) {
      const int n = 10;
      for (double rho2 : {0.5, 1.0, 2.0}) {
        auto mu = measure::make_measure(measure::truncated_contour(*plan, n), rho2, 1e-10);
        const double tv = measure::total_variation(mu);
        double weighted = 0.0;
        for (int k = 0; k < n; ++k) {
          const auto& h = plan->holes[static_cast<size_t>(k)].disc;
          weighted += h.radius * std::exp(2 * rho2 / geom::distance_to_point(h, {1, 0}));
        }
        min_margin = std::min(min_margin, geom::kTau * (weighted + 2.0) - tv);
      }
    }
    detail = "min margin " + fmt(min_margin);
    return min_margin > 0.0;
  }});

  criteria.push_back({6, "budget suite margins for nu in {0, 1, 3}", [&](std::string& detail) {
    double min_margin = 1e308;
    bool ok = true;
    for (double nu : {0.0, 1.0, 3.0}) {
      const auto report = cheese::verify_budgets(plan14, nu);
      ok = ok && report.all_pass;
      for (const auto& check : report.checks) {
        min_margin = std::min(min_margin, check.margin);
        ok = ok && check.margin > 0.0;
      }
    }
    detail = "min margin " + fmt(min_margin);
    return ok;
  }});

  criteria.push_back({7, "surviving boundary arcs of the thm15 plan", [&](std::string& detail) {
    const auto& lambda = *plan15.lambda;
    if (!(lambda.excluded_measure < plan15.budget_r)) {
      detail = "excluded length reaches the budget";
      return false;
    }
    const long samples = 1000000;
    long excluded = 0;
    for (long i = 0; i < samples; ++i) {
      const double theta = geom::kTau * util::kronecker_1d(static_cast<uint64_t>(i), 7);
      if (!lambda.contains_angle(theta)) ++excluded;
    }
    const double estimate = geom::kTau * static_cast<double>(excluded) / samples;
    const double err = std::abs(estimate - lambda.excluded_measure);
    double min_sep = 1e308;
    for (const auto& h : plan15.holes) {
      min_sep = std::min(min_sep, cheese::hole_separation(plan15, h.disc));
    }
    detail = "sampling error " + fmt(err) + ", min hole clearance " + fmt(min_sep);
    return err < 1e-3 && min_sep > 0.0;
  }});

  criteria.push_back({8, "winding certification and polynomial exactness",
                      [&](std::string& detail) {
    int mismatches = 0;
    double worst_poly = 0.0;
    for (const auto* plan : {&plan14, &plan15}) {
      const auto contour = measure::truncated_contour(*plan, 10);
      const auto& region = contour.region;
      util::SplitMix64 rng(util::mix_seed(plan->seed, 0x8));
      int interior = 0;
      for (uint64_t i = 0; interior < 100 && i < 200000; ++i) {
        auto [u, v] = util::kronecker_2d(i, 13);
        const Complex z = region.outer.center + region.outer.radius * std::sqrt(u) *
                                                    std::polar(1.0, geom::kTau * v);
        if (!geom::point_in_region(region, z)) continue;
        if (geom::distance_to_contour(contour, z) < 1e-7) continue;
        ++interior;
        if (geom::winding_number(contour, z) != 1) ++mismatches;
      }
      for (int i = 0; i < 100; ++i) {
        const auto& h = region.holes[rng.next_below(region.holes.size())];
        if (std::abs(h.center - region.outer.center) >= region.outer.radius) continue;
        if (geom::distance_to_contour(contour, h.center) < 1e-9) continue;
        if (geom::winding_number(contour, h.center) != 0) ++mismatches;
      }
      for (int i = 0; i < 100; ++i) {
        const Complex z = region.outer.center +
                          std::polar(region.outer.radius * (1.05 + rng.next_double()),
                                     geom::kTau * rng.next_double());
        if (geom::distance_to_contour(contour, z) < 1e-7) continue;
        if (geom::winding_number(contour, z) != 0) ++mismatches;
      }
      for (int trial = 0; trial < 8; ++trial) {
        fn::Fn acc = fn::constant({0, 0});
        fn::Fn power = fn::constant({1, 0});
        const int deg = rng.next_int(0, 6);
        for (int k = 0; k <= deg; ++k) {
          acc = acc + fn::scaled({2 * rng.next_double() - 1, 2 * rng.next_double() - 1}, power);
          power = power * fn::identity();
        }
        worst_poly = std::max(worst_poly,
                              std::abs(measure::contour_integral(acc, contour, 1e-10).value));
      }
    }
    detail = std::to_string(mismatches) + " winding mismatches, worst polynomial residual " +
             fmt(worst_poly);
    return mismatches == 0 && worst_poly < 1e-9;
  }});

  criteria.push_back({9, "root-extension operator suite", [&](std::string& detail) {
    io::RunConfig cfg;
    cfg.mode = cheese::Mode::Thm14;
    cfg.rho_pairs = {{0.0, 1.0}};
    cfg.seed = 7;
    cfg.cole_tol = 1e-12;
    const auto ledger = suites::run_cole_suite(cfg, plan14);
    size_t failed = 0;
    double worst = 0.0;
    for (const auto& row : ledger.rows()) {
      if (!row.pass) ++failed;
      if (row.tolerance > 0.0) worst = std::max(worst, row.residual);
    }
    detail = std::to_string(ledger.rows().size() - failed) + "/" +
             std::to_string(ledger.rows().size()) + " rows, worst tolerated residual " +
             fmt(worst);
    return failed == 0;
  }});

  criteria.push_back({10, "peak margin outside the excluded neighborhood",
                      [&](std::string& detail) {
                        const double margin =
                            fn::peak_margin(plan14.full_region(), 0.1, 100000, plan14.seed);
                        detail = "margin " + fmt(margin);
                        return margin > 0.0;
                      }});

  int failures = 0;
  for (auto& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
