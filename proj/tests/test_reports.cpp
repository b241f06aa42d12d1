#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cheeselab/config.hpp"
#include "cheeselab/ledger.hpp"
#include "cheeselab/planio.hpp"
#include "cheeselab/suites.hpp"
#include "cheeselab/svg.hpp"
#include "cheeselab/util.hpp"

using namespace cheeselab;

namespace {

io::RunConfig tiny_config(cheese::Mode mode) {
  io::RunConfig cfg;
  cfg.mode = mode;
  cfg.covers = 6;
  cfg.budget = mode == cheese::Mode::Thm14 ? 1.0 : 0.5;
  cfg.discs_per_family = 3;
  cfg.s_min = mode == cheese::Mode::Thm14 ? 0.05 : 0.02;
  cfg.truncations = {3, 6};
  cfg.rho_pairs = {{0.0, 1.0}};
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const auto cfg = io::parse_config("mode = thm14\n", "<mem>");
  CHECK(cfg.mode == cheese::Mode::Thm14);
  CHECK(cfg.quad_tol == 1e-10);
  CHECK(cfg.s_min == 0.02);
  CHECK(cfg.pass_tol == 1e-8);
  CHECK(cfg.covers == 12);
  CHECK(cfg.out_dir == "out");
}

TEST_CASE("config rejections carry line numbers") {
  CHECK_THROWS_AS(io::parse_config("covers = 5\n", "<mem>"), io::ConfigError);

  try {
    io::parse_config("mode = thm14\nwhatsthis = 3\n", "cfg.txt");
    FAIL("unknown key accepted");
  } catch (const io::ConfigError& e) {
    CHECK(e.line_number == 2);
    CHECK(std::string(e.what()).find("cfg.txt:2") != std::string::npos);
    CHECK(std::string(e.what()).find("whatsthis") != std::string::npos);
  }

  // rho1 >= rho2 violates the separation hypothesis
  CHECK_THROWS_AS(io::parse_config("mode = thm14\nrho_pairs = (2,1)\n", "<mem>"),
                  io::ConfigError);
  CHECK_THROWS_AS(io::parse_config("mode = thm14\nrho_pairs = (1,1)\n", "<mem>"),
                  io::ConfigError);
  CHECK_THROWS_AS(io::parse_config("mode = nope\n", "<mem>"), io::ConfigError);
  CHECK_THROWS_AS(io::parse_config("mode = thm14\nquad_tol = 0\n", "<mem>"), io::ConfigError);
}

TEST_CASE("config round trip of every key") {
  const std::string text =
      "mode = thm15\ncovers = 9\nbudget = 0.25\ndiscs_per_family = 4\ns_min = 0.03\n"
      "mesh = 0.5\nrho_pairs = (0,1) (0.5,2.5)\nnu = 0 2\ntruncations = 4 8\n"
      "quad_tol = 1e-9\npass_tol = 1e-7\ncole_tol = 1e-11\nrho_max = 5\nseed = 99\nout = here\n";
  const auto cfg = io::parse_config(text, "<mem>");
  CHECK(cfg.mode == cheese::Mode::Thm15);
  CHECK(cfg.covers == 9);
  CHECK(cfg.budget == 0.25);
  CHECK(cfg.discs_per_family == 4);
  CHECK(cfg.s_min == 0.03);
  CHECK(cfg.mesh == 0.5);
  REQUIRE(cfg.rho_pairs.size() == 2);
  CHECK(cfg.rho_pairs[1].second == 2.5);
  CHECK(cfg.nu == std::vector<double>{0.0, 2.0});
  CHECK(cfg.truncations == std::vector<int>{4, 8});
  CHECK(cfg.quad_tol == 1e-9);
  CHECK(cfg.pass_tol == 1e-7);
  CHECK(cfg.cole_tol == 1e-11);
  CHECK(cfg.rho_max == 5.0);
  CHECK(cfg.seed == 99);
  CHECK(cfg.out_dir == "here");
}

TEST_CASE("plan serialization round trips bit-exactly") {
  const auto cfg = tiny_config(cheese::Mode::Thm14);
  const auto plan = cheese::build_plan(cfg.build_options());
  const std::string text = io::serialize_plan(plan);
  const auto reloaded = io::parse_plan(text, "<mem>");
  CHECK(io::serialize_plan(reloaded) == text);

  const auto cfg15 = tiny_config(cheese::Mode::Thm15);
  const auto plan15 = cheese::build_plan(cfg15.build_options());
  const std::string text15 = io::serialize_plan(plan15);
  CHECK(io::serialize_plan(io::parse_plan(text15, "<mem>")) == text15);
}

TEST_CASE("plan loader validates invariants") {
  const auto plan = cheese::build_plan(tiny_config(cheese::Mode::Thm14).build_options());
  std::string text = io::serialize_plan(plan);
  // corrupt: make a hole contain the point 1
  text += "hole = " + std::to_string(plan.holes.size() + 1) +
          " 1 9 mckissick 1 0 0.25\n";
  CHECK_THROWS_AS(io::parse_plan(text, "<mem>"), io::ConfigError);

  CHECK_THROWS_AS(io::parse_plan("format = 1\nmode = thm14\n", "<mem>"), io::ConfigError);
  CHECK_THROWS_AS(io::parse_plan("format = 1\noops = 1\n", "<mem>"), io::ConfigError);
}

TEST_CASE("ledger CSV round trips") {
  io::VerificationLedger ledger;
  util::SplitMix64 rng(5);
  for (int i = 0; i < 25; ++i) {
    io::LedgerRow row;
    row.test_id = "row_" + std::to_string(i);
    row.suite = i % 2 ? "separation" : "budget";
    row.params = "alpha=" + util::fmt_g17(rng.next_double()) + ";k=" + std::to_string(i);
    row.expected = {rng.next_double() * 8 - 4, rng.next_double() * 8 - 4};
    row.observed = {rng.next_double() * 8 - 4, rng.next_double() * 8 - 4};
    row.residual = rng.next_double() * 1e-7;
    row.tolerance = 1e-8;
    row.pass = row.residual < row.tolerance;
    row.millis = static_cast<long>(rng.next_below(10000));
    ledger.append(row);
  }
  const std::string csv = io::emit_csv(ledger);
  const auto parsed = io::parse_csv(csv, "<mem>");
  REQUIRE(parsed.rows().size() == ledger.rows().size());
  for (size_t i = 0; i < parsed.rows().size(); ++i) {
    const auto& a = ledger.rows()[i];
    const auto& b = parsed.rows()[i];
    CHECK(a.test_id == b.test_id);
    CHECK(a.suite == b.suite);
    CHECK(a.params == b.params);
    CHECK(a.expected == b.expected);
    CHECK(a.observed == b.observed);
    CHECK(a.residual == b.residual);
    CHECK(a.tolerance == b.tolerance);
    CHECK(a.pass == b.pass);
    CHECK(a.millis == b.millis);
  }

  // commas would break the format and are refused at append time
  io::LedgerRow bad;
  bad.test_id = "a,b";
  CHECK_THROWS_AS(ledger.append(bad), std::invalid_argument);
}

TEST_CASE("plan SVG rendering") {
  const auto plan = cheese::build_plan(tiny_config(cheese::Mode::Thm14).build_options());
  const std::string svg = io::render_plan_svg(plan);
  CHECK(svg.find("<?xml") == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  // every hole is drawn
  size_t circles = 0;
  for (size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos) ++circles;
  CHECK(circles >= plan.holes.size());
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

  const auto plan15 = cheese::build_plan(tiny_config(cheese::Mode::Thm15).build_options());
  const std::string svg15 = io::render_plan_svg(plan15);
  CHECK(svg15.find("<path") != std::string::npos);  // the surviving arcs
}

TEST_CASE("convergence plot") {
  const std::string svg =
      io::convergence_plot_svg({{5, 1e-9}, {10, 2e-10}, {20, 3e-11}}, "residual");
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("residual") != std::string::npos);
  // empty input still yields a document
  CHECK(io::convergence_plot_svg({}, "nothing").find("<svg") != std::string::npos);
}

TEST_CASE("ideals suite passes on a small thm14 plan") {
  const auto cfg = tiny_config(cheese::Mode::Thm14);
  const auto plan = cheese::build_plan(cfg.build_options());
  const auto ledger = suites::run_ideals_suite(cfg, plan);
  for (const auto& row : ledger.rows()) {
    INFO(row.suite, "/", row.test_id, " residual=", row.residual);
    CHECK(row.pass);
  }
}

TEST_CASE("cole suite passes on a small thm15 plan") {
  const auto cfg = tiny_config(cheese::Mode::Thm15);
  const auto plan = cheese::build_plan(cfg.build_options());
  const auto ledger = suites::run_cole_suite(cfg, plan);
  for (const auto& row : ledger.rows()) {
    INFO(row.suite, "/", row.test_id, " residual=", row.residual);
    CHECK(row.pass);
  }
}

TEST_CASE("command bodies write artifacts and exit cleanly") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cheeselab_cmd_test";
  fs::remove_all(dir);

  auto cfg = tiny_config(cheese::Mode::Thm14);
  cfg.out_dir = (dir / "out").string();

  CHECK(suites::cmd_build(cfg));
  CHECK(fs::exists(dir / "out" / "plan.txt"));
  CHECK(fs::exists(dir / "out" / "plan.svg"));

  // rebuilding produces byte-identical artifacts
  const auto first = io::serialize_plan(io::load_plan((dir / "out" / "plan.txt").string()));
  CHECK(suites::cmd_build(cfg));
  const auto second = io::serialize_plan(io::load_plan((dir / "out" / "plan.txt").string()));
  CHECK(first == second);

  CHECK(suites::cmd_verify_ideals(cfg, ""));
  CHECK(fs::exists(dir / "out" / "ideals_ledger.csv"));
  CHECK(suites::cmd_verify_cole(cfg, ""));
  CHECK(fs::exists(dir / "out" / "cole_ledger.csv"));

  CHECK(suites::cmd_report({(dir / "out" / "ideals_ledger.csv").string(),
                            (dir / "out" / "cole_ledger.csv").string()},
                           (dir / "report").string()));
  CHECK(fs::exists(dir / "report" / "summary.csv"));
  CHECK(fs::exists(dir / "report" / "convergence.svg"));

  CHECK_THROWS_AS(suites::cmd_report({}, (dir / "report").string()), io::ConfigError);
  fs::remove_all(dir);
}
