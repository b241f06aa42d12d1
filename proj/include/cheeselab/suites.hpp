#pragma once

#include <string>
#include <vector>

#include "cheeselab/cheese.hpp"
#include "cheeselab/config.hpp"
#include "cheeselab/function.hpp"
#include "cheeselab/ledger.hpp"
#include "cheeselab/util.hpp"

namespace cheeselab::suites {

using Complex = std::complex<double>;

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The §-by-§ verification suites shared by the CLI and the acceptance tests.
io::VerificationLedger run_ideals_suite(const io::RunConfig& config,
                                        const cheese::CheesePlan& plan);
io::VerificationLedger run_cole_suite(const io::RunConfig& config, const cheese::CheesePlan& plan);

// Deterministic rational test functions with poles at hole centers of the
// truncated region.
fn::RationalFunction random_hole_rational(const cheese::CheesePlan& plan, int n,
                                          util::SplitMix64& rng);

// The root-adjunction family F_{rho2}.(rational basis), vanishing at 1 in
// thm14 mode and on sampled surviving-arc points in thm15 mode; second return
// is the hull.
std::pair<std::vector<fn::Fn>, std::vector<Complex>> cole_family(const cheese::CheesePlan& plan,
                                                                 double rho2, int members);

// CLI command bodies. They throw io::ConfigError for configuration/IO
// problems and cheese::PlacementError for build failures; a false return
// means a verification failure (exit code 1).
bool cmd_build(const io::RunConfig& config);
bool cmd_verify_ideals(const io::RunConfig& config, const std::string& plan_path);
bool cmd_verify_cole(const io::RunConfig& config, const std::string& plan_path);
bool cmd_report(const std::vector<std::string>& ledger_paths, const std::string& out_dir);

}  // namespace cheeselab::suites
