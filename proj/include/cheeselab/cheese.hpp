#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheeselab/geometry.hpp"

namespace cheeselab::cheese {

using Complex = std::complex<double>;

enum class Mode { Thm14, Thm15 };

enum class CoverKind { NearTarget, BoundaryCentered, Interior };

struct CoverDisc {
  int index = 0;  // 1-based position in the covering family
  geom::Disc disc{Complex{0, 0}, 1.0};
  CoverKind kind = CoverKind::Interior;
};

enum class FamilyType { McKissick, StrongRegularity };

struct Hole {
  geom::Disc disc{Complex{0, 0}, 1.0};
  int cover_index = 0;   // wave-local index n of the family that produced it
  int family_index = 0;  // k within the family, 1-based
  FamilyType family = FamilyType::McKissick;
};

// Closed arcs of the unit circle kept inside the cheese, with the total
// length of the excluded complement.
struct LambdaSet {
  std::vector<geom::AngularInterval> arcs;
  double excluded_measure = 0.0;

  bool contains_angle(double theta) const;
  double distance_to_point(Complex p) const;
  double distance_to_disc(const geom::Disc& d) const;
};

struct FamilyRecord {
  FamilyType type = FamilyType::McKissick;
  int index = 0;  // wave-local n, 1-based
  geom::Disc working_disc{Complex{0, 0}, 1.0};
  double gamma = 0.0;  // thm15 boundary covers only
  double delta = 0.0;  // distance from the working annulus (or disc) to the target
  double epsilon = 0.0;
  double eps_used = 0.0;
  int first_hole = -1;  // index into CheesePlan::holes, -1 when skipped
  int hole_count = 0;
  std::string skip_reason;  // empty when placed

  bool skipped() const { return !skip_reason.empty(); }
};

struct CheesePlan {
  Mode mode = Mode::Thm14;
  geom::Disc outer{Complex{0, 0}, 1.0};
  std::vector<Hole> holes;  // enumeration D_1, D_2, ...
  std::vector<CoverDisc> covers;
  std::vector<FamilyRecord> families;
  double budget_r = 1.0;
  int truncation_covers = 0;
  double rho_max = 0.0;
  double s_min = 0.02;
  double mesh = 1.0;
  int discs_per_family = 5;
  uint64_t seed = 1;
  std::optional<LambdaSet> lambda;

  double radius_sum() const;
  geom::Disc truncated_outer(int n) const;  // closed disc of radius 1 + 1/n
  std::vector<geom::Disc> truncated_holes(int n) const;
  geom::Region truncated_region(int n) const;
  geom::Region full_region() const;
};

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// First N discs of the deterministic covering family for the given mode.
std::vector<CoverDisc> cover_family(Mode mode, int count, double mesh);

// min{ 2^-(n+1) r, 2^-n exp(-n/delta_n) }
double epsilon_budget(int n, double r, double delta_n);

// Infimum distance from the closed annulus { r_inner <= |z - a| <= r_outer }
// to the target; throws InvalidPlacementError when the distance vanishes.
double annulus_distance(Complex a, double r_outer, double r_inner, Complex target);
double annulus_distance(Complex a, double r_outer, double r_inner, const LambdaSet& target);

// m discs of radius eps/(2m), centers equally spaced on |z - a| = r - eps/2;
// all contained in the open shell { r - eps < |z - a| < r }, radius sum eps/2.
std::vector<geom::Disc> place_mckissick_family(const CoverDisc& cover, double eps, int m,
                                               double phase = 0.0);

// Kept arcs of the unit circle after removing, for each boundary-centered
// cover, the band { z on the unit circle : r_n - gamma_n < |z - a_n| < r_n + gamma_n }.
LambdaSet lambda_arcs(const std::vector<double>& gammas,
                      const std::vector<CoverDisc>& boundary_covers);

struct BuildOptions {
  Mode mode = Mode::Thm14;
  int covers = 12;           // N
  double budget = 1.0;       // r
  int discs_per_family = 5;  // m
  double s_min = 0.02;
  double mesh = 1.0;
  double rho_max = 6.0;
  uint64_t seed = 1;
};

CheesePlan build_plan(const BuildOptions& options);

// Distance from a hole to the target of the construction: the point 1 in
// thm14 mode, the arc set Lambda in thm15 mode.
double hole_separation(const CheesePlan& plan, const geom::Disc& hole);

struct BudgetCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
};

struct BudgetReport {
  std::vector<BudgetCheck> checks;
  bool all_pass = true;
  std::vector<std::string> violations;
};

// (i) sum of hole radii < r; (ii) per-family weighted sums below
// eps_n exp(nu/delta_n); (iii) families with n > nu below 2^-n.
BudgetReport verify_budgets(const CheesePlan& plan, double nu);

}  // namespace cheeselab::cheese
