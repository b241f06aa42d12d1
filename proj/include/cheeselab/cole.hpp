#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "cheeselab/function.hpp"

namespace cheeselab::cole {

using Complex = std::complex<double>;
using AtomId = uint32_t;
using Mask = uint32_t;

inline constexpr int kMaxFamilySize = 12;   // 2^|F| sign vectors must stay enumerable
inline constexpr int kMaxTowerDepth = 4;
inline constexpr double kHullTol = 1e-12;

class FamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Registry of base functions; atom ids give coefficient polynomials a
// canonical sorted form.
class AtomTable {
 public:
  AtomId intern(const fn::Fn& f);
  const fn::Fn& at(AtomId id) const;
  size_t size() const { return atoms_.size(); }

 private:
  std::vector<fn::Fn> atoms_;
  std::map<const fn::Expr*, AtomId> index_;
};

struct Term {
  std::vector<AtomId> atoms;  // sorted multiset
  Complex scalar{1.0, 0.0};
};

// Formal sum of scalar-weighted atom products. Addition and multiplication
// keep terms sorted and merge equal keys, so algebraically equal expressions
// built from integer scalars compare exactly.
class Poly {
 public:
  static Poly zero() { return Poly{}; }
  static Poly constant(Complex c);
  static Poly one() { return constant({1.0, 0.0}); }
  static Poly atom(AtomId id);
  static Poly from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  Complex eval(const AtomTable& atoms, Complex z) const;
  fn::Fn to_fn(const AtomTable& atoms) const;

 private:
  std::vector<Term> terms_;
};

Poly add(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly negate(const Poly& a);
bool operator==(const Poly& a, const Poly& b);

// Normal-form element of an iterated root extension: at level 0 a Poly, at
// level l >= 1 a map from subset masks of the level-(l-1) family to
// level-(l-1) coefficients (absent mask = zero coefficient; the empty-mask
// coefficient is the fiber average).
struct TowerElement {
  int level = 0;
  Poly base;
  std::map<Mask, TowerElement> coeffs;
};

struct TowerPoint {
  Complex x;
  std::vector<std::vector<int>> signs;  // signs[l][i] in {-1, +1}
};

class Tower {
 public:
  Tower(AtomTable atoms, std::vector<Complex> hull);

  int depth() const { return static_cast<int>(families_.size()); }
  AtomTable& atoms() { return atoms_; }
  const AtomTable& atoms() const { return atoms_; }
  const std::vector<Complex>& hull() const { return hull_; }
  const std::vector<TowerElement>& family(int level) const;

  // Adjoin square roots of the given level-depth() elements. Every member
  // must have T-image vanishing on the hull (membership in the lifted ideal).
  void extend(std::vector<TowerElement> family);

  TowerElement zero(int level) const;
  TowerElement constant(int level, Complex c) const;
  TowerElement one(int level) const { return constant(level, {1.0, 0.0}); }
  TowerElement from_poly(Poly p) const;
  TowerElement embed(const fn::Fn& f);  // level-0 atom element

  TowerElement pistar_step(const TowerElement& x) const;
  TowerElement pistar(const TowerElement& x, int to_level) const;
  TowerElement T_step(const TowerElement& x) const;
  TowerElement T(const TowerElement& x, int to_level) const;
  TowerElement add(const TowerElement& a, const TowerElement& b) const;
  TowerElement negate(const TowerElement& a) const;
  TowerElement mul(const TowerElement& a, const TowerElement& b) const;

  // p_f for family member index at the given family level; lives one level up.
  TowerElement generator(int family_level, int index) const;

  bool is_zero(const TowerElement& x) const;
  bool equal(const TowerElement& a, const TowerElement& b) const;

  Complex eval(const TowerElement& x, const TowerPoint& pt) const;

  // All distinct points of the iterated fiber over x; sign choices on
  // vanishing coordinates collapse.
  std::vector<TowerPoint> fiber(Complex x) const;

 private:
  void check_level(const TowerElement& x, int level) const;

  AtomTable atoms_;
  std::vector<Complex> hull_;
  std::vector<std::vector<TowerElement>> families_;  // families_[l] at level l
};

// T_{alpha,beta} : level-beta elements -> level-alpha; pi*_{alpha,beta} maps
// the other way.
std::function<TowerElement(const TowerElement&)> tower_T(const Tower& t, int alpha, int beta);
std::function<TowerElement(const TowerElement&)> tower_pistar(const Tower& t, int alpha, int beta);

// Returns h = p_f for the family member at the given index; checks h^2 =
// pistar(f) and T(h) = 0 before returning.
TowerElement square_root_check(const Tower& t, int family_level, int index);

// Single root-extension step over a family of base functions vanishing on a
// hull set.
using ExtensionElement = TowerElement;

struct ExtensionPoint {
  Complex x;
  std::vector<int> signs;
};

class ExtensionContext {
 public:
  ExtensionContext(std::vector<fn::Fn> family, std::vector<Complex> hull);

  const Tower& tower() const { return tower_; }
  int family_size() const { return static_cast<int>(family_fns_.size()); }
  const fn::Fn& family_fn(int i) const { return family_fns_.at(static_cast<size_t>(i)); }
  AtomId intern(const fn::Fn& f) { return tower_.atoms().intern(f); }

  ExtensionElement pistar(const fn::Fn& f);
  ExtensionElement generator(int index) const { return tower_.generator(0, index); }
  ExtensionElement mul(const ExtensionElement& a, const ExtensionElement& b) const;
  ExtensionElement add(const ExtensionElement& a, const ExtensionElement& b) const;
  fn::Fn T_op(const ExtensionElement& a) const;
  Poly T_poly(const ExtensionElement& a) const;

  Complex eval_ext(const ExtensionElement& a, const ExtensionPoint& pt) const;
  std::vector<ExtensionPoint> fiber_of(Complex x) const;

  // max over hull points of |T(ab) - (Ta)(Tb)|, after verifying symbolically
  // that the difference expands into terms that each carry a product of
  // family members.
  double multiplicativity_residual(const ExtensionElement& a, const ExtensionElement& b) const;

  // sampled sup |T a| <= sampled sup |a| over extension points, one-sided
  bool norm_contraction_check(const ExtensionElement& a,
                              const std::vector<Complex>& base_samples) const;

 private:
  Tower tower_;
  std::vector<fn::Fn> family_fns_;
};

}  // namespace cheeselab::cole
