#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cheeselab/cole.hpp"
#include "cheeselab/util.hpp"

using namespace cheeselab;
using cole::ExtensionContext;
using cole::ExtensionElement;
using cole::ExtensionPoint;
using cole::Mask;
using cole::Poly;
using cole::Tower;
using fn::Complex;
using fn::Fn;

namespace {

// family vanishing at 1: (z - 1) z^i
std::vector<Fn> simple_family(int members) {
  std::vector<Fn> out;
  for (int i = 0; i < members; ++i) {
    fn::RationalFunction r;
    r.zeros.emplace_back(Complex{1, 0}, 1);
    if (i > 0) r.zeros.emplace_back(Complex{0, 0}, i);
    out.push_back(fn::rational(r));
  }
  return out;
}

ExtensionElement random_element(const ExtensionContext& ctx,
                                const std::vector<cole::AtomId>& pool, util::SplitMix64& rng) {
  const Tower& tower = ctx.tower();
  ExtensionElement e = tower.zero(1);
  const int n_terms = rng.next_int(1, 3);
  for (int t = 0; t < n_terms; ++t) {
    const Mask mask = static_cast<Mask>(rng.next_below(1ull << ctx.family_size()));
    cole::Term term;
    const int n_atoms = rng.next_int(0, 2);
    for (int a = 0; a < n_atoms; ++a) term.atoms.push_back(pool[rng.next_below(pool.size())]);
    std::sort(term.atoms.begin(), term.atoms.end());
    term.scalar = Complex(static_cast<double>(rng.next_int(-3, 3)),
                          static_cast<double>(rng.next_int(-3, 3)));
    ExtensionElement mono = tower.zero(1);
    auto coeff = tower.from_poly(Poly::from_terms({term}));
    if (!tower.is_zero(coeff)) mono.coeffs.emplace(mask, coeff);
    e = tower.add(e, mono);
  }
  return e;
}

}  // namespace

TEST_CASE("poly arithmetic is canonical") {
  const Poly a = Poly::atom(3);
  const Poly b = Poly::atom(1);
  const Poly ab = cole::mul(a, b);
  const Poly ba = cole::mul(b, a);
  CHECK(ab == ba);
  CHECK(cole::add(a, cole::negate(a)).is_zero());
  CHECK(cole::mul(Poly::one(), a) == a);
  CHECK(cole::mul(Poly::zero(), a).is_zero());
}

TEST_CASE("pistar embeds with a single empty-mask coefficient") {
  ExtensionContext ctx(simple_family(3), {{1.0, 0.0}});
  const Fn f = fn::identity();
  const auto lifted = ctx.pistar(f);
  REQUIRE(lifted.coeffs.size() == 1);
  CHECK(lifted.coeffs.begin()->first == 0u);
  // T after pistar returns the same registered function
  CHECK(ctx.T_op(lifted) == f);

  // homomorphism on sums
  const Fn g = fn::constant({2, 1});
  const auto sum_lift = ctx.add(ctx.pistar(f), ctx.pistar(g));
  const auto lift_sum = ctx.pistar(f + g);
  for (const Complex z : {Complex{0.3, 0.2}, Complex{-0.5, 0.1}}) {
    const ExtensionPoint pt{z, {1, 1, 1}};
    CHECK(std::abs(ctx.eval_ext(sum_lift, pt) - ctx.eval_ext(lift_sum, pt)) < 1e-14);
  }

  // fiber-constant: the value ignores the signs
  const ExtensionPoint plus{{0.4, 0.1}, {1, 1, 1}};
  const ExtensionPoint minus{{0.4, 0.1}, {-1, -1, -1}};
  CHECK(ctx.eval_ext(lifted, plus) == ctx.eval_ext(lifted, minus));
}

TEST_CASE("monomial multiplication rule") {
  ExtensionContext ctx(simple_family(3), {{1.0, 0.0}});
  const Tower& tower = ctx.tower();

  // p_f p_f = pistar(f)
  for (int i = 0; i < 3; ++i) {
    const auto p = ctx.generator(i);
    CHECK(tower.equal(ctx.mul(p, p), tower.pistar_step(tower.family(0)[i])));
  }

  // (pi*(a) p_0) (pi*(b) p_0 p_1) = { {1}: a b f_0 }
  const Fn a = fn::constant({2, 0});
  const Fn b = fn::identity();
  auto lhs = ctx.mul(ctx.pistar(a), ctx.generator(0));
  auto rhs = ctx.mul(ctx.mul(ctx.pistar(b), ctx.generator(0)), ctx.generator(1));
  auto prod = ctx.mul(lhs, rhs);
  REQUIRE(prod.coeffs.size() == 1);
  CHECK(prod.coeffs.begin()->first == 0b010u);
  // the surviving coefficient is a b f_0
  util::SplitMix64 rng(3);
  for (int k = 0; k < 5; ++k) {
    const Complex z{rng.next_double(), rng.next_double() - 0.5};
    const Complex expected =
        fn::eval(a, z) * fn::eval(b, z) * fn::eval(ctx.family_fn(0), z);
    CHECK(std::abs(prod.coeffs.begin()->second.base.eval(tower.atoms(), z) - expected) < 1e-13);
  }

  // unit element
  const auto x = ctx.generator(2);
  CHECK(tower.equal(ctx.mul(x, tower.pistar_step(tower.one(0))), x));
}

TEST_CASE("T kills signed monomials and fixes the base") {
  ExtensionContext ctx(simple_family(3), {{1.0, 0.0}});
  const Tower& tower = ctx.tower();
  const Fn g = fn::identity();

  auto mono = ctx.mul(ctx.mul(ctx.pistar(g), ctx.generator(0)), ctx.generator(1));
  CHECK(ctx.T_poly(mono).is_zero());

  auto mixed = ctx.add(ctx.pistar(g), mono);
  CHECK(ctx.T_op(mixed) == g);

  CHECK(tower.is_zero(tower.T_step(ctx.generator(0))));
}

TEST_CASE("eval_ext uses the principal root and the sign") {
  // f(x) = 4 at x = chosen point: use f = (z-1) and x = 5 -> f = 4
  std::vector<Fn> family;
  fn::RationalFunction r;
  r.zeros.emplace_back(Complex{1, 0}, 1);
  family.push_back(fn::rational(r));
  ExtensionContext ctx(family, {{1.0, 0.0}});

  const auto p = ctx.generator(0);
  CHECK(std::abs(ctx.eval_ext(p, {{5, 0}, {-1}}) - Complex{-2, 0}) < 1e-15);
  CHECK(std::abs(ctx.eval_ext(p, {{5, 0}, {+1}}) - Complex{2, 0}) < 1e-15);
  // consistency with mul: (p_f)^2 evaluates to f
  const auto sq = ctx.mul(p, p);
  CHECK(std::abs(ctx.eval_ext(sq, {{5, 0}, {-1}}) - Complex{4, 0}) < 1e-15);
}

TEST_CASE("mul is associative and commutative exactly") {
  ExtensionContext ctx(simple_family(4), {{1.0, 0.0}});
  const Tower& tower = ctx.tower();
  std::vector<cole::AtomId> pool;
  for (int i = 0; i < 4; ++i) pool.push_back(ctx.intern(ctx.family_fn(i)));
  pool.push_back(ctx.intern(fn::identity()));

  util::SplitMix64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = random_element(ctx, pool, rng);
    const auto b = random_element(ctx, pool, rng);
    const auto c = random_element(ctx, pool, rng);
    CHECK(tower.equal(ctx.mul(a, b), ctx.mul(b, a)));
    CHECK(tower.equal(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c))));
  }
}

TEST_CASE("eval_ext respects mul") {
  ExtensionContext ctx(simple_family(4), {{1.0, 0.0}});
  std::vector<cole::AtomId> pool;
  for (int i = 0; i < 4; ++i) pool.push_back(ctx.intern(ctx.family_fn(i)));
  pool.push_back(ctx.intern(fn::identity()));

  util::SplitMix64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_element(ctx, pool, rng);
    const auto b = random_element(ctx, pool, rng);
    ExtensionPoint pt{{0.6 * rng.next_double(), 0.6 * rng.next_double() - 0.3}, {}};
    for (int i = 0; i < 4; ++i) pt.signs.push_back(rng.next_below(2) == 0 ? 1 : -1);
    const Complex lhs = ctx.eval_ext(ctx.mul(a, b), pt);
    const Complex rhs = ctx.eval_ext(a, pt) * ctx.eval_ext(b, pt);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("fiber average equals T by brute force") {
  ExtensionContext ctx(simple_family(4), {{1.0, 0.0}});
  std::vector<cole::AtomId> pool;
  for (int i = 0; i < 4; ++i) pool.push_back(ctx.intern(ctx.family_fn(i)));

  util::SplitMix64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_element(ctx, pool, rng);
    const Complex x{0.7 * rng.next_double() - 0.1, 0.5 * rng.next_double() - 0.25};
    util::KahanSum sum;
    for (size_t bits = 0; bits < 16; ++bits) {
      ExtensionPoint pt{x, {1, 1, 1, 1}};
      for (int i = 0; i < 4; ++i) {
        if (bits & (size_t{1} << i)) pt.signs[static_cast<size_t>(i)] = -1;
      }
      sum.add(ctx.eval_ext(a, pt));
    }
    const Complex average = sum.value() / 16.0;
    const Complex direct = ctx.T_poly(a).eval(ctx.tower().atoms(), x);
    CHECK(std::abs(average - direct) <= 1e-12 * (1 + std::abs(direct)));
  }
}

TEST_CASE("fiber sizes collapse on vanishing coordinates") {
  ExtensionContext ctx(simple_family(2), {{1.0, 0.0}});
  // both members nonzero: 4 points
  CHECK(ctx.fiber_of({0.5, 0.2}).size() == 4);
  // hull point: every member vanishes: singleton
  CHECK(ctx.fiber_of({1.0, 0.0}).size() == 1);
  // z = 0 kills only the second member (z-1) z: 2 points
  CHECK(ctx.fiber_of({0.0, 0.0}).size() == 2);
}

TEST_CASE("extension point satisfies the defining quadratic") {
  ExtensionContext ctx(simple_family(3), {{1.0, 0.0}});
  for (const auto& pt : ctx.fiber_of({0.4, 0.3})) {
    for (int i = 0; i < 3; ++i) {
      const Complex root = ctx.eval_ext(ctx.generator(i), pt);
      const Complex value = fn::eval(ctx.family_fn(i), pt.x);
      CHECK(std::abs(root * root - value) <= 1e-13 * (1 + std::abs(value)));
    }
  }
}

TEST_CASE("multiplicativity residual vanishes at the hull") {
  ExtensionContext ctx(simple_family(4), {{1.0, 0.0}});
  std::vector<cole::AtomId> pool;
  for (int i = 0; i < 4; ++i) pool.push_back(ctx.intern(ctx.family_fn(i)));
  pool.push_back(ctx.intern(fn::identity()));

  // embedded subalgebra multiplies exactly
  CHECK(ctx.multiplicativity_residual(ctx.pistar(fn::identity()),
                                      ctx.pistar(fn::constant({3, 1}))) == 0.0);

  // a = b = p_f: the defect is f itself, vanishing on the hull
  CHECK(ctx.multiplicativity_residual(ctx.generator(0), ctx.generator(0)) <= 1e-12);

  util::SplitMix64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_element(ctx, pool, rng);
    const auto b = random_element(ctx, pool, rng);
    CHECK(ctx.multiplicativity_residual(a, b) < 1e-12);
  }
}

TEST_CASE("norm contraction") {
  ExtensionContext ctx(simple_family(3), {{1.0, 0.0}});
  std::vector<cole::AtomId> pool;
  for (int i = 0; i < 3; ++i) pool.push_back(ctx.intern(ctx.family_fn(i)));
  pool.push_back(ctx.intern(fn::identity()));

  std::vector<Complex> samples;
  util::SplitMix64 rng(61);
  for (int i = 0; i < 8; ++i) {
    samples.emplace_back(0.9 * rng.next_double() - 0.2, 0.8 * rng.next_double() - 0.4);
  }
  CHECK(ctx.norm_contraction_check(ctx.pistar(fn::identity()), samples));
  CHECK(ctx.norm_contraction_check(ctx.generator(0), samples));
  for (int trial = 0; trial < 100; ++trial) {
    CHECK(ctx.norm_contraction_check(random_element(ctx, pool, rng), samples));
  }
}

TEST_CASE("family must vanish on the hull") {
  std::vector<Fn> family = {fn::identity()};  // does not vanish at 1
  CHECK_THROWS_AS(ExtensionContext(family, {{1.0, 0.0}}), cole::FamilyError);
}

TEST_CASE("level mismatch is a context error") {
  ExtensionContext ctx(simple_family(2), {{1.0, 0.0}});
  const Tower& tower = ctx.tower();
  CHECK_THROWS_AS(ctx.mul(ctx.generator(0), tower.one(0)), cole::ContextError);
}

TEST_CASE("two-level tower identities") {
  cole::AtomTable atoms;
  Tower tower(atoms, {{1.0, 0.0}});
  std::vector<cole::AtomId> pool;
  std::vector<cole::TowerElement> f0;
  for (const auto& f : simple_family(3)) {
    const auto id = tower.atoms().intern(f);
    pool.push_back(id);
    f0.push_back(tower.from_poly(Poly::atom(id)));
  }
  tower.extend(f0);

  // level-1 family from the lifted ideal
  std::vector<cole::TowerElement> f1;
  {
    cole::TowerElement m1 = tower.zero(1);
    m1.coeffs.emplace(Mask{1}, tower.from_poly(Poly::atom(pool[1])));
    f1.push_back(m1);
    cole::TowerElement m2 = tower.zero(1);
    m2.coeffs.emplace(Mask{6}, tower.one(0));
    f1.push_back(m2);
    f1.push_back(tower.pistar_step(f0[2]));
  }
  tower.extend(f1);

  auto t01 = cole::tower_T(tower, 0, 1);
  auto t12 = cole::tower_T(tower, 1, 2);
  auto t02 = cole::tower_T(tower, 0, 2);
  auto p02 = cole::tower_pistar(tower, 0, 2);

  util::SplitMix64 rng(71);
  auto random_level2 = [&]() {
    cole::TowerElement e = tower.zero(2);
    for (int t = 0; t < 2; ++t) {
      const Mask m1 = static_cast<Mask>(rng.next_below(8));
      cole::TowerElement level1 = tower.zero(1);
      const Mask m0 = static_cast<Mask>(rng.next_below(8));
      cole::Term term;
      term.atoms.push_back(pool[rng.next_below(pool.size())]);
      term.scalar = Complex(static_cast<double>(rng.next_int(-3, 3)), 0.0);
      auto coeff = tower.from_poly(Poly::from_terms({term}));
      if (!tower.is_zero(coeff)) level1.coeffs.emplace(m0, coeff);
      cole::TowerElement mono = tower.zero(2);
      if (!tower.is_zero(level1)) mono.coeffs.emplace(m1, level1);
      e = tower.add(e, mono);
    }
    return e;
  };

  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_level2();
    CHECK(tower.equal(t02(x), t01(t12(x))));
    CHECK(tower.equal(tower.T(x, 2), x));  // T at the same level is the identity
  }
  for (int trial = 0; trial < 100; ++trial) {
    cole::Term term;
    term.atoms.push_back(pool[rng.next_below(pool.size())]);
    term.scalar = Complex(static_cast<double>(rng.next_int(-3, 3)),
                          static_cast<double>(rng.next_int(-3, 3)));
    const auto x = tower.from_poly(Poly::from_terms({term}));
    CHECK(tower.equal(t02(p02(x)), x));
  }
}

TEST_CASE("square roots live one level up with zero average") {
  cole::AtomTable atoms;
  Tower tower(atoms, {{1.0, 0.0}});
  std::vector<cole::TowerElement> f0;
  for (const auto& f : simple_family(2)) {
    f0.push_back(tower.from_poly(Poly::atom(tower.atoms().intern(f))));
  }
  tower.extend(f0);

  const auto h = cole::square_root_check(tower, 0, 0);
  CHECK(h.level == 1);
  CHECK(tower.equal(tower.mul(h, h), tower.pistar_step(f0[0])));
  CHECK(tower.is_zero(tower.T_step(h)));

  // pointwise: eval(h)^2 = f(pi(.)) across fibers
  util::SplitMix64 rng(81);
  int counted = 0;
  double worst = 0.0;
  while (counted < 1000) {
    const Complex x{rng.next_double() - 0.2, rng.next_double() - 0.5};
    for (const auto& pt : tower.fiber(x)) {
      const Complex lhs = tower.eval(h, pt) * tower.eval(h, pt);
      const Complex rhs = tower.eval(f0[0], pt);
      worst = std::max(worst, std::abs(lhs - rhs) / (1 + std::abs(rhs)));
      ++counted;
    }
  }
  CHECK(worst < 1e-12);

  CHECK_THROWS_AS(cole::square_root_check(tower, 0, 5), cole::FamilyError);
}

TEST_CASE("tower extension rejects members outside the lifted ideal") {
  cole::AtomTable atoms;
  Tower tower(atoms, {{1.0, 0.0}});
  std::vector<cole::TowerElement> f0;
  for (const auto& f : simple_family(2)) {
    f0.push_back(tower.from_poly(Poly::atom(tower.atoms().intern(f))));
  }
  tower.extend(f0);

  // pi* of a function NOT vanishing at 1 has T-image off the ideal
  std::vector<cole::TowerElement> bad = {
      tower.pistar_step(tower.from_poly(Poly::atom(tower.atoms().intern(fn::identity()))))};
  CHECK_THROWS_AS(tower.extend(bad), cole::FamilyError);
}

TEST_CASE("tower fibers are singletons exactly over hull points") {
  cole::AtomTable atoms;
  Tower tower(atoms, {{1.0, 0.0}});
  std::vector<cole::TowerElement> f0;
  for (const auto& f : simple_family(2)) {
    f0.push_back(tower.from_poly(Poly::atom(tower.atoms().intern(f))));
  }
  tower.extend(f0);
  std::vector<cole::TowerElement> f1 = {tower.pistar_step(f0[0])};
  tower.extend(f1);

  CHECK(tower.fiber({1.0, 0.0}).size() == 1);
  CHECK(tower.fiber({0.5, 0.1}).size() == 8);  // 2^2 at level 1, 2^1 at level 2
}
