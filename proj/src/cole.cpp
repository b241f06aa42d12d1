#include "cheeselab/cole.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cheeselab/util.hpp"

namespace cheeselab::cole {

namespace {

bool term_key_less(const Term& a, const Term& b) { return a.atoms < b.atoms; }

}  // namespace

AtomId AtomTable::intern(const fn::Fn& f) {
  auto it = index_.find(f.get());
  if (it != index_.end()) return it->second;
  const AtomId id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(f);
  index_.emplace(f.get(), id);
  return id;
}

const fn::Fn& AtomTable::at(AtomId id) const {
  if (id >= atoms_.size()) throw ContextError("unknown atom id");
  return atoms_[id];
}

Poly Poly::constant(Complex c) {
  Poly p;
  if (c != Complex{0, 0}) p.terms_.push_back(Term{{}, c});
  return p;
}

Poly Poly::atom(AtomId id) {
  Poly p;
  p.terms_.push_back(Term{{id}, {1.0, 0.0}});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_key_less);
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().atoms == t.atoms) {
      p.terms_.back().scalar += t.scalar;
      if (p.terms_.back().scalar == Complex{0, 0}) p.terms_.pop_back();
    } else if (t.scalar != Complex{0, 0}) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Complex Poly::eval(const AtomTable& atoms, Complex z) const {
  util::KahanSum sum;
  for (const auto& t : terms_) {
    Complex v = t.scalar;
    for (AtomId id : t.atoms) v *= fn::eval(atoms.at(id), z);
    sum.add(v);
  }
  return sum.value();
}

fn::Fn Poly::to_fn(const AtomTable& atoms) const {
  fn::Fn out = fn::constant({0, 0});
  for (const auto& t : terms_) {
    fn::Fn term = fn::constant(t.scalar);
    for (AtomId id : t.atoms) term = term * atoms.at(id);
    out = out + term;
  }
  return out;
}

Poly add(const Poly& a, const Poly& b) {
  std::vector<Term> merged;
  merged.reserve(a.terms().size() + b.terms().size());
  merged.insert(merged.end(), a.terms().begin(), a.terms().end());
  merged.insert(merged.end(), b.terms().begin(), b.terms().end());
  return Poly::from_terms(std::move(merged));
}

Poly mul(const Poly& a, const Poly& b) {
  std::vector<Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      Term t;
      t.atoms.reserve(ta.atoms.size() + tb.atoms.size());
      t.atoms.insert(t.atoms.end(), ta.atoms.begin(), ta.atoms.end());
      t.atoms.insert(t.atoms.end(), tb.atoms.begin(), tb.atoms.end());
      std::sort(t.atoms.begin(), t.atoms.end());
      t.scalar = ta.scalar * tb.scalar;
      out.push_back(std::move(t));
    }
  }
  return Poly::from_terms(std::move(out));
}

Poly negate(const Poly& a) {
  std::vector<Term> out = a.terms();
  for (auto& t : out) t.scalar = -t.scalar;
  return Poly::from_terms(std::move(out));
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (size_t i = 0; i < a.terms().size(); ++i) {
    if (a.terms()[i].atoms != b.terms()[i].atoms) return false;
    if (a.terms()[i].scalar != b.terms()[i].scalar) return false;
  }
  return true;
}

Tower::Tower(AtomTable atoms, std::vector<Complex> hull)
    : atoms_(std::move(atoms)), hull_(std::move(hull)) {}

const std::vector<TowerElement>& Tower::family(int level) const {
  if (level < 0 || level >= depth()) throw FamilyError("no family at that level");
  return families_[static_cast<size_t>(level)];
}

void Tower::extend(std::vector<TowerElement> family) {
  if (depth() >= kMaxTowerDepth) throw FamilyError("tower depth cap reached");
  if (family.empty() || static_cast<int>(family.size()) > kMaxFamilySize) {
    throw FamilyError("family size must lie in [1, " + std::to_string(kMaxFamilySize) + "]");
  }
  const int level = depth();
  for (const auto& f : family) {
    check_level(f, level);
    // membership in the lifted ideal: the T-image down to the base must
    // vanish on the hull
    const TowerElement base_image = T(f, 0);
    for (Complex x : hull_) {
      if (std::abs(base_image.base.eval(atoms_, x)) > kHullTol) {
        throw FamilyError("family member does not vanish on the hull");
      }
    }
  }
  families_.push_back(std::move(family));
}

TowerElement Tower::zero(int level) const {
  TowerElement e;
  e.level = level;
  return e;
}

TowerElement Tower::constant(int level, Complex c) const {
  TowerElement e = from_poly(Poly::constant(c));
  for (int l = 0; l < level; ++l) e = pistar_step(e);
  return e;
}

TowerElement Tower::from_poly(Poly p) const {
  TowerElement e;
  e.level = 0;
  e.base = std::move(p);
  return e;
}

TowerElement Tower::embed(const fn::Fn& f) { return from_poly(Poly::atom(atoms_.intern(f))); }

bool Tower::is_zero(const TowerElement& x) const {
  if (x.level == 0) return x.base.is_zero();
  return x.coeffs.empty();
}

TowerElement Tower::pistar_step(const TowerElement& x) const {
  TowerElement e;
  e.level = x.level + 1;
  if (!is_zero(x)) e.coeffs.emplace(Mask{0}, x);
  return e;
}

TowerElement Tower::pistar(const TowerElement& x, int to_level) const {
  if (to_level < x.level) throw ContextError("pistar cannot lower the level");
  TowerElement e = x;
  while (e.level < to_level) e = pistar_step(e);
  return e;
}

TowerElement Tower::T_step(const TowerElement& x) const {
  if (x.level == 0) throw ContextError("T is undefined on the base level");
  auto it = x.coeffs.find(Mask{0});
  if (it == x.coeffs.end()) return zero(x.level - 1);
  return it->second;
}

TowerElement Tower::T(const TowerElement& x, int to_level) const {
  if (to_level > x.level) throw ContextError("T cannot raise the level");
  TowerElement e = x;
  while (e.level > to_level) e = T_step(e);
  return e;
}

TowerElement Tower::add(const TowerElement& a, const TowerElement& b) const {
  if (a.level != b.level) throw ContextError("level mismatch in add");
  if (a.level == 0) {
    TowerElement e = from_poly(cole::add(a.base, b.base));
    return e;
  }
  TowerElement e = zero(a.level);
  e.coeffs = a.coeffs;
  for (const auto& [mask, coeff] : b.coeffs) {
    auto it = e.coeffs.find(mask);
    if (it == e.coeffs.end()) {
      e.coeffs.emplace(mask, coeff);
    } else {
      it->second = add(it->second, coeff);
      if (is_zero(it->second)) e.coeffs.erase(it);
    }
  }
  return e;
}

TowerElement Tower::negate(const TowerElement& a) const {
  if (a.level == 0) return from_poly(cole::negate(a.base));
  TowerElement e = zero(a.level);
  for (const auto& [mask, coeff] : a.coeffs) e.coeffs.emplace(mask, negate(coeff));
  return e;
}

TowerElement Tower::mul(const TowerElement& a, const TowerElement& b) const {
  if (a.level != b.level) throw ContextError("level mismatch in mul");
  if (a.level == 0) return from_poly(cole::mul(a.base, b.base));

  const auto& fam = family(a.level - 1);
  TowerElement out = zero(a.level);
  for (const auto& [s_mask, a_coeff] : a.coeffs) {
    for (const auto& [t_mask, b_coeff] : b.coeffs) {
      // p_S p_T = pi*(prod_{f in S cap T} f) p_{S xor T}
      TowerElement c = mul(a_coeff, b_coeff);
      Mask common = s_mask & t_mask;
      while (common != 0) {
        const int i = std::countr_zero(common);
        common &= common - 1;
        c = mul(c, fam[static_cast<size_t>(i)]);
      }
      if (is_zero(c)) continue;
      const Mask key = s_mask ^ t_mask;
      auto it = out.coeffs.find(key);
      if (it == out.coeffs.end()) {
        out.coeffs.emplace(key, std::move(c));
      } else {
        it->second = add(it->second, c);
        if (is_zero(it->second)) out.coeffs.erase(it);
      }
    }
  }
  return out;
}

TowerElement Tower::generator(int family_level, int index) const {
  const auto& fam = family(family_level);
  if (index < 0 || index >= static_cast<int>(fam.size())) {
    throw FamilyError("family index out of range");
  }
  TowerElement e = zero(family_level + 1);
  e.coeffs.emplace(Mask{1} << index, one(family_level));
  return e;
}

bool Tower::equal(const TowerElement& a, const TowerElement& b) const {
  if (a.level != b.level) return false;
  if (a.level == 0) return a.base == b.base;
  if (a.coeffs.size() != b.coeffs.size()) return false;
  auto ita = a.coeffs.begin();
  auto itb = b.coeffs.begin();
  for (; ita != a.coeffs.end(); ++ita, ++itb) {
    if (ita->first != itb->first) return false;
    if (!equal(ita->second, itb->second)) return false;
  }
  return true;
}

void Tower::check_level(const TowerElement& x, int level) const {
  if (x.level != level) throw ContextError("element level does not match the tower level");
}

Complex Tower::eval(const TowerElement& x, const TowerPoint& pt) const {
  if (x.level == 0) return x.base.eval(atoms_, pt.x);
  if (static_cast<size_t>(x.level) > pt.signs.size()) {
    throw ContextError("point does not carry signs for this level");
  }
  const auto& fam = family(x.level - 1);
  const auto& signs = pt.signs[static_cast<size_t>(x.level - 1)];
  if (signs.size() != fam.size()) throw ContextError("sign vector has the wrong arity");

  util::KahanSum sum;
  for (const auto& [mask, coeff] : x.coeffs) {
    Complex v = eval(coeff, pt);
    Mask rest = mask;
    while (rest != 0) {
      const int i = std::countr_zero(rest);
      rest &= rest - 1;
      const Complex fv = eval(fam[static_cast<size_t>(i)], pt);
      v *= static_cast<double>(signs[static_cast<size_t>(i)]) * std::sqrt(fv);
    }
    sum.add(v);
  }
  return sum.value();
}

std::vector<TowerPoint> Tower::fiber(Complex x) const {
  std::vector<TowerPoint> points;
  points.push_back(TowerPoint{x, {}});
  for (int level = 0; level < depth(); ++level) {
    const auto& fam = family(level);
    std::vector<TowerPoint> next;
    for (const auto& pt : points) {
      std::vector<int> free_coords;
      for (size_t i = 0; i < fam.size(); ++i) {
        if (std::abs(eval(fam[i], pt)) > kHullTol) free_coords.push_back(static_cast<int>(i));
      }
      const size_t combos = size_t{1} << free_coords.size();
      for (size_t bits = 0; bits < combos; ++bits) {
        TowerPoint q = pt;
        std::vector<int> signs(fam.size(), +1);
        for (size_t j = 0; j < free_coords.size(); ++j) {
          if (bits & (size_t{1} << j)) signs[static_cast<size_t>(free_coords[j])] = -1;
        }
        q.signs.push_back(std::move(signs));
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::function<TowerElement(const TowerElement&)> tower_T(const Tower& t, int alpha, int beta) {
  if (alpha > beta || beta > t.depth()) throw ContextError("invalid operator levels");
  return [&t, alpha, beta](const TowerElement& x) {
    if (x.level != beta) throw ContextError("operator applied at the wrong level");
    return t.T(x, alpha);
  };
}

std::function<TowerElement(const TowerElement&)> tower_pistar(const Tower& t, int alpha,
                                                              int beta) {
  if (alpha > beta || beta > t.depth()) throw ContextError("invalid operator levels");
  return [&t, alpha, beta](const TowerElement& x) {
    if (x.level != alpha) throw ContextError("operator applied at the wrong level");
    return t.pistar(x, beta);
  };
}

TowerElement square_root_check(const Tower& t, int family_level, int index) {
  const auto& fam = t.family(family_level);
  if (index < 0 || index >= static_cast<int>(fam.size())) {
    throw FamilyError("square root requested for a function outside the family");
  }
  const TowerElement h = t.generator(family_level, index);
  const TowerElement f = fam[static_cast<size_t>(index)];
  if (!t.equal(t.mul(h, h), t.pistar_step(f))) {
    throw ContextError("square of the adjoined root is not pistar of the member");
  }
  if (!t.is_zero(t.T_step(h))) {
    throw ContextError("adjoined root has a nonzero fiber average");
  }
  return h;
}

ExtensionContext::ExtensionContext(std::vector<fn::Fn> family, std::vector<Complex> hull)
    : tower_(AtomTable{}, std::move(hull)), family_fns_(std::move(family)) {
  if (family_fns_.empty() || static_cast<int>(family_fns_.size()) > kMaxFamilySize) {
    throw FamilyError("family size must lie in [1, " + std::to_string(kMaxFamilySize) + "]");
  }
  for (const auto& f : family_fns_) {
    for (Complex x : tower_.hull()) {
      if (std::abs(fn::eval(f, x)) > kHullTol) {
        throw FamilyError("family member does not vanish on the hull");
      }
    }
  }
  std::vector<TowerElement> base_family;
  base_family.reserve(family_fns_.size());
  for (const auto& f : family_fns_) base_family.push_back(tower_.embed(f));
  tower_.extend(std::move(base_family));
}

ExtensionElement ExtensionContext::pistar(const fn::Fn& f) {
  return tower_.pistar_step(tower_.embed(f));
}

ExtensionElement ExtensionContext::mul(const ExtensionElement& a,
                                       const ExtensionElement& b) const {
  return tower_.mul(a, b);
}

ExtensionElement ExtensionContext::add(const ExtensionElement& a,
                                       const ExtensionElement& b) const {
  return tower_.add(a, b);
}

Poly ExtensionContext::T_poly(const ExtensionElement& a) const {
  return tower_.T(a, 0).base;
}

fn::Fn ExtensionContext::T_op(const ExtensionElement& a) const {
  const Poly p = T_poly(a);
  // a single unit-scalar atom maps back to the registered function itself
  if (p.terms().size() == 1 && p.terms()[0].atoms.size() == 1 &&
      p.terms()[0].scalar == Complex{1.0, 0.0}) {
    return tower_.atoms().at(p.terms()[0].atoms[0]);
  }
  return p.to_fn(tower_.atoms());
}

Complex ExtensionContext::eval_ext(const ExtensionElement& a, const ExtensionPoint& pt) const {
  TowerPoint tp{pt.x, {pt.signs}};
  return tower_.eval(a, tp);
}

std::vector<ExtensionPoint> ExtensionContext::fiber_of(Complex x) const {
  std::vector<ExtensionPoint> out;
  for (const auto& tp : tower_.fiber(x)) out.push_back({tp.x, tp.signs[0]});
  return out;
}

double ExtensionContext::multiplicativity_residual(const ExtensionElement& a,
                                                   const ExtensionElement& b) const {
  const Poly lhs = T_poly(tower_.mul(a, b));
  const Poly rhs = cole::mul(T_poly(a), T_poly(b));
  const Poly diff = cole::add(lhs, cole::negate(rhs));

  // The defect must expand into sum_{S nonempty} a_S b_S prod_{f in S} f: the
  // diagonal monomial products, each carrying family members.
  Poly rebuilt = Poly::zero();
  const auto& fam = tower_.family(0);
  for (const auto& [mask, a_coeff] : a.coeffs) {
    if (mask == 0) continue;
    auto it = b.coeffs.find(mask);
    if (it == b.coeffs.end()) continue;
    Poly piece = cole::mul(a_coeff.base, it->second.base);
    Mask rest = mask;
    while (rest != 0) {
      const int i = std::countr_zero(rest);
      rest &= rest - 1;
      piece = cole::mul(piece, fam[static_cast<size_t>(i)].base);
    }
    rebuilt = cole::add(rebuilt, piece);
  }
  if (!(diff == rebuilt)) {
    throw ContextError("multiplicativity defect does not have the diagonal expansion");
  }

  double residual = 0.0;
  for (Complex x : tower_.hull()) {
    residual = std::max(residual, std::abs(diff.eval(tower_.atoms(), x)));
  }
  return residual;
}

bool ExtensionContext::norm_contraction_check(const ExtensionElement& a,
                                              const std::vector<Complex>& base_samples) const {
  const Poly ta = T_poly(a);
  double lhs = 0.0;
  for (Complex x : base_samples) lhs = std::max(lhs, std::abs(ta.eval(tower_.atoms(), x)));

  double rhs = 0.0;
  const int nf = family_size();
  const size_t combos = size_t{1} << nf;
  for (Complex x : base_samples) {
    for (size_t bits = 0; bits < combos; ++bits) {
      ExtensionPoint pt{x, std::vector<int>(static_cast<size_t>(nf), +1)};
      for (int i = 0; i < nf; ++i) {
        if (bits & (size_t{1} << i)) pt.signs[static_cast<size_t>(i)] = -1;
      }
      rhs = std::max(rhs, std::abs(eval_ext(a, pt)));
    }
  }
  return lhs <= rhs * (1.0 + 1e-9) + 1e-12;
}

}  // namespace cheeselab::cole
