#pragma once
/// Intersection numbers on the flag-space models of a component of the
/// supersingular locus for g = 3 and g = 4. Classes are polynomials in the
/// first Chern classes l_i = c_1(Q_i); for g = 4 the class c_2(Q_1) is carried
/// as a formal weight-2 generator until its value is derived.

#include <sslocus/exactpoly.hpp>
#include <sslocus/linalg.hpp>
#include <sslocus/strata.hpp>

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sslocus::flagcalc {

/// Exponents of (l0, l1, l2, c2).
using Exps = std::array<int, 4>;
enum Gen : std::size_t { L0 = 0, L1 = 1, L2 = 2, C2 = 3 };

inline int weight(const Exps& e) { return e[0] + e[1] + e[2] + 2 * e[3]; }

inline std::string monomial_name(const Exps& e) {
  static const char* names[4] = {"l0", "l1", "l2", "c2"};
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < 4; ++i) {
    if (e[i] == 0) continue;
    if (!first) os << "*";
    first = false;
    os << names[i];
    if (e[i] > 1) os << "^" << e[i];
  }
  return first ? "1" : os.str();
}

/// Class on the top flag space F0. Genus context 4: dim F0 = 4, generators
/// l0, l1, l2, c2. Genus context 3: dim F0 = 2, generators l0, l1 with l1^2 = 0
/// (l1 is pulled back from a curve). Monomials above the dimension are never
/// stored. An optional exceptional-support term e is carried opaquely.
class EllClass {
 public:
  explicit EllClass(int genus_context) : ctx_(genus_context) {
    if (ctx_ != 3 && ctx_ != 4) throw std::invalid_argument("EllClass: genus context must be 3 or 4");
  }

  static EllClass constant(int ctx, const RatFn& c) { return monomial(ctx, {0, 0, 0, 0}, c); }
  static EllClass generator(int ctx, Gen g, const RatFn& c = RatFn(1)) {
    Exps e{0, 0, 0, 0};
    e[g] = 1;
    return monomial(ctx, e, c);
  }
  static EllClass monomial(int ctx, const Exps& e, const RatFn& c) {
    EllClass r(ctx);
    r.add_term(e, c);
    return r;
  }

  int genus_context() const { return ctx_; }
  int dimension() const { return ctx_ == 4 ? 4 : 2; }
  const std::map<Exps, RatFn>& terms() const { return terms_; }
  RatFn coefficient(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? RatFn() : it->second;
  }
  const RatFn& exceptional() const { return exceptional_; }
  bool has_exceptional() const { return !exceptional_.is_zero(); }
  EllClass without_exceptional() const {
    EllClass r = *this;
    r.exceptional_ = RatFn();
    return r;
  }
  EllClass with_exceptional(const RatFn& c) const {
    EllClass r = *this;
    r.exceptional_ = c;
    return r;
  }
  bool is_zero() const { return terms_.empty() && exceptional_.is_zero(); }

  void add_term(const Exps& e, const RatFn& c) {
    if (c.is_zero() || !admissible(e)) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  EllClass part(int d) const {
    EllClass r(ctx_);
    for (const auto& [e, c] : terms_)
      if (weight(e) == d) r.terms_.emplace(e, c);
    return r;
  }
  bool is_homogeneous(int d) const {
    for (const auto& [e, c] : terms_)
      if (weight(e) != d) return false;
    return true;
  }

  EllClass& operator+=(const EllClass& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    exceptional_ += o.exceptional_;
    return *this;
  }
  EllClass& operator-=(const EllClass& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    exceptional_ -= o.exceptional_;
    return *this;
  }
  friend EllClass operator+(EllClass a, const EllClass& b) { return a += b; }
  friend EllClass operator-(EllClass a, const EllClass& b) { return a -= b; }
  friend EllClass operator*(const RatFn& s, const EllClass& a) {
    EllClass r(a.ctx_);
    for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
    r.exceptional_ = s * a.exceptional_;
    return r;
  }
  friend EllClass operator*(const EllClass& a, const EllClass& b) {
    a.check(b);
    if (a.has_exceptional() || b.has_exceptional())
      throw std::logic_error("EllClass: products involving the exceptional class e are not defined");
    EllClass r(a.ctx_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exps e{};
        for (std::size_t i = 0; i < 4; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend bool operator==(const EllClass& a, const EllClass& b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_ && a.exceptional_ == b.exceptional_;
  }

  EllClass pow(int k) const {
    EllClass r = constant(ctx_, RatFn(1));
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Replaces the formal generator c2 by a class of weight 2.
  EllClass substitute_c2(const EllClass& value) const {
    if (!value.is_homogeneous(2)) throw std::invalid_argument("substitute_c2: value must have weight 2");
    EllClass r(ctx_);
    for (const auto& [e, c] : terms_) {
      Exps rest = e;
      rest[C2] = 0;
      r += monomial(ctx_, rest, c) * value.pow(e[C2]);
    }
    r.exceptional_ = exceptional_;
    return r;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      os << "(" << it->second.to_string() << ")*" << monomial_name(it->first);
    }
    if (has_exceptional()) os << (first ? "" : " + ") << "(" << exceptional_.to_string() << ")*e";
    return os.str();
  }

 private:
  bool admissible(const Exps& e) const {
    if (weight(e) > dimension()) return false;
    if (ctx_ == 3 && (e[L2] != 0 || e[C2] != 0)) throw std::invalid_argument("EllClass: g=3 uses only l0, l1");
    if (ctx_ == 3 && e[L1] >= 2) return false;
    return true;
  }
  void check(const EllClass& o) const {
    if (o.ctx_ != ctx_) throw std::invalid_argument("EllClass: genus context mismatch");
  }
  int ctx_;
  std::map<Exps, RatFn> terms_;
  RatFn exceptional_;
};

inline RatFn pp() { return RatFn(PPoly::p()); }

/// (1 + u)^{-1} for u without constant term, truncated by the dimension.
inline EllClass series_inverse(const EllClass& one_plus_u) {
  const int ctx = one_plus_u.genus_context();
  if (one_plus_u.coefficient({0, 0, 0, 0}) != RatFn(1)) throw std::invalid_argument("series_inverse: constant term must be 1");
  EllClass u = one_plus_u - EllClass::constant(ctx, RatFn(1));
  EllClass r = EllClass::constant(ctx, RatFn(1));
  EllClass term = r;
  for (int k = 1; k <= one_plus_u.dimension(); ++k) {
    term = term * u;
    r += (k % 2 == 1 ? RatFn(-1) : RatFn(1)) * term;
  }
  return r;
}

inline EllClass one_plus(const EllClass& x) { return EllClass::constant(x.genus_context(), RatFn(1)) + x; }
inline EllClass gen4(Gen g, const RatFn& c = RatFn(1)) { return EllClass::generator(4, g, c); }

// ---------------------------------------------------------------- genus 4

/// c(E) on F0 with c2 = c_2(Q_1) still formal:
/// (1-l2)(1+p l1+p^2 c2)(1+p l0) / [(1-p l2)(1+l1+c2)(1+l0)].
inline EllClass chern_hodge_g4_formal() {
  const RatFn p = pp();
  EllClass num = one_plus(gen4(L2, RatFn(-1))) * one_plus(gen4(L1, p) + gen4(C2, p * p)) * one_plus(gen4(L0, p));
  EllClass den = one_plus(gen4(L2, -p)) * one_plus(gen4(L1) + gen4(C2)) * one_plus(gen4(L0));
  return num * series_inverse(den);
}

/// c_2(Q_1) solved from lambda_1^2 = 2 lambda_2 (a relation of R_4).
inline EllClass derive_c2_g4() {
  EllClass c = chern_hodge_g4_formal();
  EllClass rel = c.part(1) * c.part(1) - RatFn(2) * c.part(2);
  RatFn k = rel.coefficient({0, 0, 0, 1});
  if (k.is_zero()) throw std::logic_error("derive_c2_g4: c2 does not occur");
  EllClass rest = rel - EllClass::monomial(4, {0, 0, 0, 1}, k);
  return (RatFn(-1) / k) * rest;
}

inline EllClass c2_value_g4() { return derive_c2_g4(); }

/// Total Chern class of the Hodge bundle on F0 (degrees 0..4), c2 substituted.
inline EllClass chern_hodge_g4() { return chern_hodge_g4_formal().substitute_c2(c2_value_g4()); }

inline EllClass lambda_g4(int i) { return chern_hodge_g4().part(i); }

/// Structural vanishing on F0: l2^3 = 0 (pulled back from the surface F2),
/// a class pulled back from F1 (l0^2, l1, l2, c2) vanishes above degree 3,
/// and everything vanishes above degree 4.
inline bool vanishes_g4(const Exps& e) {
  if (weight(e) > 4) return true;
  if (e[L2] >= 3) return true;
  int from_f1 = 2 * (e[L0] / 2) + e[L1] + e[L2] + 2 * e[C2];
  return from_f1 > 3;
}

inline EllClass vanishing_reduce(const EllClass& c) {
  if (c.genus_context() != 4) throw std::invalid_argument("vanishing_reduce: genus context 4 only");
  EllClass r(4);
  for (const auto& [e, k] : c.terms())
    if (!vanishes_g4(e)) r.add_term(e, k);
  return r.with_exceptional(c.exceptional());
}

/// Degree-4 monomials in l0, l1, l2 killed by vanishing_reduce.
inline std::vector<Exps> vanishing_monomials_g4() {
  std::vector<Exps> out;
  for (int a = 4; a >= 0; --a)
    for (int b = 4 - a; b >= 0; --b) {
      Exps e{a, b, 4 - a - b, 0};
      if (vanishes_g4(e)) out.push_back(e);
    }
  return out;
}

inline const std::vector<Exps>& unknowns_g4() {
  static const std::vector<Exps> u{{3, 1, 0, 0}, {3, 0, 1, 0}, {1, 3, 0, 0}, {1, 2, 1, 0}, {1, 1, 2, 0}};
  return u;
}

struct RelationRow {
  std::string label;
  std::string provenance;
  std::vector<RatFn> coeffs;  // on unknowns_g4()
  RatFn rhs;
  bool homogeneous() const { return rhs.is_zero(); }
};

/// Reads a degree-4 class on F0 as a linear form in the five unknowns.
inline std::vector<RatFn> linear_form(const EllClass& c) {
  EllClass r = vanishing_reduce(c);
  if (r.has_exceptional()) throw std::invalid_argument("linear_form: exceptional term present");
  std::vector<RatFn> row(unknowns_g4().size());
  for (const auto& [e, k] : r.terms()) {
    if (weight(e) != 4) throw std::invalid_argument("linear_form: class is not of degree 4: " + monomial_name(e));
    bool found = false;
    for (std::size_t i = 0; i < unknowns_g4().size(); ++i)
      if (unknowns_g4()[i] == e) {
        row[i] = k;
        found = true;
      }
    if (!found) throw std::invalid_argument("linear_form: unexpected monomial " + monomial_name(e));
  }
  return row;
}

/// Exceptional-support class: the horizontal a >= 3 divisor on F1 is
/// p l1 - (p^2+1) l2 + e.
inline EllClass dpsi_class() {
  const RatFn p = pp();
  return (gen4(L1, p) + gen4(L2, -(p * p + RatFn(1)))).with_exceptional(RatFn(1));
}

/// Intersection of a divisor from F1 with a generic fibre of F1 -> F2, given
/// the degree of l1 on that fibre; l2 is a pullback from F2 and contributes 0.
inline RatFn fiber_intersection(const EllClass& divisor, const RatFn& l1_degree_on_fiber) {
  if (!divisor.is_homogeneous(1)) throw std::invalid_argument("fiber_intersection: divisor expected");
  if (divisor.coefficient({1, 0, 0, 0}) != RatFn(0))
    throw std::invalid_argument("fiber_intersection: divisor must come from F1");
  return divisor.coefficient({0, 1, 0, 0}) * l1_degree_on_fiber;
}

/// lambda_4 = 0 on F0 (rank-4 bundle on a variety mapping to A_4 with
/// vanishing top Chern class on the supersingular locus).
inline RelationRow relation_lambda4() {
  return {"lambda4", "top Chern class of the Hodge bundle vanishes", linear_form(lambda_g4(4)), RatFn()};
}

/// c_3(A) = 0 for a rank-2 bundle A on F1, lifted to F0 by multiplying with l0.
inline EllClass c_A_total() {
  const RatFn p = pp();
  return one_plus(gen4(L2, RatFn(-1))) * series_inverse(one_plus(gen4(L2, -p))) *
         series_inverse(one_plus(gen4(L1) + gen4(C2)));
}
inline RelationRow relation_c3A() {
  EllClass c3 = c_A_total().part(3).substitute_c2(c2_value_g4());
  return {"c3(A)", "rank-2 bundle on F1, lifted by l0", linear_form(gen4(L0) * c3), RatFn()};
}

/// c_2(L) = 0 for a line bundle L on the preimage of a hyperplane section H
/// (class l2), pushed to F1 by multiplying with l2, then lifted by l0.
inline EllClass c_L_total() {
  const RatFn p = pp();
  EllClass num = one_plus(gen4(L2, -p));
  EllClass den = one_plus(gen4(L2, -(p * p))) * one_plus(gen4(L2, RatFn(-1))) *
                 one_plus(gen4(L1, p) + gen4(C2, p * p));
  return num * series_inverse(den);
}
inline EllClass c2L_on_H() { return c_L_total().part(2).substitute_c2(c2_value_g4()); }
inline RelationRow relation_c2L() {
  return {"c2(L)", "rank-1 bundle on the preimage of H, times l2, lifted by l0",
          linear_form(gen4(L0) * gen4(L2) * c2L_on_H()), RatFn()};
}

/// 2 c_2(Q_1) * (dpsi without e) = 0, lifted by l0.
inline RelationRow relation_final_stone() {
  EllClass c2 = c2_value_g4();
  return {"final stone", "c2(Q1) kills the a>=3 divisor and e, lifted by l0",
          linear_form(gen4(L0) * (RatFn(2) * c2) * dpsi_class().without_exceptional()), RatFn()};
}

/// Degrees entering the normalization l0 l1 l2^2 = p * p * (p^2+1):
/// h^2 on the surface F2 is (p^2+1) points, F1 -> F2 is inseparable of
/// degree p, l1 has degree p on a fibre, l0 has degree 1 on P^1-fibres.
struct AnchorData {
  RatFn surface_degree = RatFn(PPoly::p_power_plus(2, 1));
  RatFn inseparable_degree = pp();
  RatFn l1_on_fiber = pp();
  RatFn value() const { return surface_degree * inseparable_degree * l1_on_fiber; }
};
inline RelationRow anchor_row(const AnchorData& d = {}) {
  std::vector<RatFn> row(5);
  row[4] = RatFn(1);
  return {"anchor l0*l1*l2^2", "h^2 on F2 times inseparable degree times fibre degree", row, d.value()};
}

struct RelationSystem {
  std::vector<Exps> unknowns;
  std::vector<RelationRow> rows;

  linalg::Matrix<RatFn> matrix() const {
    linalg::Matrix<RatFn> m;
    for (const auto& r : rows) m.push_back(r.coeffs);
    return m;
  }
  std::vector<RatFn> rhs() const {
    std::vector<RatFn> b;
    for (const auto& r : rows) b.push_back(r.rhs);
    return b;
  }
  std::size_t rank() const { return linalg::rank(matrix()); }
  std::vector<RelationRow> homogeneous_rows() const {
    std::vector<RelationRow> out;
    for (const auto& r : rows)
      if (r.homogeneous()) out.push_back(r);
    return out;
  }
};

inline RelationSystem relation_system_g4() {
  return {unknowns_g4(), {relation_lambda4(), relation_c3A(), relation_c2L(), relation_final_stone(), anchor_row()}};
}

inline RatFn dot(const std::vector<RatFn>& a, const std::vector<RatFn>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  RatFn s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::vector<RatFn> solve(const RelationSystem& sys) {
  if (sys.rank() != sys.unknowns.size()) throw std::runtime_error("relation system is singular");
  auto x = linalg::solve_unique(sys.matrix(), sys.rhs());
  if (!x) throw std::runtime_error("relation system is inconsistent");
  return *x;
}

inline std::vector<RatFn> solve_g4() { return solve(relation_system_g4()); }

/// Row residuals lhs(x) - rhs.
inline std::vector<RatFn> residuals(const RelationSystem& sys, const std::vector<RatFn>& x) {
  std::vector<RatFn> out;
  for (const auto& r : sys.rows) out.push_back(dot(r.coeffs, x) - r.rhs);
  return out;
}

/// Solution of a rank-deficient system as an affine function a + b*x of the
/// unknown with index `free_index` (solved at x = 0 and x = 1).
inline std::vector<std::pair<RatFn, RatFn>> solve_affine_in(const RelationSystem& sys, std::size_t free_index) {
  auto at = [&](const RatFn& x) {
    RelationSystem s = sys;
    std::vector<RatFn> row(sys.unknowns.size());
    row[free_index] = RatFn(1);
    s.rows.push_back({"free", "parameter", row, x});
    return solve(s);
  };
  auto s0 = at(RatFn(0));
  auto s1 = at(RatFn(1));
  std::vector<std::pair<RatFn, RatFn>> out;
  for (std::size_t i = 0; i < s0.size(); ++i) out.emplace_back(s0[i], s1[i] - s0[i]);
  return out;
}

/// r with a == r*b coordinatewise, if one exists (b nonzero).
inline std::optional<RatFn> proportionality(const std::vector<RatFn>& a, const std::vector<RatFn>& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::optional<RatFn> r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i].is_zero()) {
      if (!a[i].is_zero()) return std::nullopt;
      continue;
    }
    RatFn q = a[i] / b[i];
    if (r && *r != q) return std::nullopt;
    r = q;
  }
  return r;
}

/// deg(lambda_3 lambda_1) on F0 as a linear form in the unknowns.
inline std::vector<RatFn> lambda3_lambda1_form() { return linear_form(lambda_g4(3) * lambda_g4(1)); }

inline PPoly to_poly(const RatFn& r) {
  if (!r.is_polynomial()) throw std::logic_error("expected a polynomial, got " + r.to_string());
  return r.num().scaled(1 / r.den().lead());
}

struct F4Derivation {
  std::vector<RatFn> degrees;       // solved unknowns
  RatFn deg_l3l1_on_F0;             // direct expansion at the solved degrees
  RatFn deg_l3l1_on_component;      // divided by the degree p of F0 -> S
  RatFn f4;                         // times N_4 / v(4)
  FactoredPPoly expected;           // (p-1)^3 (p^3-1)(p^4-1)(p^6-1)
  bool matches() const { return f4 == RatFn(expected.expand()); }
};

inline FactoredPPoly f4_expected() {
  return strata::ss_class(4).coefficient;
}

inline F4Derivation f4_derivation() {
  F4Derivation d;
  d.degrees = solve_g4();
  d.deg_l3l1_on_F0 = dot(lambda3_lambda1_form(), d.degrees);
  d.deg_l3l1_on_component = d.deg_l3l1_on_F0 / pp();
  FactoredPPoly n4 = strata::component_count_N(4);
  d.f4 = d.deg_l3l1_on_component * RatFn(n4.expand()) / RatFn(proportionality_v(4));
  d.expected = f4_expected();
  return d;
}

inline FactoredPPoly f4() {
  F4Derivation d = f4_derivation();
  if (!d.matches())
    throw std::runtime_error("f4 mismatch: derived " + d.f4.to_string() + ", expected " + d.expected.to_string() +
                             "; deg(l3 l1) on F0 = " + d.deg_l3l1_on_F0.to_string());
  return d.expected;
}

// ------------------------------------------------------------- crosscheck

struct Combination {
  std::string name;
  std::vector<RatFn> form;
  RatFn value;
};

struct PairVerdict {
  std::string first;
  std::string second;
  bool values_agree = false;
  bool difference_in_relation_span = false;
  std::optional<RatFn> ratio;  // first = ratio * second as linear forms
  RatFn difference;            // value(first) - value(second)
};

struct Crosscheck {
  std::vector<Combination> combinations;
  std::vector<PairVerdict> pairs;
};

/// The two reference combinations and the direct expansion for deg(lambda_3 lambda_1) on F0.
inline std::vector<Combination> lambda3_lambda1_combinations(const std::vector<RatFn>& sol) {
  const RatFn p = pp();
  const RatFn one(1);
  RatFn half_p14 = RatFn(Rational(1, 2)) * RatFn(PPoly::p_power_plus(1, -1).pow(4));
  std::vector<RatFn> cor{half_p14, half_p14, half_p14, RatFn(3) * half_p14, RatFn(3) * half_p14};
  std::vector<RatFn> fin{p * p - RatFn(3) * p + one, RatFn(2) * p * p - RatFn(2) * p + RatFn(2),
                         p * p - RatFn(3) * p + one, RatFn(4) * (p - one) * (p - one),
                         RatFn(5) * p * p - RatFn(7) * p + RatFn(5)};
  std::vector<RatFn> direct = lambda3_lambda1_form();
  return {{"half-(p-1)^4 combination", cor, dot(cor, sol)},
          {"closed-form combination", fin, dot(fin, sol)},
          {"direct expansion of lambda3*lambda1", direct, dot(direct, sol)}};
}

inline Crosscheck crosscheck_reference_g4() {
  RelationSystem sys = relation_system_g4();
  std::vector<RatFn> sol = solve(sys);
  Crosscheck out;
  out.combinations = lambda3_lambda1_combinations(sol);
  linalg::Matrix<RatFn> span;
  for (const auto& r : sys.homogeneous_rows()) span.push_back(r.coeffs);
  const std::size_t base_rank = linalg::rank(span);
  for (std::size_t i = 0; i < out.combinations.size(); ++i)
    for (std::size_t j = i + 1; j < out.combinations.size(); ++j) {
      const auto& a = out.combinations[i];
      const auto& b = out.combinations[j];
      PairVerdict v;
      v.first = a.name;
      v.second = b.name;
      v.difference = a.value - b.value;
      v.values_agree = v.difference.is_zero();
      std::vector<RatFn> diff(a.form.size());
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = a.form[k] - b.form[k];
      linalg::Matrix<RatFn> ext = span;
      ext.push_back(diff);
      v.difference_in_relation_span = linalg::rank(ext) == base_rank;
      v.ratio = proportionality(a.form, b.form);
      out.pairs.push_back(std::move(v));
    }
  return out;
}

// ---------------------------------------------------------------- genus 3

inline EllClass gen3(Gen g, const RatFn& c = RatFn(1)) { return EllClass::generator(3, g, c); }

/// c(E) on F0 for g = 3: (1-l1)(1+p l0) / [(1-p l1)(1+l0)].
inline EllClass chern_hodge_g3() {
  const RatFn p = pp();
  return one_plus(gen3(L1, RatFn(-1))) * one_plus(gen3(L0, p)) * series_inverse(one_plus(gen3(L1, -p))) *
         series_inverse(one_plus(gen3(L0)));
}

struct G3Chain {
  EllClass lambda1{3};
  EllClass lambda2{3};
  EllClass lambda1sq_minus_2lambda2{3};  // must be a nonzero multiple of l0^2
  RatFn l0sq_coefficient;
  RatFn deg_l0l1;
  RatFn deg_lambda2;
  RatFn f3;
  FactoredPPoly f3_expected;
  EllClass section_class{3};
  RatFn section_self_intersection;
};

/// Degree on the g=3 model once l0^2 = 0 is known: only l0*l1 survives.
inline RatFn degree_g3(const EllClass& c, const RatFn& deg_l0l1) {
  RatFn s;
  for (const auto& [e, k] : c.terms()) {
    if (weight(e) != 2) throw std::invalid_argument("degree_g3: class not of degree 2");
    if (e[L0] == 1 && e[L1] == 1) s += k * deg_l0l1;
  }
  return s;
}

inline G3Chain g3_chain() {
  G3Chain r;
  EllClass c = chern_hodge_g3();
  r.lambda1 = c.part(1);
  r.lambda2 = c.part(2);
  r.lambda1sq_minus_2lambda2 = r.lambda1 * r.lambda1 - RatFn(2) * r.lambda2;
  const Exps l0sq{2, 0, 0, 0};
  if (r.lambda1sq_minus_2lambda2.terms().size() != 1 || r.lambda1sq_minus_2lambda2.coefficient(l0sq).is_zero())
    throw std::logic_error("g3_chain: lambda1^2 - 2 lambda2 is not a nonzero multiple of l0^2");
  r.l0sq_coefficient = r.lambda1sq_minus_2lambda2.coefficient(l0sq);
  // l1 has degree p+1 on the Fermat curve F1; l0 is O(1) on the P^1-fibres.
  r.deg_l0l1 = RatFn(PPoly::p_power_plus(1, 1));
  r.deg_lambda2 = degree_g3(r.lambda2, r.deg_l0l1);
  r.f3 = r.deg_lambda2 * RatFn(strata::component_count_N(3).expand()) / RatFn(proportionality_v(3));
  r.f3_expected = strata::ss_class(3).coefficient;
  // Section S = l0 + x l1 with (l0 + l1) S = 0, since lambda_1 restricts to 0 on S.
  RatFn a = degree_g3(gen3(L0) * gen3(L1), r.deg_l0l1);  // coefficient of x in deg((l0+l1)(l0+x l1))
  RatFn b = degree_g3((gen3(L0) + gen3(L1)) * gen3(L0), r.deg_l0l1);
  auto x = linalg::solve_unique<RatFn>({{a}}, {-b});
  if (!x) throw std::logic_error("g3_chain: section equation degenerate");
  r.section_class = gen3(L0) + gen3(L1, (*x)[0]);
  r.section_self_intersection = degree_g3(r.section_class * r.section_class, r.deg_l0l1);
  return r;
}

}  // namespace sslocus::flagcalc
