#pragma once
/// Cycle classes of strata of the moduli of principally polarized abelian
/// varieties in characteristic p, expressed in the tautological ring, and the
/// closed-form counts and masses that tie them together.

#include <sslocus/exactpoly.hpp>
#include <sslocus/tautring.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace sslocus::strata {

using tautring::Mask;

/// coefficient(p) * monomial in R_g.
struct StratumClass {
  int g = 0;
  std::string label;
  FactoredPPoly coefficient;
  Mask monomial = 0;

  tautring::TautClass<RatFn> as_taut() const {
    return tautring::TautClass<RatFn>::monomial(g, monomial, RatFn(coefficient.expand()));
  }
  std::string to_string() const { return coefficient.to_string() + "*" + tautring::monomial_name(monomial); }
};

/// lhs == rhs as polynomials in p (rational functions when needed).
struct CountIdentity {
  std::string name;
  RatFn lhs;
  RatFn rhs;
  std::string lhs_text;
  std::string rhs_text;

  bool holds_symbolically() const { return lhs == rhs; }
  bool holds_at(long p) const { return lhs(Rational(p)) == rhs(Rational(p)); }
};

inline PPoly pk(unsigned k, long sign) { return PPoly::p_power_plus(k, sign); }

inline Mask lambda_mask(std::initializer_list<int> idx) {
  Mask m = 0;
  for (int i : idx) m |= Mask{1} << (i - 1);
  return m;
}

/// l_g l_{g-2} ... ending in l_1 (odd g) or l_2 (even g).
inline Mask ss_class_shape(int g) {
  if (g < 1) throw std::invalid_argument("ss_class_shape: g >= 1");
  Mask m = 0;
  for (int i = g; i >= 1; i -= 2) m |= Mask{1} << (i - 1);
  return m;
}

/// Class of the supersingular locus, tabulated for g <= 4.
inline StratumClass ss_class(int g) {
  StratumClass s;
  s.g = g;
  s.label = "S_" + std::to_string(g);
  switch (g) {
    case 1:
      s.coefficient = FactoredPPoly(1).times(pk(1, -1));
      s.monomial = lambda_mask({1});
      break;
    case 2:
      s.coefficient = FactoredPPoly(1).times(pk(1, -1)).times(pk(2, -1));
      s.monomial = lambda_mask({2});
      break;
    case 3:
      s.coefficient = FactoredPPoly(1).times(pk(1, -1), 2).times(pk(3, -1)).times(pk(4, -1));
      s.monomial = lambda_mask({1, 3});
      break;
    case 4:
      s.coefficient = FactoredPPoly(1).times(pk(1, -1), 3).times(pk(3, -1)).times(pk(4, -1)).times(pk(6, -1));
      s.monomial = lambda_mask({2, 4});
      break;
    default:
      throw std::invalid_argument("ss_class: only g <= 4 is known");
  }
  return s;
}

/// Closure of the p-rank <= f locus: prod_{i=1}^{g-f} (p^i - 1) * l_{g-f}.
inline StratumClass eo_prank_class(int g, int f) {
  if (g < 1 || f < 0 || f > g) throw std::invalid_argument("eo_prank_class: need 0 <= f <= g");
  StratumClass s;
  s.g = g;
  s.label = "V_f<=" + std::to_string(f);
  s.coefficient = FactoredPPoly(1);
  for (int i = 1; i <= g - f; ++i) s.coefficient.times(pk(static_cast<unsigned>(i), -1));
  s.monomial = (g == f) ? 0 : lambda_mask({g - f});
  return s;
}

/// Closure of the g=3 stratum with elementary sequence [0,1,1]; the p-rank-zero
/// stratum minus the supersingular part.
inline StratumClass eo_class_g3_ab() {
  StratumClass s;
  s.g = 3;
  s.label = "V_[3,2]";
  s.coefficient = FactoredPPoly(1).times(pk(1, -1), 2).times(pk(6, -1));
  s.monomial = lambda_mask({2, 3});
  return s;
}

/// Superspecial mass: prod_{i=1}^{g} (p^i + (-1)^i) * v(g).
inline FactoredPPoly superspecial_mass(int g) {
  if (g < 1) throw std::invalid_argument("superspecial_mass: g >= 1");
  FactoredPPoly r(proportionality_v(static_cast<unsigned>(g)));
  for (int i = 1; i <= g; ++i) r.times(pk(static_cast<unsigned>(i), (i % 2 == 0) ? 1 : -1));
  return r;
}

/// Number of irreducible components of the supersingular locus, as a multiple
/// of v(g): odd g uses (p-1)(p^2+1)(p^3-1)...(p^g-1), even g uses
/// (p^2-1)(p^6-1)...(p^{2g-2}-1).
inline FactoredPPoly component_count_N(int g) {
  if (g < 1) throw std::invalid_argument("component_count_N: g >= 1");
  FactoredPPoly r(proportionality_v(static_cast<unsigned>(g)));
  if (g % 2 == 1) {
    for (int i = 1; i <= g; ++i) r.times(pk(static_cast<unsigned>(i), (i % 2 == 0) ? 1 : -1));
  } else {
    for (int j = 1; j <= g / 2; ++j) r.times(pk(static_cast<unsigned>(4 * j - 2), -1));
  }
  return r;
}

/// N_g / superspecial mass for even g: prod_{i=1}^{g/2} (p^{2i-1}+1)/(p^{2i}+1).
inline RatFn correction_factor(int g) {
  if (g < 2 || g % 2 != 0) throw std::invalid_argument("correction_factor: g must be even");
  PPoly num(1), den(1);
  for (int i = 1; i <= g / 2; ++i) {
    num *= pk(static_cast<unsigned>(2 * i - 1), 1);
    den *= pk(static_cast<unsigned>(2 * i), 1);
  }
  return RatFn(num, den);
}

/// deg(class * l_{mask}) through the socle of R_g.
inline RatFn degree_against(const StratumClass& s, Mask complement) {
  auto prod = tautring::mul(s.as_taut(), tautring::TautClass<RatFn>::monomial(s.g, complement, RatFn(1)));
  return tautring::socle_degree(prod);
}

inline RatFn as_ratfn(const FactoredPPoly& f) { return RatFn(f.expand()); }

/// Consistency relations among masses, component counts and stratum degrees.
inline std::vector<CountIdentity> consistency_identities(int g) {
  std::vector<CountIdentity> out;
  if (g == 3) {
    const Rational v3 = proportionality_v(3);
    // deg of the [3,2] stratum on l_1 divided by the (p-1) components per point
    RatFn m32 = degree_against(eo_class_g3_ab(), lambda_mask({1})) / RatFn(pk(1, -1));
    RatFn m32_closed = RatFn(pk(1, -1) * pk(6, -1) * PPoly(v3));
    out.push_back({"m32 from class of V_[3,2]", m32, m32_closed, "deg([V_[3,2]] l1)/(p-1)", "(p-1)(p^6-1)v(3)"});
    RatFn deg_v321 = as_ratfn(superspecial_mass(3));
    out.push_back({"m32 vs superspecial mass", m32 * RatFn(pk(2, 1)), deg_v321 * RatFn(pk(3, 1)),
                   "m32*(p^2+1)", "deg(V_[3,2,1])*(p^3+1)"});
    RatFn n3 = as_ratfn(component_count_N(3));
    out.push_back({"N3 double count", n3 * RatFn(pk(3, 1) * pk(2, 1)), deg_v321 * RatFn(pk(2, 1) * pk(3, 1)),
                   "N3*(p^3+1)(p^2+1)", "deg(V_[3,2,1])*(p^2+1)(p^3+1)"});
    out.push_back({"N3 equals superspecial mass", n3, deg_v321, "N3", "superspecial mass g=3"});
  } else if (g == 4) {
    RatFn n4 = as_ratfn(component_count_N(4));
    RatFn sigma4 = as_ratfn(superspecial_mass(4));
    out.push_back({"N4 double count", n4 * RatFn(pk(2, 1).pow(3) * pk(3, 1) * pk(4, 1)),
                   sigma4 * RatFn(pk(1, 1) * pk(2, 1).pow(2) * pk(3, 1).pow(2)), "N4*(p^2+1)^3(p^3+1)(p^4+1)",
                   "Sigma4*(p+1)(p^2+1)^2(p^3+1)^2"});
    // F_{p^2}-points of the component F0 along its tower of fibrations
    PPoly f2 = pk(2, 1) * pk(4, 1);
    PPoly f0_chain = f2 * pk(2, 1) * pk(3, 1) * pk(2, 1);
    out.push_back({"F0 point count along the tower", RatFn(f0_chain), RatFn(pk(2, 1).pow(3) * pk(3, 1) * pk(4, 1)),
                   "#F2*(p^2+1)*(p^3+1)*(p^2+1)", "(p^2+1)^3(p^3+1)(p^4+1)"});
    out.push_back({"N4 = mass * correction", n4, sigma4 * correction_factor(4), "N4", "Sigma4*correction(4)"});
  } else if (g == 2) {
    out.push_back({"N2 = mass * correction", as_ratfn(component_count_N(2)),
                   as_ratfn(superspecial_mass(2)) * correction_factor(2), "N2", "Sigma2*correction(2)"});
  } else {
    throw std::invalid_argument("consistency_identities: g must be 2, 3 or 4");
  }
  return out;
}

}  // namespace sslocus::strata
