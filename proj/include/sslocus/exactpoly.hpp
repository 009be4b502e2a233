#pragma once
/// Exact rational arithmetic in one indeterminate p: polynomials, factored
/// polynomials, rational functions, and the Bernoulli / zeta(1-2k) values
/// behind the proportionality constants v(g).

#include <gmpxx.h>

#include <cstddef>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sslocus {

using Rational = mpq_class;

inline std::string rational_to_string(const Rational& q) { return q.get_str(); }

/// Dense univariate polynomial over Q in the indeterminate p.
/// Invariant: no trailing zero coefficients (the zero polynomial is empty).
class PPoly {
 public:
  PPoly() = default;
  explicit PPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  PPoly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) c_.push_back(c);
  }
  PPoly(long c) : PPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  PPoly(int c) : PPoly(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static PPoly p() { return monomial(1, 1); }
  static PPoly monomial(const Rational& c, std::size_t k) {
    std::vector<Rational> v(k + 1, Rational(0));
    v[k] = c;
    return PPoly(std::move(v));
  }
  /// p^k + sign
  static PPoly p_power_plus(unsigned k, long sign) { return monomial(1, k) + PPoly(sign); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& lead() const {
    if (c_.empty()) throw std::domain_error("lead() of zero polynomial");
    return c_.back();
  }
  bool is_constant() const { return c_.size() <= 1; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  PPoly& operator+=(const PPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  PPoly& operator-=(const PPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  PPoly& operator*=(const PPoly& o) { return *this = *this * o; }

  friend PPoly operator+(PPoly a, const PPoly& b) { return a += b; }
  friend PPoly operator-(PPoly a, const PPoly& b) { return a -= b; }
  friend PPoly operator-(PPoly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend PPoly operator*(const PPoly& a, const PPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return PPoly(std::move(r));
  }
  friend bool operator==(const PPoly& a, const PPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const PPoly& a, const PPoly& b) { return !(a == b); }

  PPoly pow(unsigned e) const {
    PPoly r(1), b = *this;
    while (e) {
      if (e & 1U) r *= b;
      e >>= 1U;
      if (e) b *= b;
    }
    return r;
  }

  PPoly monic() const {
    if (is_zero()) return {};
    PPoly r = *this;
    Rational l = lead();
    for (auto& x : r.c_) x /= l;
    return r;
  }

  PPoly scaled(const Rational& s) const {
    PPoly r = *this;
    for (auto& x : r.c_) x *= s;
    r.trim();
    return r;
  }

  std::string to_string(std::string_view var = "p") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const Rational& a = c_[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      Rational mag = abs(a);
      if (first) {
        if (a < 0) os << "-";
      } else {
        os << (a < 0 ? " - " : " + ");
      }
      first = false;
      bool unit = (mag == 1);
      if (!unit || i == 0) os << mag.get_str();
      if (i > 0) {
        if (!unit) os << "*";
        os << var;
        if (i > 1) os << "^" << i;
      }
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline std::ostream& operator<<(std::ostream& os, const PPoly& a) { return os << a.to_string(); }

/// Euclidean division a = q*b + r with deg r < deg b.
inline std::pair<PPoly, PPoly> divmod(const PPoly& a, const PPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r = a.coefficients();
  const int db = b.degree();
  const int da = a.degree();
  if (da < db) return {PPoly{}, a};
  std::vector<Rational> q(static_cast<std::size_t>(da - db + 1), Rational(0));
  for (int i = da; i >= db; --i) {
    Rational t = r[static_cast<std::size_t>(i)] / b.lead();
    if (t == 0) continue;
    q[static_cast<std::size_t>(i - db)] = t;
    for (int j = 0; j <= db; ++j)
      r[static_cast<std::size_t>(i - db + j)] -= t * b.coefficient(static_cast<std::size_t>(j));
  }
  return {PPoly(std::move(q)), PPoly(std::move(r))};
}

/// Monic gcd; gcd(0, 0) = 0.
inline PPoly gcd(PPoly a, PPoly b) {
  while (!b.is_zero()) {
    PPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// A scalar times a product of polynomial factors with multiplicities, kept
/// unexpanded for readable output.
class FactoredPPoly {
 public:
  FactoredPPoly() = default;
  explicit FactoredPPoly(Rational scalar) : scalar_(std::move(scalar)) {}
  FactoredPPoly(Rational scalar, std::vector<std::pair<PPoly, unsigned>> factors)
      : scalar_(std::move(scalar)), factors_(std::move(factors)) {}

  const Rational& scalar() const { return scalar_; }
  const std::vector<std::pair<PPoly, unsigned>>& factors() const { return factors_; }

  FactoredPPoly& times(const PPoly& f, unsigned mult = 1) {
    if (mult) factors_.emplace_back(f, mult);
    return *this;
  }
  FactoredPPoly& times(const Rational& s) {
    scalar_ *= s;
    return *this;
  }
  friend FactoredPPoly operator*(FactoredPPoly a, const FactoredPPoly& b) {
    a.scalar_ *= b.scalar_;
    a.factors_.insert(a.factors_.end(), b.factors_.begin(), b.factors_.end());
    return a;
  }

  PPoly expand() const {
    PPoly r(scalar_);
    for (const auto& [f, e] : factors_) r *= f.pow(e);
    return r;
  }
  Rational operator()(const Rational& x) const { return expand()(x); }

  std::string to_string() const {
    std::ostringstream os;
    bool any = false;
    if (scalar_ != 1 || factors_.empty()) {
      os << scalar_.get_str();
      any = true;
    }
    for (const auto& [f, e] : factors_) {
      if (any) os << "*";
      os << "(" << f.to_string() << ")";
      if (e > 1) os << "^" << e;
      any = true;
    }
    return os.str();
  }

 private:
  Rational scalar_{1};
  std::vector<std::pair<PPoly, unsigned>> factors_;
};

/// Element of Q(p) as num/den with gcd 1 and monic denominator.
class RatFn {
 public:
  RatFn() : num_(), den_(1) {}
  RatFn(PPoly n) : num_(std::move(n)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFn(const Rational& c) : num_(c), den_(1) {}   // NOLINT(google-explicit-constructor)
  RatFn(long c) : RatFn(Rational(c)) {}            // NOLINT(google-explicit-constructor)
  RatFn(int c) : RatFn(Rational(c)) {}             // NOLINT(google-explicit-constructor)
  RatFn(PPoly n, PPoly d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::domain_error("RatFn with zero denominator");
    canonicalize();
  }

  const PPoly& num() const { return num_; }
  const PPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  Rational operator()(const Rational& x) const {
    Rational d = den_(x);
    if (d == 0) throw std::domain_error("RatFn evaluated at a pole");
    return num_(x) / d;
  }

  RatFn inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero RatFn");
    return RatFn(den_, num_);
  }

  friend RatFn operator+(const RatFn& a, const RatFn& b) {
    if (a.den_ == b.den_) return RatFn(a.num_ + b.num_, a.den_);
    return RatFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFn operator-(const RatFn& a, const RatFn& b) {
    if (a.den_ == b.den_) return RatFn(a.num_ - b.num_, a.den_);
    return RatFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFn operator-(const RatFn& a) {
    RatFn r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFn operator*(const RatFn& a, const RatFn& b) {
    if (a.is_zero() || b.is_zero()) return RatFn();
    if (a.is_polynomial() && b.is_polynomial()) {
      RatFn r;
      r.num_ = a.num_ * b.num_;
      return r;
    }
    return RatFn(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFn operator/(const RatFn& a, const RatFn& b) { return a * b.inverse(); }
  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
  RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
  RatFn& operator/=(const RatFn& o) { return *this = *this / o; }
  friend bool operator==(const RatFn& a, const RatFn& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

  std::string to_string() const {
    if (is_polynomial()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

 private:
  void canonicalize() {
    if (num_.is_zero()) {
      den_ = PPoly(1);
      return;
    }
    PPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
    Rational l = den_.lead();
    if (l != 1) {
      num_ = num_.scaled(1 / l);
      den_ = den_.scaled(1 / l);
    }
  }
  PPoly num_;
  PPoly den_;
};

inline std::ostream& operator<<(std::ostream& os, const RatFn& a) { return os << a.to_string(); }

inline Rational binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

/// B_0..B_n with B_1 = -1/2, from sum_{k=0}^{n} C(n+1,k) B_k = 0.
inline std::vector<Rational> bernoulli_table(unsigned n) {
  std::vector<Rational> b(n + 1);
  b[0] = 1;
  for (unsigned m = 1; m <= n; ++m) {
    Rational s = 0;
    for (unsigned k = 0; k < m; ++k) s += binomial(m + 1, k) * b[k];
    b[m] = -s / Rational(m + 1);
  }
  return b;
}

/// Bernoulli number B_n for even n >= 2.
inline Rational bernoulli(unsigned n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("bernoulli: n must be even and >= 2");
  return bernoulli_table(n)[n];
}

/// zeta(1 - 2k) = -B_{2k} / (2k), k >= 1.
inline Rational zeta_neg(unsigned k) {
  if (k == 0) throw std::invalid_argument("zeta_neg: k must be >= 1");
  return -bernoulli(2 * k) / Rational(2 * k);
}

/// v(g) = (-1)^{g(g+1)/2} 2^{-g} prod_{k=1}^{g} zeta(1-2k); v(0) = 1.
inline Rational proportionality_v(unsigned g) {
  Rational r = 1;
  if (g == 0) return r;
  std::vector<Rational> b = bernoulli_table(2 * g);
  for (unsigned k = 1; k <= g; ++k) r *= -b[2 * k] / Rational(2 * k);
  mpz_class two_g;
  mpz_ui_pow_ui(two_g.get_mpz_t(), 2, g);
  r /= Rational(two_g);
  if ((static_cast<unsigned long>(g) * (g + 1) / 2) % 2 == 1) r = -r;
  return r;
}

}  // namespace sslocus
