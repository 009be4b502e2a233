#pragma once
/// The tautological ring R_g = Q[l_1..l_g] / ((1+l_1+...+l_g)(1-l_1+...+(-1)^g l_g) = 1),
/// with basis the square-free monomials l_{i1}...l_{ik}. A basis monomial is a
/// bitmask: bit i-1 set means l_i is present.

#include <sslocus/exactpoly.hpp>
#include <sslocus/linalg.hpp>

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sslocus::tautring {

using Mask = std::uint32_t;
constexpr int kMaxGenus = 12;

inline void check_genus(int g) {
  if (g < 1 || g > kMaxGenus) throw std::invalid_argument("tautring: genus out of range");
}

inline int weight(Mask m) {
  int w = 0;
  for (int i = 0; m; ++i, m >>= 1U)
    if (m & 1U) w += i + 1;
  return w;
}

inline Mask full_mask(int g) { return (Mask{1} << g) - 1; }
inline int top_degree(int g) { return g * (g + 1) / 2; }

/// Square-free basis monomials of R_g in a given degree, ascending by mask.
inline std::vector<Mask> basis(int g, int degree) {
  check_genus(g);
  std::vector<Mask> out;
  for (Mask m = 0; m <= full_mask(g); ++m)
    if (weight(m) == degree) out.push_back(m);
  return out;
}

inline std::string monomial_name(Mask m) {
  if (m == 0) return "1";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; m; ++i, m >>= 1U) {
    if (!(m & 1U)) continue;
    if (!first) os << "*";
    os << "l" << (i + 1);
    first = false;
  }
  return os.str();
}

/// Element of R_g in the square-free basis with coefficients in Q or Q(p).
template <class Coeff>
class TautClass {
 public:
  explicit TautClass(int g) : g_(g) { check_genus(g); }

  static TautClass unit(int g) { return monomial(g, 0, Coeff(1)); }
  static TautClass lambda(int g, int i) {
    if (i < 0 || i > g) throw std::invalid_argument("lambda index out of range");
    if (i == 0) return unit(g);
    return monomial(g, Mask{1} << (i - 1), Coeff(1));
  }
  static TautClass monomial(int g, Mask m, Coeff c) {
    TautClass r(g);
    r.add_term(m, c);
    return r;
  }

  int genus() const { return g_; }
  const std::map<Mask, Coeff>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coeff coefficient(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(Mask m, const Coeff& c) {
    if ((m & ~full_mask(g_)) != 0) throw std::invalid_argument("monomial outside R_g");
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) it->second += c;
    if (it->second == Coeff(0)) terms_.erase(it);
  }

  /// Homogeneous components keyed by degree.
  std::map<int, TautClass> grading() const {
    std::map<int, TautClass> out;
    for (const auto& [m, c] : terms_) out.try_emplace(weight(m), g_).first->second.add_term(m, c);
    return out;
  }
  bool is_homogeneous(int degree) const {
    for (const auto& [m, c] : terms_)
      if (weight(m) != degree) return false;
    return true;
  }

  TautClass& operator+=(const TautClass& o) {
    same_genus(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  TautClass& operator-=(const TautClass& o) {
    same_genus(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend TautClass operator+(TautClass a, const TautClass& b) { return a += b; }
  friend TautClass operator-(TautClass a, const TautClass& b) { return a -= b; }
  friend TautClass operator*(const Coeff& s, const TautClass& a) {
    TautClass r(a.g_);
    if (s == Coeff(0)) return r;
    for (const auto& [m, c] : a.terms_) r.add_term(m, s * c);
    return r;
  }
  friend bool operator==(const TautClass& a, const TautClass& b) { return a.g_ == b.g_ && a.terms_ == b.terms_; }
  friend bool operator!=(const TautClass& a, const TautClass& b) { return !(a == b); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << coeff_string(c) << ")*" << monomial_name(m);
    }
    return os.str();
  }

 private:
  static std::string coeff_string(const Coeff& c) {
    if constexpr (requires { c.to_string(); }) {
      return c.to_string();
    } else {
      return c.get_str();
    }
  }
  void same_genus(const TautClass& o) const {
    if (o.g_ != g_) throw std::invalid_argument("TautClass genus mismatch");
  }
  int g_;
  std::map<Mask, Coeff> terms_;
};

/// One rewrite rule per generator: l_i^2 = 2 sum_{k=1}^{i} (-1)^{k-1} l_{i-k} l_{i+k},
/// with l_0 = 1 and l_j = 0 for j > g. Right-hand sides are square-free.
class RewriteTable {
 public:
  explicit RewriteTable(int g) : g_(g), rules_(static_cast<std::size_t>(g) + 1) {
    check_genus(g);
    for (int i = 1; i <= g; ++i) {
      auto& rule = rules_[static_cast<std::size_t>(i)];
      for (int k = 1; k <= i && i + k <= g; ++k) {
        Mask m = Mask{1} << (i + k - 1);
        if (i - k > 0) m |= Mask{1} << (i - k - 1);
        rule.emplace_back(m, (k % 2 == 1) ? 2 : -2);
      }
    }
  }
  int genus() const { return g_; }
  /// Square-free expansion of l_i^2 as (mask, integer coefficient) pairs.
  const std::vector<std::pair<Mask, int>>& square_rule(int i) const { return rules_.at(static_cast<std::size_t>(i)); }

 private:
  int g_;
  std::vector<std::vector<std::pair<Mask, int>>> rules_;
};

/// Formal polynomial in l_1..l_g before reduction; keys are exponent vectors.
template <class Coeff>
struct LambdaPoly {
  int g;
  std::map<std::vector<int>, Coeff> terms;

  explicit LambdaPoly(int genus) : g(genus) { check_genus(genus); }
  void add(std::vector<int> exps, const Coeff& c) {
    if (static_cast<int>(exps.size()) != g) throw std::invalid_argument("LambdaPoly: exponent vector size");
    for (int e : exps)
      if (e < 0) throw std::invalid_argument("LambdaPoly: negative exponent");
    auto [it, fresh] = terms.try_emplace(std::move(exps), c);
    if (!fresh) it->second += c;
  }
};

enum class RewriteOrder { highest_index_first, lowest_index_first };

/// Normal form of a formal polynomial. Each rewrite replaces l_i^2 by terms
/// whose index-square sum is strictly larger, which bounds the process.
template <class Coeff>
TautClass<Coeff> reduce(const LambdaPoly<Coeff>& expr, RewriteOrder order = RewriteOrder::highest_index_first) {
  const int g = expr.g;
  RewriteTable table(g);
  TautClass<Coeff> out(g);
  std::map<std::vector<int>, Coeff> pending;
  for (const auto& [e, c] : expr.terms)
    if (c != Coeff(0)) pending[e] += c;
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    std::vector<int> e = std::move(node.key());
    Coeff c = std::move(node.mapped());
    if (c == Coeff(0)) continue;
    int pick = -1;
    if (order == RewriteOrder::highest_index_first) {
      for (int i = g; i >= 1 && pick < 0; --i)
        if (e[static_cast<std::size_t>(i - 1)] >= 2) pick = i;
    } else {
      for (int i = 1; i <= g && pick < 0; ++i)
        if (e[static_cast<std::size_t>(i - 1)] >= 2) pick = i;
    }
    if (pick < 0) {
      Mask m = 0;
      for (int i = 0; i < g; ++i)
        if (e[static_cast<std::size_t>(i)] == 1) m |= Mask{1} << i;
      out.add_term(m, c);
      continue;
    }
    e[static_cast<std::size_t>(pick - 1)] -= 2;
    for (const auto& [m, k] : table.square_rule(pick)) {
      std::vector<int> f = e;
      for (int i = 0; i < g; ++i)
        if (m & (Mask{1} << i)) f[static_cast<std::size_t>(i)] += 1;
      auto [it, fresh] = pending.try_emplace(std::move(f), Coeff(k) * c);
      if (!fresh) it->second += Coeff(k) * c;
    }
  }
  return out;
}

template <class Coeff>
TautClass<Coeff> mul(const TautClass<Coeff>& a, const TautClass<Coeff>& b,
                     RewriteOrder order = RewriteOrder::highest_index_first) {
  if (a.genus() != b.genus()) throw std::invalid_argument("mul: genus mismatch");
  const int g = a.genus();
  LambdaPoly<Coeff> expr(g);
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<int> e(static_cast<std::size_t>(g), 0);
      for (int i = 0; i < g; ++i) {
        if (ma & (Mask{1} << i)) ++e[static_cast<std::size_t>(i)];
        if (mb & (Mask{1} << i)) ++e[static_cast<std::size_t>(i)];
      }
      expr.add(std::move(e), ca * cb);
    }
  return reduce(expr, order);
}

template <class Coeff>
TautClass<Coeff> operator*(const TautClass<Coeff>& a, const TautClass<Coeff>& b) {
  return mul(a, b);
}

/// Degree of a top-degree class: its coefficient on l_1...l_g times v(g).
template <class Coeff>
Coeff socle_degree(const TautClass<Coeff>& c) {
  const int g = c.genus();
  if (!c.is_homogeneous(top_degree(g))) throw std::invalid_argument("socle_degree: class is not of top degree");
  return c.coefficient(full_mask(g)) * Coeff(proportionality_v(static_cast<unsigned>(g)));
}

/// Image in R_g / (l_g): drops every monomial containing l_g.
template <class Coeff>
TautClass<Coeff> quotient_open(const TautClass<Coeff>& c) {
  const int g = c.genus();
  const Mask lg = Mask{1} << (g - 1);
  TautClass<Coeff> r(g);
  for (const auto& [m, k] : c.terms())
    if (!(m & lg)) r.add_term(m, k);
  return r;
}

/// Reads a l_g-free class as an element of R_{g-1}.
template <class Coeff>
TautClass<Coeff> to_lower_genus(const TautClass<Coeff>& c) {
  const int g = c.genus();
  if (g < 2) throw std::invalid_argument("to_lower_genus: genus must be >= 2");
  TautClass<Coeff> r(g - 1);
  for (const auto& [m, k] : c.terms()) {
    if (m & (Mask{1} << (g - 1))) throw std::invalid_argument("to_lower_genus: class involves l_g");
    r.add_term(m, k);
  }
  return r;
}

/// Pairing matrix R^n x R^{top-n} -> Q on basis monomials (socle coefficients).
inline linalg::Matrix<Rational> gorenstein_pairing_matrix(int g, int n) {
  auto rows = basis(g, n);
  auto cols = basis(g, top_degree(g) - n);
  linalg::Matrix<Rational> m(rows.size(), std::vector<Rational>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      auto prod = mul(TautClass<Rational>::monomial(g, rows[i], 1), TautClass<Rational>::monomial(g, cols[j], 1));
      m[i][j] = prod.coefficient(full_mask(g));
    }
  return m;
}

}  // namespace sslocus::tautring
