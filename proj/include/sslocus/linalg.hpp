#pragma once
/// Dense Gaussian elimination over an exact field. The field is supplied as a
/// policy so the same code serves Q, Q(p) and finite fields.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sslocus::linalg {

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Field operations through the value type's own operators.
template <class T>
struct OperatorField {
  T zero() const { return T(0); }
  T one() const { return T(1); }
  bool is_zero(const T& a) const {
    if constexpr (requires { a.is_zero(); }) {
      return a.is_zero();
    } else {
      return a == T(0);
    }
  }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T div(const T& a, const T& b) const { return a / b; }
};

/// In-place reduced row echelon form; returns pivot columns.
template <class T, class F = OperatorField<T>>
std::vector<std::size_t> rref(Matrix<T>& m, const F& f = F{}) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!f.is_zero(m[i][c])) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    T inv_lead = f.div(f.one(), m[r][c]);
    for (std::size_t j = c; j < cols; ++j) m[r][j] = f.mul(m[r][j], inv_lead);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || f.is_zero(m[i][c])) continue;
      T factor = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = f.sub(m[i][j], f.mul(factor, m[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T, class F = OperatorField<T>>
std::size_t rank(Matrix<T> m, const F& f = F{}) {
  return rref(m, f).size();
}

/// Unique solution of A x = b, or nullopt when the system is inconsistent or
/// underdetermined.
template <class T, class F = OperatorField<T>>
std::optional<std::vector<T>> solve_unique(const Matrix<T>& a, const std::vector<T>& b, const F& f = F{}) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_unique: shape mismatch");
  if (a.empty()) return std::nullopt;
  const std::size_t n = a[0].size();
  Matrix<T> aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  std::vector<std::size_t> piv = rref(aug, f);
  if (!piv.empty() && piv.back() == n) return std::nullopt;  // inconsistent
  if (piv.size() != n) return std::nullopt;
  std::vector<T> x(n, f.zero());
  for (std::size_t i = 0; i < n; ++i) x[piv[i]] = aug[i][n];
  return x;
}

}  // namespace sslocus::linalg
