#pragma once
/// Truncated Witt vectors W(F_{p^m})/p^N, normal-form Dieudonne matrices of
/// p-rank-zero modules with a-number one, semilinear Frobenius iteration and
/// a Newton-slope oracle.

#include <sslocus/exactpoly.hpp>
#include <sslocus/finitefield.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sslocus::dieudonne {

constexpr unsigned kMaxDegree = 8;

/// Element of (Z/p^N)[x]/(f) with f a monic lift of the residue modulus.
struct WittScalar {
  std::array<std::uint64_t, kMaxDegree> c{};
  friend bool operator==(const WittScalar&, const WittScalar&) = default;
};

using WMatrix = std::vector<std::vector<WittScalar>>;
using WVector = std::vector<WittScalar>;

/// Context for W(F_{p^m})/p^N. Immutable after construction.
class WittRing {
 public:
  WittRing(std::uint32_t p, unsigned m, unsigned N) : p_(p), m_(m), N_(N), F_(p, m) {
    if (m > kMaxDegree) throw std::invalid_argument("WittRing: residue degree too large");
    if (N < 1) throw std::invalid_argument("WittRing: precision must be >= 1");
    unsigned __int128 pn = 1;
    for (unsigned i = 0; i < N; ++i) {
      pn *= p;
      if (pn > (static_cast<unsigned __int128>(1) << 62)) throw std::invalid_argument("WittRing: p^N too large");
    }
    pN_ = static_cast<std::uint64_t>(pn);
    for (unsigned i = 0; i <= m; ++i) mod_[i] = F_.modulus()[i];
    build_sigma();
  }

  std::uint32_t p() const { return p_; }
  unsigned m() const { return m_; }
  unsigned N() const { return N_; }
  std::uint64_t pN() const { return pN_; }
  const finitefield::Fq& residue_field() const { return F_; }

  WittScalar zero() const { return {}; }
  WittScalar one() const { return from_int(1); }
  WittScalar from_int(long long k) const {
    WittScalar r;
    r.c[0] = reduce_signed(k);
    return r;
  }
  WittScalar from_coeffs(const std::vector<long long>& cs) const {
    if (cs.size() > m_) throw std::invalid_argument("WittRing::from_coeffs: too many coefficients");
    WittScalar r;
    for (std::size_t i = 0; i < cs.size(); ++i) r.c[i] = reduce_signed(cs[i]);
    return r;
  }
  /// x, the class of the generator of the residue extension.
  WittScalar x() const {
    if (m_ == 1) return from_int(-static_cast<long long>(mod_[0]));
    WittScalar r;
    r.c[1] = 1;
    return r;
  }
  WittScalar random(std::mt19937_64& rng) const {
    WittScalar r;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = rng() % pN_;
    return r;
  }

  bool is_zero(const WittScalar& a) const { return a == WittScalar{}; }

  WittScalar add(const WittScalar& a, const WittScalar& b) const {
    WittScalar r;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = addmod(a.c[i], b.c[i]);
    return r;
  }
  WittScalar neg(const WittScalar& a) const {
    WittScalar r;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = a.c[i] == 0 ? 0 : pN_ - a.c[i];
    return r;
  }
  WittScalar sub(const WittScalar& a, const WittScalar& b) const { return add(a, neg(b)); }
  WittScalar mul(const WittScalar& a, const WittScalar& b) const {
    std::array<std::uint64_t, 2 * kMaxDegree> t{};
    for (unsigned i = 0; i < m_; ++i) {
      if (a.c[i] == 0) continue;
      for (unsigned j = 0; j < m_; ++j) t[i + j] = addmod(t[i + j], mulmod(a.c[i], b.c[j]));
    }
    // x^m = -sum_{i<m} f_i x^i
    for (unsigned d = 2 * m_ - 2; d >= m_ && d < 2 * kMaxDegree; --d) {
      std::uint64_t top = t[d];
      if (top == 0) continue;
      t[d] = 0;
      for (unsigned i = 0; i < m_; ++i)
        if (mod_[i]) t[d - m_ + i] = submod(t[d - m_ + i], mulmod(top, mod_[i]));
    }
    WittScalar r;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = t[i];
    return r;
  }
  WittScalar scale(const WittScalar& a, long long k) const { return mul(a, from_int(k)); }
  WittScalar p_power_times(const WittScalar& a, unsigned k) const {
    WittScalar r = a;
    for (unsigned i = 0; i < k; ++i) r = scale(r, p_);
    return r;
  }

  /// p-adic valuation; N when a = 0 in W/p^N.
  unsigned valuation(const WittScalar& a) const {
    unsigned v = N_;
    for (unsigned i = 0; i < m_; ++i) {
      std::uint64_t x = a.c[i];
      if (x == 0) continue;
      unsigned k = 0;
      while (x % p_ == 0) {
        x /= p_;
        ++k;
      }
      v = std::min(v, k);
    }
    return v;
  }

  finitefield::Elem residue(const WittScalar& a) const {
    std::vector<std::uint32_t> cs(m_);
    for (unsigned i = 0; i < m_; ++i) cs[i] = static_cast<std::uint32_t>(a.c[i] % p_);
    return F_.from_coeffs(cs);
  }
  WittScalar lift(finitefield::Elem e) const {
    auto cs = F_.coeffs(e);
    WittScalar r;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = cs[i];
    return r;
  }
  bool is_unit(const WittScalar& a) const { return !F_.is_zero(residue(a)); }

  /// Inverse of a unit: residue inverse refined by b <- b (2 - a b).
  WittScalar inv(const WittScalar& a) const {
    if (!is_unit(a)) throw std::domain_error("WittRing::inv: not a unit");
    WittScalar b = lift(F_.inv(residue(a)));
    const WittScalar two = from_int(2);
    for (unsigned it = 0; it < 2 * N_ + 4; ++it) {
      WittScalar ab = mul(a, b);
      if (ab == one()) return b;
      b = mul(b, sub(two, ab));
    }
    throw std::logic_error("WittRing::inv: Newton iteration did not converge");
  }

  /// Exact quotient a / p^k for a divisible by p^k (a representative; the
  /// result is meaningful modulo p^{N-k}).
  WittScalar divide_p_power(const WittScalar& a, unsigned k) const {
    if (valuation(a) < k) throw std::domain_error("divide_p_power: not divisible");
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < k; ++i) pk *= p_;
    WittScalar r;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = a.c[i] / pk;
    return r;
  }

  /// Frobenius: the ring endomorphism fixing Z/p^N with sigma(x) the root of
  /// the modulus congruent to x^p.
  WittScalar sigma(const WittScalar& a) const {
    WittScalar r;
    for (unsigned j = 0; j < m_; ++j) {
      if (a.c[j] == 0) continue;
      for (unsigned i = 0; i < m_; ++i) r.c[i] = addmod(r.c[i], mulmod(a.c[j], sigma_pow_x_[j].c[i]));
    }
    return r;
  }
  WittScalar sigma(const WittScalar& a, unsigned k) const {
    WittScalar r = a;
    for (unsigned i = 0; i < k % m_; ++i) r = sigma(r);
    return r;
  }
  // for m = 1 the generator is the root of the linear modulus, fixed by sigma
  WittScalar sigma_of_x() const {
    return m_ > 1 ? sigma_pow_x_[1] : from_int(-static_cast<long long>(mod_[0]));
  }

  /// Evaluates the lifted modulus at y.
  WittScalar modulus_at(const WittScalar& y) const {
    WittScalar acc = zero();
    for (unsigned i = m_ + 1; i-- > 0;) acc = add(mul(acc, y), from_int(static_cast<long long>(mod_[i])));
    return acc;
  }

 private:
  std::uint64_t reduce_signed(long long k) const {
    long long r = static_cast<long long>(static_cast<__int128>(k) % static_cast<__int128>(pN_));
    if (r < 0) r += static_cast<long long>(pN_);
    return static_cast<std::uint64_t>(r);
  }
  std::uint64_t addmod(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= pN_ ? s - pN_ : s;
  }
  std::uint64_t submod(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + pN_ - b; }
  std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % pN_);
  }

  WittScalar pow(WittScalar a, std::uint64_t e) const {
    WittScalar r = one();
    while (e) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }

  void build_sigma() {
    // Newton iteration y <- y - f(y)/f'(y) from y = x^p.
    WittScalar y = pow(x(), p_);
    auto fprime = [&](const WittScalar& t) {
      WittScalar acc = zero();
      for (unsigned i = m_ + 1; i-- > 1;) acc = add(mul(acc, t), from_int(static_cast<long long>(mod_[i] * i)));
      return acc;
    };
    bool done = false;
    for (unsigned it = 0; it < 2 * N_ + 4; ++it) {
      WittScalar fy = modulus_at(y);
      if (is_zero(fy)) {
        done = true;
        break;
      }
      y = sub(y, mul(fy, inv(fprime(y))));
    }
    if (!done) throw std::logic_error("WittRing: Hensel lift of Frobenius failed");
    sigma_pow_x_.assign(m_, one());
    for (unsigned i = 1; i < m_; ++i) sigma_pow_x_[i] = mul(sigma_pow_x_[i - 1], y);
  }

  std::uint32_t p_;
  unsigned m_;
  unsigned N_;
  std::uint64_t pN_ = 0;
  finitefield::Fq F_;
  std::array<std::uint64_t, kMaxDegree + 1> mod_{};
  std::vector<WittScalar> sigma_pow_x_;  // sigma(x)^i, i < m
};

// ---------------------------------------------------------------- matrices

inline WMatrix zero_matrix(const WittRing& R, std::size_t n) { return WMatrix(n, WVector(n, R.zero())); }
inline WMatrix identity(const WittRing& R, std::size_t n) {
  WMatrix I = zero_matrix(R, n);
  for (std::size_t i = 0; i < n; ++i) I[i][i] = R.one();
  return I;
}
inline WMatrix matmul(const WittRing& R, const WMatrix& A, const WMatrix& B) {
  const std::size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
  WMatrix C(n, WVector(m, R.zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (R.is_zero(A[i][l])) continue;
      for (std::size_t j = 0; j < m; ++j) C[i][j] = R.add(C[i][j], R.mul(A[i][l], B[l][j]));
    }
  return C;
}
inline WVector matvec(const WittRing& R, const WMatrix& A, const WVector& v) {
  WVector out(A.size(), R.zero());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] = R.add(out[i], R.mul(A[i][j], v[j]));
  return out;
}
inline WMatrix transpose(const WMatrix& A) {
  WMatrix T(A.empty() ? 0 : A[0].size(), WVector(A.size()));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A[i].size(); ++j) T[j][i] = A[i][j];
  return T;
}
inline WMatrix sigma_matrix(const WittRing& R, const WMatrix& A, unsigned k = 1) {
  WMatrix B = A;
  for (auto& row : B)
    for (auto& x : row) x = R.sigma(x, k);
  return B;
}
inline unsigned valuation(const WittRing& R, const WMatrix& A) {
  unsigned v = R.N();
  for (const auto& row : A)
    for (const auto& x : row) v = std::min(v, R.valuation(x));
  return v;
}
inline unsigned valuation(const WittRing& R, const WVector& a) {
  unsigned v = R.N();
  for (const auto& x : a) v = std::min(v, R.valuation(x));
  return v;
}
inline WMatrix sub(const WittRing& R, const WMatrix& A, const WMatrix& B) {
  WMatrix C = A;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A[i].size(); ++j) C[i][j] = R.sub(A[i][j], B[i][j]);
  return C;
}

/// Matrix of F^n for the sigma-linear map with matrix A: A sigma(A) ... sigma^{n-1}(A).
inline WMatrix iterate_semilinear(const WittRing& R, const WMatrix& A, unsigned n) {
  if (n < 1) throw std::invalid_argument("iterate_semilinear: n >= 1");
  WMatrix M = A;
  for (unsigned k = 1; k < n; ++k) M = matmul(R, M, sigma_matrix(R, A, k));
  return M;
}

/// Coefficients [1, c_1, ..., c_n] of det(t I - A) by Berkowitz's
/// division-free algorithm.
inline WVector charpoly(const WittRing& R, const WMatrix& A) {
  const std::size_t n = A.size();
  if (n == 0) return {R.one()};
  WVector vec{R.one(), R.neg(A[n - 1][n - 1])};
  // grow from the bottom-right 1x1 block outward
  for (std::size_t s = n - 1; s-- > 0;) {
    const std::size_t k = n - s;  // size of the current block
    const WittScalar a = A[s][s];
    WVector Rr(k - 1), C(k - 1);
    for (std::size_t j = 0; j + 1 < k; ++j) {
      Rr[j] = A[s][s + 1 + j];
      C[j] = A[s + 1 + j][s];
    }
    WMatrix sub(k - 1, WVector(k - 1));
    for (std::size_t i = 0; i + 1 < k; ++i)
      for (std::size_t j = 0; j + 1 < k; ++j) sub[i][j] = A[s + 1 + i][s + 1 + j];
    // first column of the Toeplitz matrix: 1, -a, -R C, -R A' C, ...
    WVector col{R.one(), R.neg(a)};
    WVector cur = C;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      WittScalar d = R.zero();
      for (std::size_t j = 0; j + 1 < k; ++j) d = R.add(d, R.mul(Rr[j], cur[j]));
      col.push_back(R.neg(d));
      if (i + 2 < k) cur = matvec(R, sub, cur);
    }
    WVector next(k + 1, R.zero());
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = 0; j <= i && j < vec.size(); ++j) next[i] = R.add(next[i], R.mul(col[i - j], vec[j]));
    vec = std::move(next);
  }
  return vec;
}

/// Valuations of the elementary divisors over W/p^N (N marks an entry that
/// vanishes to full precision), ascending.
inline std::vector<unsigned> elementary_divisor_valuations(const WittRing& R, WMatrix M) {
  const std::size_t n = M.size();
  std::vector<unsigned> out;
  std::vector<bool> row_done(n, false), col_done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    unsigned best = R.N() + 1;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (row_done[i] || col_done[j]) continue;
        unsigned v = R.valuation(M[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best >= R.N()) {
      while (out.size() < n) out.push_back(R.N());
      break;
    }
    out.push_back(best);
    const WittScalar u_inv = R.inv(R.divide_p_power(M[bi][bj], best));
    for (std::size_t i = 0; i < n; ++i) {
      if (i == bi || row_done[i] || R.is_zero(M[i][bj])) continue;
      WittScalar f = R.mul(R.divide_p_power(M[i][bj], best), u_inv);
      for (std::size_t j = 0; j < n; ++j) M[i][j] = R.sub(M[i][j], R.mul(f, M[bi][j]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == bj || col_done[j] || R.is_zero(M[bi][j])) continue;
      WittScalar f = R.mul(R.divide_p_power(M[bi][j], best), u_inv);
      for (std::size_t i = 0; i < n; ++i) M[i][j] = R.sub(M[i][j], R.mul(f, M[i][bj]));
    }
    row_done[bi] = true;
    col_done[bj] = true;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ------------------------------------------------------------- normal form

/// Standard symplectic form [[0, I], [-I, 0]].
inline WMatrix standard_J(const WittRing& R, int g) {
  WMatrix J = zero_matrix(R, static_cast<std::size_t>(2 * g));
  for (int i = 0; i < g; ++i) {
    J[static_cast<std::size_t>(i)][static_cast<std::size_t>(g + i)] = R.one();
    J[static_cast<std::size_t>(g + i)][static_cast<std::size_t>(i)] = R.neg(R.one());
  }
  return J;
}

/// 1-based positions (i, j) of the entries in the sufficient criterion:
/// 2 <= i <= g-1, g+1 <= j <= 2g-2, i+j <= 2g.
inline std::vector<std::pair<int, int>> criterion_index_set(int g) {
  std::vector<std::pair<int, int>> out;
  for (int i = 2; i <= g - 1; ++i)
    for (int j = g + 1; j <= 2 * g - 2; ++j)
      if (i + j <= 2 * g) out.emplace_back(i, j);
  return out;
}

/// Symmetry of the block (gamma_{i,j})_{2<=i<=g, g+1<=j<=2g-1} pairs
/// (i, j) with (j-g+1, i+g-1).
inline std::pair<int, int> symmetric_partner(int g, int i, int j) { return {j - g + 1, i + g - 1}; }

/// Number of independent conditions in the criterion.
inline int criterion_condition_count(int g) {
  std::vector<std::pair<int, int>> reps;
  for (auto [i, j] : criterion_index_set(g)) {
    auto q = symmetric_partner(g, i, j);
    std::pair<int, int> key = std::min(std::make_pair(i, j), q);
    if (std::find(reps.begin(), reps.end(), key) == reps.end()) reps.push_back(key);
  }
  return static_cast<int>(reps.size());
}

struct GammaForm {
  int g = 0;
  WMatrix gamma;  // 2g x 2g

  const WittScalar& at(int i, int j) const {  // 1-based
    return gamma[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
  }
};

/// Normal form gamma = [[a, b], [c, d]] with a = d the shift e_j -> e_{j+1},
/// c = E_{1,g}, b_{1,j} = 0 for j < g, b_{1,g} = -1, b_{i,g} = 0 for i >= 2,
/// and (b_{i,j})_{i>=2, j<g} symmetric under (i, j) -> (j+1, i-1). These
/// conditions are exactly symplecticity for this shape, so the completion is
/// linear and never needs a retry. With ss_pattern, the criterion entries
/// and their partners are drawn from pW.
inline GammaForm random_gamma(const WittRing& R, int g, std::uint64_t seed, bool ss_pattern) {
  if (g < 1 || g > 4) throw std::invalid_argument("random_gamma: 1 <= g <= 4");
  std::mt19937_64 rng(seed);
  GammaForm G;
  G.g = g;
  G.gamma = zero_matrix(R, static_cast<std::size_t>(2 * g));
  auto set = [&](int i, int j, const WittScalar& v) {
    G.gamma[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = v;
  };
  for (int i = 2; i <= g; ++i) {
    set(i, i - 1, R.one());          // a
    set(g + i, g + i - 1, R.one());  // d
  }
  set(g + 1, g, R.one());            // c = E_{1,g}
  set(1, 2 * g, R.neg(R.one()));     // b_{1,g}
  auto forced = criterion_index_set(g);
  for (int i = 2; i <= g; ++i)
    for (int j = g + 1; j <= 2 * g - 1; ++j) {
      auto [pi, pj] = symmetric_partner(g, i, j);
      if (std::make_pair(pi, pj) < std::make_pair(i, j)) continue;
      bool in_pattern = std::find(forced.begin(), forced.end(), std::make_pair(i, j)) != forced.end() ||
                        std::find(forced.begin(), forced.end(), std::make_pair(pi, pj)) != forced.end();
      WittScalar v = R.random(rng);
      if (ss_pattern && in_pattern) v = R.p_power_times(v, 1);
      set(i, j, v);
      set(pi, pj, v);
    }
  return G;
}

inline bool is_symplectic(const WittRing& R, const GammaForm& G, unsigned precision) {
  WMatrix J = standard_J(R, G.g);
  WMatrix D = sub(R, matmul(R, matmul(R, G.gamma, J), transpose(G.gamma)), J);
  return valuation(R, D) >= precision;
}

/// F = [[a, p b], [c, p d]].
inline WMatrix f_matrix(const WittRing& R, const GammaForm& G) {
  WMatrix A = G.gamma;
  const std::size_t g = static_cast<std::size_t>(G.g);
  for (std::size_t i = 0; i < 2 * g; ++i)
    for (std::size_t j = g; j < 2 * g; ++j) A[i][j] = R.p_power_times(A[i][j], 1);
  return A;
}

inline bool ss_criterion_check(const WittRing& R, const GammaForm& G) {
  for (auto [i, j] : criterion_index_set(G.g))
    if (R.valuation(G.at(i, j)) < 1) return false;
  return true;
}

struct Eq4Result {
  bool pass = false;
  unsigned residual_valuation = 0;  // valuation of F^{2g} e1 - P e1
  unsigned required = 0;
};

/// F^{2g} e1 = P e1 with P = sum_{i<=g<j} p^{j-g} sigma^{2g-j}(gamma_ij) F^{2g+i-j-1}.
inline Eq4Result verify_eq4(const WittRing& R, const GammaForm& G) {
  const int g = G.g;
  if (R.N() < static_cast<unsigned>(2 * g + 2)) throw std::invalid_argument("verify_eq4: need N >= 2g+2");
  const WMatrix A = f_matrix(R, G);
  const std::size_t n = static_cast<std::size_t>(2 * g);
  std::vector<WVector> Fk(n + 1);  // F^k e1 = first column of iterate(A, k)
  Fk[0] = WVector(n, R.zero());
  Fk[0][0] = R.one();
  for (std::size_t k = 1; k <= n; ++k) {
    WMatrix M = iterate_semilinear(R, A, static_cast<unsigned>(k));
    Fk[k] = WVector(n);
    for (std::size_t i = 0; i < n; ++i) Fk[k][i] = M[i][0];
  }
  WVector rhs(n, R.zero());
  for (int i = 1; i <= g; ++i)
    for (int j = g + 1; j <= 2 * g; ++j) {
      WittScalar coef = R.p_power_times(R.sigma(G.at(i, j), static_cast<unsigned>(2 * g - j)), static_cast<unsigned>(j - g));
      const WVector& v = Fk[static_cast<std::size_t>(2 * g + i - j - 1)];
      for (std::size_t r = 0; r < n; ++r) rhs[r] = R.add(rhs[r], R.mul(coef, v[r]));
    }
  WVector diff(n);
  for (std::size_t r = 0; r < n; ++r) diff[r] = R.sub(Fk[n][r], rhs[r]);
  Eq4Result res;
  res.residual_valuation = valuation(R, diff);
  res.required = R.N() - static_cast<unsigned>(2 * g);
  res.pass = res.residual_valuation >= res.required;
  return res;
}

// ------------------------------------------------------------------ slopes

enum class SlopeStatus { conclusive, inconclusive };

struct SlopeProfile {
  SlopeStatus status = SlopeStatus::inconclusive;
  std::vector<Rational> slopes;                   // ascending, 2g entries when conclusive
  std::vector<std::optional<unsigned>> known_v;  // valuations of charpoly coefficients
  std::vector<unsigned> lower_bounds;
  std::string note;

  bool all_half() const {
    if (status != SlopeStatus::conclusive) return false;
    for (const auto& s : slopes)
      if (s != Rational(1, 2)) return false;
    return true;
  }
  bool symmetric() const {
    std::vector<Rational> mirrored;
    for (const auto& s : slopes) mirrored.push_back(1 - s);
    std::sort(mirrored.begin(), mirrored.end());
    return mirrored == slopes;
  }
  Rational total() const {
    Rational t = 0;
    for (const auto& s : slopes) t += s;
    return t;
  }
  std::string to_string() const {
    if (status != SlopeStatus::conclusive) return "inconclusive";
    std::string out = "[";
    for (std::size_t i = 0; i < slopes.size(); ++i) out += (i ? "," : "") + slopes[i].get_str();
    return out + "]";
  }
};

/// Lower convex hull of points (x, y) with exact rational evaluation.
struct Hull {
  std::vector<std::pair<long, long>> pts;
  Rational at(long x) const {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (pts[i].first <= x && x <= pts[i + 1].first) {
        Rational t(x - pts[i].first, pts[i + 1].first - pts[i].first);
        t.canonicalize();
        return Rational(pts[i].second) + t * Rational(pts[i + 1].second - pts[i].second);
      }
    throw std::out_of_range("Hull::at");
  }
};

inline Hull lower_hull(std::vector<std::pair<long, long>> pts) {
  std::sort(pts.begin(), pts.end());
  Hull h;
  for (const auto& q : pts) {
    while (h.pts.size() >= 2) {
      auto [x1, y1] = h.pts[h.pts.size() - 2];
      auto [x2, y2] = h.pts.back();
      // drop the middle point when it lies on or above the chord
      if ((y2 - y1) * (q.first - x1) >= (q.second - y1) * (x2 - x1))
        h.pts.pop_back();
      else
        break;
    }
    h.pts.push_back(q);
  }
  return h;
}

/// Newton slopes of F from the characteristic polynomial of the linear map
/// F^{m k}. Coefficient valuations at or beyond N - buffer count as unknown
/// lower bounds; the answer is conclusive only if no unknown coefficient can
/// lie below the hull of the known ones. The functional equation
/// c_{2g-j} = q^{g-j} c_j (q = p^{mk}) transfers known valuations across.
inline SlopeProfile newton_slopes(const WittRing& R, const GammaForm& G, unsigned k = 1, unsigned buffer = 2) {
  if (k < 1) throw std::invalid_argument("newton_slopes: k >= 1");
  const int g = G.g;
  const long mk = static_cast<long>(R.m() * k);
  const WMatrix Phi = iterate_semilinear(R, f_matrix(R, G), R.m() * k);
  const WVector c = charpoly(R, Phi);
  const unsigned limit = R.N() > buffer ? R.N() - buffer : 0;
  SlopeProfile prof;
  const std::size_t n = static_cast<std::size_t>(2 * g);
  prof.known_v.assign(n + 1, std::nullopt);
  for (std::size_t j = 0; j <= n; ++j) {
    unsigned v = R.valuation(c[j]);
    if (v < limit) prof.known_v[j] = v;
  }
  prof.known_v[0] = 0;
  prof.known_v[n] = static_cast<unsigned>(mk * g);
  for (std::size_t j = 0; j <= n; ++j) {
    std::size_t jj = n - j;
    if (prof.known_v[j] && !prof.known_v[jj]) {
      long shift = mk * (static_cast<long>(g) - static_cast<long>(j));
      long v = shift + static_cast<long>(*prof.known_v[j]);
      if (v >= 0) prof.known_v[jj] = static_cast<unsigned>(v);
    } else if (prof.known_v[j] && prof.known_v[jj]) {
      long lhs = static_cast<long>(*prof.known_v[jj]);
      long rhs = mk * (static_cast<long>(g) - static_cast<long>(j)) + static_cast<long>(*prof.known_v[j]);
      if (lhs != rhs) {
        prof.note = "functional equation violated at j=" + std::to_string(j);
        return prof;
      }
    }
  }
  std::vector<std::pair<long, long>> pts;
  for (std::size_t j = 0; j <= n; ++j)
    if (prof.known_v[j]) pts.emplace_back(static_cast<long>(j), static_cast<long>(*prof.known_v[j]));
  Hull h = lower_hull(pts);
  prof.lower_bounds.assign(n + 1, 0);
  for (std::size_t j = 0; j <= n; ++j) {
    if (prof.known_v[j]) {
      prof.lower_bounds[j] = *prof.known_v[j];
      continue;
    }
    // an unknown c_j is >= limit directly, and via the functional equation
    long mirror = mk * (static_cast<long>(g) - static_cast<long>(n - j)) + static_cast<long>(limit);
    long lb = std::max<long>(limit, mirror);
    prof.lower_bounds[j] = static_cast<unsigned>(std::max<long>(lb, 0));
    if (Rational(lb) < h.at(static_cast<long>(j))) {
      prof.note = "precision insufficient at coefficient " + std::to_string(j);
      return prof;
    }
  }
  for (std::size_t s = 0; s + 1 < h.pts.size(); ++s) {
    long dx = h.pts[s + 1].first - h.pts[s].first;
    Rational slope(h.pts[s + 1].second - h.pts[s].second, dx * mk);
    slope.canonicalize();
    for (long t = 0; t < dx; ++t) prof.slopes.push_back(slope);
  }
  std::sort(prof.slopes.begin(), prof.slopes.end());
  prof.status = SlopeStatus::conclusive;
  return prof;
}

/// Newton polygon vertices of the characteristic polynomial as a function of
/// the index, for comparing with the Hodge polygon of the same matrix.
inline Rational polygon_value(const std::vector<Rational>& sorted_slopes_scaled, std::size_t j) {
  Rational s = 0;
  for (std::size_t i = 0; i < j && i < sorted_slopes_scaled.size(); ++i) s += sorted_slopes_scaled[i];
  return s;
}

// ------------------------------------------------------------------ trials

struct Trial {
  std::uint64_t seed = 0;
  bool ss_pattern = false;
  bool criterion = false;
  bool symplectic = false;
  SlopeProfile slopes;
  Eq4Result eq4;
};

struct TrialSummary {
  int g = 0;
  std::uint32_t p = 0;
  unsigned m = 0;
  unsigned N = 0;
  std::vector<Trial> trials;

  std::size_t count_if(bool (*pred)(const Trial&)) const {
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), pred));
  }
  /// criterion true implies all slopes 1/2, over conclusive trials.
  bool implication_holds() const {
    for (const auto& t : trials)
      if (t.criterion && t.slopes.status == SlopeStatus::conclusive && !t.slopes.all_half()) return false;
    return true;
  }
  std::size_t inconclusive() const {
    return count_if([](const Trial& t) { return t.slopes.status != SlopeStatus::conclusive; });
  }
  std::size_t rejected() const {
    return count_if([](const Trial& t) { return t.slopes.status == SlopeStatus::conclusive && !t.slopes.all_half(); });
  }
  bool all_eq4() const {
    return count_if([](const Trial& t) { return t.eq4.pass; }) == trials.size();
  }
};

inline unsigned default_precision(int g) { return static_cast<unsigned>(2 * g + 4); }

inline TrialSummary run_trials(int g, std::uint32_t p, unsigned m, unsigned N, unsigned count, std::uint64_t seed,
                               bool ss_pattern, unsigned k = 1) {
  WittRing R(p, m, N);
  TrialSummary s{g, p, m, N, {}};
  for (unsigned t = 0; t < count; ++t) {
    Trial tr;
    tr.seed = seed + t;
    tr.ss_pattern = ss_pattern;
    GammaForm G = random_gamma(R, g, tr.seed, ss_pattern);
    tr.criterion = ss_criterion_check(R, G);
    tr.symplectic = is_symplectic(R, G, R.N());
    tr.slopes = newton_slopes(R, G, k);
    tr.eq4 = verify_eq4(R, G);
    s.trials.push_back(std::move(tr));
  }
  return s;
}

}  // namespace sslocus::dieudonne
