#pragma once
/// Finite fields F_{p^m}, exhaustive projective point counts, isotropic
/// subspace counts, and the Jacobian rank checks on the explicit equations of
/// the flag spaces.

#include <sslocus/linalg.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace sslocus::finitefield {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

namespace detail {

/// Polynomials over F_p as coefficient vectors, low degree first, trimmed.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly polymod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  std::uint32_t inv_lead = 1;
  for (std::uint32_t x = 1; x < p; ++x)
    if ((static_cast<std::uint64_t>(x) * b.back()) % p == 1) inv_lead = x;
  while (a.size() > db && !a.empty()) {
    std::uint32_t t = static_cast<std::uint32_t>((static_cast<std::uint64_t>(a.back()) * inv_lead) % p);
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j)
      a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + static_cast<std::uint64_t>(p - t) * b[j]) % p);
    trim(a);
  }
  return a;
}

inline Poly from_index(std::uint64_t idx, std::uint32_t p, unsigned len) {
  Poly a(len, 0);
  for (unsigned i = 0; i < len; ++i) {
    a[i] = static_cast<std::uint32_t>(idx % p);
    idx /= p;
  }
  return a;
}

/// Irreducibility by trial division with every monic polynomial of degree
/// 1..m/2.
inline bool irreducible(const Poly& f, std::uint32_t p) {
  const unsigned m = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; d <= m / 2; ++d) {
    const std::uint64_t count = ipow(p, d);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly h = from_index(idx, p, d);
      h.push_back(1);
      if (polymod(f, h, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// F_{p^m} with elements indexed by their coefficient vectors in base p
/// (index = sum c_i p^i) over a fixed irreducible modulus.
class Fq {
 public:
  struct Elem {
    std::uint32_t v = 0;
    friend auto operator<=>(const Elem&, const Elem&) = default;
  };

  Fq(std::uint32_t p, unsigned m) : p_(p), m_(m) {
    if (!is_prime(p)) throw std::invalid_argument("Fq: p must be prime");
    if (m < 1 || m > 12) throw std::invalid_argument("Fq: extension degree out of range");
    q_ = ipow(p, m);
    if (q_ > (1U << 24)) throw std::invalid_argument("Fq: field too large for table arithmetic");
    find_modulus();
    build_tables();
  }

  std::uint32_t p() const { return p_; }
  unsigned m() const { return m_; }
  std::uint64_t size() const { return q_; }
  /// Monic modulus coefficients c_0..c_m.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Elem zero() const { return {0}; }
  Elem one() const { return {1}; }
  Elem from_int(long k) const {
    long r = k % static_cast<long>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r)};
  }
  Elem element(std::uint64_t index) const {
    if (index >= q_) throw std::out_of_range("Fq::element");
    return {static_cast<std::uint32_t>(index)};
  }
  /// Element with the given F_p-coordinates (low degree first).
  Elem from_coeffs(const std::vector<std::uint32_t>& c) const {
    std::uint64_t idx = 0;
    for (std::size_t i = c.size(); i-- > 0;) idx = idx * p_ + (c[i] % p_);
    return element(idx);
  }
  std::vector<std::uint32_t> coeffs(Elem a) const { return detail::from_index(a.v, p_, m_); }
  Elem primitive() const { return {exp_[1]}; }

  bool is_zero(Elem a) const { return a.v == 0; }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return {a.v ^ b.v};
    std::uint32_t r = 0, mul = 1, x = a.v, y = b.v;
    for (unsigned i = 0; i < m_; ++i) {
      r += ((x % p_ + y % p_) % p_) * mul;
      x /= p_;
      y /= p_;
      mul *= p_;
    }
    return {r};
  }
  Elem neg(Elem a) const {
    if (p_ == 2) return a;
    std::uint32_t r = 0, mul = 1, x = a.v;
    for (unsigned i = 0; i < m_; ++i) {
      r += ((p_ - x % p_) % p_) * mul;
      x /= p_;
      mul *= p_;
    }
    return {r};
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a.v == 0 || b.v == 0) return zero();
    std::uint64_t s = static_cast<std::uint64_t>(log_[a.v]) + log_[b.v];
    if (s >= q_ - 1) s -= q_ - 1;
    return {exp_[s]};
  }
  Elem inv(Elem a) const {
    if (a.v == 0) throw std::domain_error("Fq: inverse of zero");
    std::uint64_t l = log_[a.v];
    return {exp_[l == 0 ? 0 : (q_ - 1 - l)]};
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  /// a^e with 0^0 = 1.
  Elem pow(Elem a, std::uint64_t e) const {
    if (e == 0) return one();
    if (a.v == 0) return zero();
    std::uint64_t l = (static_cast<unsigned __int128>(log_[a.v]) * e) % (q_ - 1);
    return {exp_[l]};
  }
  /// a^{p^k}
  Elem frob(Elem a, unsigned k = 1) const {
    for (unsigned i = 0; i < k % m_; ++i) a = pow(a, p_);
    return a;
  }
  /// The unique b with b^p = a.
  Elem pth_root(Elem a) const { return frob(a, m_ - 1); }
  /// a lies in the subfield F_{p^d} (d must divide m).
  bool in_subfield(Elem a, unsigned d) const { return frob(a, d) == a; }

  Elem random(std::mt19937_64& rng) const { return {static_cast<std::uint32_t>(rng() % q_)}; }
  Elem random_nonzero(std::mt19937_64& rng) const { return {static_cast<std::uint32_t>(1 + rng() % (q_ - 1))}; }

 private:
  void find_modulus() {
    if (m_ == 1) {
      modulus_ = {0, 1};
      return;
    }
    const std::uint64_t count = ipow(p_, m_);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      detail::Poly f = detail::from_index(idx, p_, m_);
      f.push_back(1);
      if (f[0] == 0) continue;
      if (detail::irreducible(f, p_)) {
        modulus_ = f;
        return;
      }
    }
    throw std::logic_error("Fq: no irreducible modulus found");
  }

  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
    detail::Poly x = detail::from_index(a, p_, m_), y = detail::from_index(b, p_, m_);
    detail::Poly r(2 * m_, 0);
    for (unsigned i = 0; i < m_; ++i)
      for (unsigned j = 0; j < m_; ++j) r[i + j] = static_cast<std::uint32_t>((r[i + j] + x[i] * y[j]) % p_);
    r = detail::polymod(r, modulus_, p_);
    std::uint32_t idx = 0;
    for (std::size_t i = r.size(); i-- > 0;) idx = idx * p_ + r[i];
    return idx;
  }

  void build_tables() {
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    for (std::uint32_t cand = 1; cand < q_; ++cand) {
      std::uint32_t x = 1;
      std::uint64_t order = 0;
      do {
        exp_[order] = x;
        x = slow_mul(x, cand);
        ++order;
      } while (x != 1 && order < q_ - 1);
      if (x == 1 && order == q_ - 1) {
        for (std::uint64_t i = 0; i < q_ - 1; ++i) log_[exp_[i]] = static_cast<std::uint32_t>(i);
        return;
      }
    }
    throw std::logic_error("Fq: no primitive element");
  }

  std::uint32_t p_;
  unsigned m_;
  std::uint64_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

using Elem = Fq::Elem;

/// Field policy so the generic elimination runs over Fq.
struct FqField {
  const Fq* F;
  Elem zero() const { return F->zero(); }
  Elem one() const { return F->one(); }
  bool is_zero(Elem a) const { return F->is_zero(a); }
  Elem add(Elem a, Elem b) const { return F->add(a, b); }
  Elem sub(Elem a, Elem b) const { return F->sub(a, b); }
  Elem mul(Elem a, Elem b) const { return F->mul(a, b); }
  Elem div(Elem a, Elem b) const { return F->div(a, b); }
};

inline std::size_t rank(const Fq& F, linalg::Matrix<Elem> m) { return linalg::rank(std::move(m), FqField{&F}); }

// ------------------------------------------------------------ polynomials

/// Sparse multivariate polynomial with integer coefficients read in F_p.
struct MPoly {
  struct Term {
    long coeff;
    std::vector<std::uint64_t> exps;
  };
  std::size_t nvars = 0;
  std::vector<Term> terms;

  MPoly& add(long c, std::vector<std::uint64_t> e) {
    if (e.size() != nvars) throw std::invalid_argument("MPoly: exponent vector size");
    terms.push_back({c, std::move(e)});
    return *this;
  }

  Elem eval(const Fq& F, std::span<const Elem> x) const {
    Elem s = F.zero();
    for (const auto& t : terms) {
      Elem v = F.from_int(t.coeff);
      for (std::size_t i = 0; i < nvars && !F.is_zero(v); ++i)
        if (t.exps[i]) v = F.mul(v, F.pow(x[i], t.exps[i]));
      s = F.add(s, v);
    }
    return s;
  }

  /// Formal partial derivative; exponents divisible by p differentiate to 0.
  MPoly partial(std::size_t var, std::uint32_t p) const {
    MPoly d;
    d.nvars = nvars;
    for (const auto& t : terms) {
      std::uint64_t e = t.exps[var];
      if (e == 0 || e % p == 0) continue;
      Term u = t;
      u.coeff = static_cast<long>((static_cast<std::uint64_t>(((t.coeff % static_cast<long>(p)) + p) % p) * (e % p)) % p);
      u.exps[var] = e - 1;
      if (u.coeff != 0) d.terms.push_back(std::move(u));
    }
    return d;
  }
};

// ------------------------------------------------------ projective counting

enum class Traversal { ascending, descending };

struct CountOptions {
  std::uint64_t budget = 20'000'000;  // maximal number of enumerated objects
  Traversal order = Traversal::ascending;
  unsigned threads = 1;
};

inline std::uint64_t projective_size(std::uint64_t q, unsigned n_coords) {
  return (ipow(q, n_coords) - 1) / (q - 1);
}

/// Counts points of P^{n-1}(F) (n homogeneous coordinates, first nonzero
/// coordinate normalized to 1) satisfying pred. Work is split into blocks by
/// the position of the leading 1 and the value of the next coordinate.
inline std::uint64_t count_projective(const Fq& F, unsigned n_coords,
                                      const std::function<bool(std::span<const Elem>)>& pred,
                                      const CountOptions& opt = {}) {
  const std::uint64_t q = F.size();
  if (projective_size(q, n_coords) > opt.budget)
    throw BudgetExceeded("enumeration of " + std::to_string(projective_size(q, n_coords)) +
                         " projective points exceeds budget " + std::to_string(opt.budget));
  struct Block {
    unsigned lead;
    std::optional<std::uint64_t> second;
  };
  std::vector<Block> blocks;
  for (unsigned lead = 0; lead < n_coords; ++lead) {
    if (lead + 1 < n_coords) {
      for (std::uint64_t v = 0; v < q; ++v) blocks.push_back({lead, v});
    } else {
      blocks.push_back({lead, std::nullopt});
    }
  }
  if (opt.order == Traversal::descending) std::reverse(blocks.begin(), blocks.end());

  auto run_block = [&](const Block& b) {
    std::vector<Elem> x(n_coords, F.zero());
    x[b.lead] = F.one();
    unsigned first_free = b.lead + 1;
    if (b.second) {
      x[b.lead + 1] = F.element(*b.second);
      first_free = b.lead + 2;
    }
    const unsigned nfree = n_coords - first_free;
    std::uint64_t total = ipow(q, nfree), hits = 0;
    for (std::uint64_t t = 0; t < total; ++t) {
      std::uint64_t idx = (opt.order == Traversal::ascending) ? t : (total - 1 - t);
      for (unsigned i = 0; i < nfree; ++i) {
        x[first_free + i] = F.element(idx % q);
        idx /= q;
      }
      if (pred(x)) ++hits;
    }
    return hits;
  };

  const unsigned nthreads = std::max(1U, std::min<unsigned>(opt.threads, static_cast<unsigned>(blocks.size())));
  std::vector<std::uint64_t> partial(nthreads, 0);
  auto worker = [&](unsigned tid) {
    for (std::size_t i = tid; i < blocks.size(); i += nthreads) partial[tid] += run_block(blocks[i]);
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  std::uint64_t sum = 0;
  for (auto v : partial) sum += v;
  return sum;
}

inline std::uint64_t count_hypersurface(const Fq& F, const MPoly& f, const CountOptions& opt = {}) {
  return count_projective(
      F, static_cast<unsigned>(f.nvars), [&](std::span<const Elem> x) { return F.is_zero(f.eval(F, x)); }, opt);
}

// ------------------------------------------------------- explicit varieties

/// a^{p+1} + b^{p+1} + c^{p+1}
inline MPoly fermat_poly(std::uint32_t p) {
  MPoly f;
  f.nvars = 3;
  f.add(1, {p + 1ULL, 0, 0}).add(1, {0, p + 1ULL, 0}).add(1, {0, 0, p + 1ULL});
  return f;
}

/// x1 x4^Q - x1^Q x4 + x2 x3^Q - x2^Q x3 with Q = p^e. For e = 2 this is the
/// surface F2, for e = 1 the surface G1.
inline MPoly frobenius_form_poly(std::uint32_t p, unsigned e) {
  const std::uint64_t Q = ipow(p, e);
  MPoly f;
  f.nvars = 4;
  f.add(1, {1, 0, 0, Q}).add(-1, {Q, 0, 0, 1}).add(1, {0, 1, Q, 0}).add(-1, {0, Q, 1, 0});
  return f;
}
inline MPoly f2_poly(std::uint32_t p) { return frobenius_form_poly(p, 2); }
inline MPoly g1_poly(std::uint32_t p) { return frobenius_form_poly(p, 1); }

inline Fq field_p2(std::uint32_t p) { return Fq(p, 2); }

inline std::uint64_t count_fermat_curve(std::uint32_t p, const CountOptions& opt = {}) {
  Fq F = field_p2(p);
  return count_hypersurface(F, fermat_poly(p), opt);
}
inline std::uint64_t count_F2_surface(std::uint32_t p, const CountOptions& opt = {}) {
  Fq F = field_p2(p);
  return count_hypersurface(F, f2_poly(p), opt);
}
inline std::uint64_t count_G1_surface(std::uint32_t p, const CountOptions& opt = {}) {
  Fq F = field_p2(p);
  return count_hypersurface(F, g1_poly(p), opt);
}

/// A linear substitution x -> T x; counts of f(T x) = 0 must equal counts of f.
using LinearMap = std::vector<std::vector<Elem>>;

inline std::uint64_t count_hypersurface_twisted(const Fq& F, const MPoly& f, const LinearMap& T,
                                                const CountOptions& opt = {}) {
  const unsigned n = static_cast<unsigned>(f.nvars);
  return count_projective(
      F, n,
      [&](std::span<const Elem> x) {
        std::vector<Elem> y(n, F.zero());
        for (unsigned i = 0; i < n; ++i)
          for (unsigned j = 0; j < n; ++j) y[i] = F.add(y[i], F.mul(T[i][j], x[j]));
        return F.is_zero(f.eval(F, y));
      },
      opt);
}

/// Isometries of x1 x4^Q - x1^Q x4 + x2 x3^Q - x2^Q x3 used for spot checks:
/// the pair swap (x1,x4) <-> (x2,x3), the signed swap x1 -> x4, x4 -> -x1,
/// and the scaling (c, 1, 1, c^{-Q}) with c^{Q^2-1} = 1.
inline std::vector<LinearMap> sample_isometries(const Fq& F, unsigned e, std::mt19937_64& rng) {
  const Elem o = F.one(), z = F.zero(), mo = F.neg(F.one());
  LinearMap swap_pairs{{z, o, z, z}, {o, z, z, z}, {z, z, z, o}, {z, z, o, z}};
  LinearMap signed_swap{{z, z, z, o}, {z, o, z, z}, {z, z, o, z}, {mo, z, z, z}};
  Elem c = F.random_nonzero(rng);
  // c must lie in F_{Q^2}; over F_{p^2} every element qualifies for e = 1, 2.
  Elem d = F.inv(F.frob(c, e));
  LinearMap scale{{c, z, z, z}, {z, o, z, z}, {z, z, o, z}, {z, z, z, d}};
  return {swap_pairs, signed_swap, scale};
}

// --------------------------------------------------------- isotropic counts

enum class FormKind { hermitian, symplectic };

/// The standard form sum_{i<=n/2} (x_i y*_{n+1-i} - x_{n+1-i} y*_i) on F^n,
/// where y* = y^{p^conj_power} (hermitian) or y* = y (symplectic).
inline Elem standard_form(const Fq& F, FormKind kind, unsigned conj_power, std::span<const Elem> x,
                          std::span<const Elem> y) {
  const std::size_t n = x.size();
  auto bar = [&](Elem a) { return kind == FormKind::hermitian ? F.frob(a, conj_power) : a; };
  Elem s = F.zero();
  for (std::size_t i = 0; i < n / 2; ++i) {
    std::size_t j = n - 1 - i;
    s = F.add(s, F.sub(F.mul(x[i], bar(y[j])), F.mul(x[j], bar(y[i]))));
  }
  return s;
}

inline std::uint64_t gaussian_binomial(std::uint64_t q, unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= ipow(q, n - i) - 1;
    den *= ipow(q, i + 1) - 1;
  }
  return num / den;
}

/// Enumerates every k-dimensional subspace of F^n through its reduced
/// echelon basis and calls visit(basis).
inline void for_each_subspace(const Fq& F, unsigned n, unsigned k,
                              const std::function<void(const std::vector<std::vector<Elem>>&)>& visit) {
  const std::uint64_t q = F.size();
  std::vector<unsigned> piv(k);
  for (unsigned i = 0; i < k; ++i) piv[i] = i;
  while (true) {
    // free slots: (row r, column c) with c > piv[r] and c not a pivot
    std::vector<std::pair<unsigned, unsigned>> slots;
    for (unsigned r = 0; r < k; ++r)
      for (unsigned c = piv[r] + 1; c < n; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(r, c);
    std::vector<std::vector<Elem>> basis(k, std::vector<Elem>(n, F.zero()));
    for (unsigned r = 0; r < k; ++r) basis[r][piv[r]] = F.one();
    const std::uint64_t total = ipow(q, static_cast<unsigned>(slots.size()));
    for (std::uint64_t t = 0; t < total; ++t) {
      std::uint64_t idx = t;
      for (const auto& [r, c] : slots) {
        basis[r][c] = F.element(idx % q);
        idx /= q;
      }
      visit(basis);
    }
    // next combination
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && piv[static_cast<unsigned>(i)] == n - k + static_cast<unsigned>(i)) --i;
    if (i < 0) break;
    ++piv[static_cast<unsigned>(i)];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

/// Number of totally isotropic k-dimensional subspaces of F_{p^2}^n for the
/// standard form. conj_power selects the hermitian conjugation x -> x^{p^e}.
inline std::uint64_t count_isotropic(FormKind kind, unsigned n, unsigned k, std::uint32_t p,
                                     unsigned conj_power = 1, std::uint64_t budget = 20'000'000) {
  if (n % 2 != 0 || n == 0) throw std::invalid_argument("count_isotropic: n must be even");
  if (k == 0 || k > n) throw std::invalid_argument("count_isotropic: 1 <= k <= n");
  Fq F = field_p2(p);
  if (gaussian_binomial(F.size(), n, k) > budget) throw BudgetExceeded("count_isotropic: Grassmannian exceeds budget");
  std::uint64_t hits = 0;
  for_each_subspace(F, n, k, [&](const std::vector<std::vector<Elem>>& b) {
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j)
        if (!F.is_zero(standard_form(F, kind, conj_power, b[i], b[j]))) return;
    ++hits;
  });
  return hits;
}

// ------------------------------------------------------------- quadric Q

struct QuadricReport {
  std::uint64_t count_p5;       // Plücker quadric and hyperplane in P^5
  std::uint64_t count_p4;       // after eliminating l14 = -l23
  std::uint64_t klein_quadric;  // Plücker quadric alone, for the subset bound
  std::uint64_t singular_points;
  std::uint64_t smooth_formula;  // (q+1)(q^2+1)
};

/// Coordinates (l12, l13, l14, l23, l24, l34).
inline QuadricReport count_quadric_Q(std::uint32_t p, const CountOptions& opt = {}) {
  Fq F = field_p2(p);
  const std::uint64_t q = F.size();
  auto plucker = [&](std::span<const Elem> x) {
    return F.add(F.sub(F.mul(x[0], x[5]), F.mul(x[1], x[4])), F.mul(x[2], x[3]));
  };
  QuadricReport r{};
  r.count_p5 = count_projective(
      F, 6, [&](std::span<const Elem> x) { return F.is_zero(plucker(x)) && F.is_zero(F.add(x[2], x[3])); }, opt);
  r.klein_quadric = count_projective(F, 6, [&](std::span<const Elem> x) { return F.is_zero(plucker(x)); }, opt);
  // P^4 coordinates (l12, l13, l23, l24, l34): l12 l34 - l13 l24 - l23^2
  MPoly Q;
  Q.nvars = 5;
  Q.add(1, {1, 0, 0, 0, 1}).add(-1, {0, 1, 0, 1, 0}).add(-1, {0, 0, 2, 0, 0});
  r.count_p4 = count_hypersurface(F, Q, opt);
  std::vector<MPoly> d;
  for (std::size_t i = 0; i < 5; ++i) d.push_back(Q.partial(i, p));
  r.singular_points = count_projective(
      F, 5,
      [&](std::span<const Elem> x) {
        if (!F.is_zero(Q.eval(F, x))) return false;
        for (const auto& di : d)
          if (!F.is_zero(di.eval(F, x))) return false;
        return true;
      },
      opt);
  r.smooth_formula = (q + 1) * (q * q + 1);
  return r;
}

// ------------------------------------------------------------ fiber curve

struct FiberCurveReport {
  std::uint64_t count = 0;                        // points over the given field
  std::vector<std::vector<Elem>> singular_points;  // normalized (a5 : a7 : a8)
  bool a2_in_Fp2 = false;
};

/// The curve a8^p + a2 a7^p - a5^{p-1} (a8 + a2^p a7) = 0 in P^2 with
/// coordinates (a5 : a7 : a8), analyzed over a field F containing a2.
inline FiberCurveReport analyze_fiber_curve(const Fq& F, Elem a2, const CountOptions& opt = {}) {
  const std::uint32_t p = F.p();
  const Elem a2p = F.pow(a2, p);
  const Elem mone = F.neg(F.one());
  auto f = [&](std::span<const Elem> x) {
    const Elem a5 = x[0], a7 = x[1], a8 = x[2];
    Elem t = F.add(F.pow(a8, p), F.mul(a2, F.pow(a7, p)));
    return F.sub(t, F.mul(F.pow(a5, p - 1), F.add(a8, F.mul(a2p, a7))));
  };
  // formal partials: d/da8 and d/da7 kill the p-th powers
  auto d5 = [&](std::span<const Elem> x) {
    // -(p-1) a5^{p-2} (a8 + a2^p a7), with a5^0 = 1
    Elem c = F.mul(F.from_int(-static_cast<long>(p - 1)), F.pow(x[0], p - 2));
    return F.mul(c, F.add(x[2], F.mul(a2p, x[1])));
  };
  auto d7 = [&](std::span<const Elem> x) { return F.mul(mone, F.mul(F.pow(x[0], p - 1), a2p)); };
  auto d8 = [&](std::span<const Elem> x) { return F.mul(mone, F.pow(x[0], p - 1)); };

  FiberCurveReport r;
  r.a2_in_Fp2 = F.in_subfield(a2, 2);
  r.count = count_projective(F, 3, [&](std::span<const Elem> x) { return F.is_zero(f(x)); }, opt);
  count_projective(
      F, 3,
      [&](std::span<const Elem> x) {
        if (F.is_zero(f(x)) && F.is_zero(d5(x)) && F.is_zero(d7(x)) && F.is_zero(d8(x)))
          r.singular_points.emplace_back(x.begin(), x.end());
        return false;
      },
      opt);
  return r;
}

/// Predicted singular point (0 : 1 : -a2^{1/p}) in coordinates (a5 : a7 : a8).
inline std::vector<Elem> predicted_cusp(const Fq& F, Elem a2) {
  return {F.zero(), F.one(), F.neg(F.pth_root(a2))};
}

// --------------------------------------------------------------- Jacobian

/// The equations f, g1, g2, g3 in the variables a1..a11 (index i-1).
inline std::vector<MPoly> flag_equations(std::uint32_t p) {
  const std::uint64_t P = p, Q = static_cast<std::uint64_t>(p) * p;
  auto mono = [](std::initializer_list<std::pair<int, std::uint64_t>> pw) {
    std::vector<std::uint64_t> e(11, 0);
    for (auto [i, k] : pw) e[static_cast<std::size_t>(i - 1)] += k;
    return e;
  };
  MPoly f, g1, g2, g3;
  f.nvars = g1.nvars = g2.nvars = g3.nvars = 11;
  f.add(1, mono({{1, 1}, {4, Q}})).add(-1, mono({{1, Q}, {4, 1}})).add(1, mono({{2, 1}, {3, Q}})).add(-1, mono({{2, Q}, {3, 1}}));
  g1.add(1, mono({{1, 1}, {8, P}}))
      .add(-1, mono({{1, P}, {5, P - 1}, {8, 1}}))
      .add(1, mono({{2, 1}, {7, P}}))
      .add(-1, mono({{2, P}, {5, P - 1}, {7, 1}}))
      .add(1, mono({{3, P}, {5, P - 1}, {6, 1}}))
      .add(-1, mono({{3, 1}, {6, P}}));
  g2.add(1, mono({{1, 1}, {11, P}})).add(1, mono({{2, 1}, {10, P}})).add(-1, mono({{3, 1}, {9, P}}));
  g3.add(1, mono({{1, P}, {11, 1}})).add(1, mono({{2, P}, {10, 1}})).add(-1, mono({{3, P}, {9, 1}}));
  return {f, g1, g2, g3};
}

enum class Chart { a5_nonzero, a5_zero };

/// Variables (1-based) of the displayed Jacobians.
inline std::vector<int> chart_variables(Chart c) {
  return c == Chart::a5_nonzero ? std::vector<int>{2, 3, 4, 7, 8, 10, 11} : std::vector<int>{2, 3, 4, 5, 8, 10, 11};
}

using Point = std::vector<Elem>;  // a1..a11 at index 0..10

inline bool on_flag_variety(const Fq& F, const Point& a) {
  for (const auto& e : flag_equations(F.p()))
    if (!F.is_zero(e.eval(F, a))) return false;
  return true;
}

/// Chart normalizations: a5 != 0 uses a1 = a5 = a9 = 1, a6 = 0; a5 = 0 uses
/// a1 = a7 = a9 = 1, a6 = 0.
inline bool chart_hypotheses_hold(const Fq& F, Chart c, const Point& a) {
  auto is = [&](int i, Elem v) { return a.at(static_cast<std::size_t>(i - 1)) == v; };
  const Elem o = F.one(), z = F.zero();
  bool norm = is(1, o) && is(9, o) && is(6, z);
  if (c == Chart::a5_nonzero)
    norm = norm && is(5, o);
  else
    norm = norm && is(5, z) && is(7, o);
  return norm && on_flag_variety(F, a);
}

/// Jacobian of f, g1, g2, g3 at a with respect to the chart variables,
/// computed from formal partial derivatives.
inline linalg::Matrix<Elem> formal_jacobian(const Fq& F, Chart c, const Point& a) {
  auto eqs = flag_equations(F.p());
  auto vars = chart_variables(c);
  linalg::Matrix<Elem> J(4, std::vector<Elem>(vars.size()));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < vars.size(); ++j)
      J[i][j] = eqs[i].partial(static_cast<std::size_t>(vars[j] - 1), F.p()).eval(F, a);
  return J;
}

/// The two Jacobian matrices, entry by entry.
inline linalg::Matrix<Elem> displayed_jacobian(const Fq& F, Chart c, const Point& a) {
  const std::uint32_t p = F.p();
  const std::uint64_t Q = static_cast<std::uint64_t>(p) * p;
  auto A = [&](int i) { return a.at(static_cast<std::size_t>(i - 1)); };
  auto pw = [&](int i, std::uint64_t e) { return F.pow(A(i), e); };
  auto neg = [&](Elem x) { return F.neg(x); };
  const Elem z = F.zero();
  linalg::Matrix<Elem> J(4, std::vector<Elem>(7, z));
  J[0][0] = pw(3, Q);
  J[0][1] = neg(pw(2, Q));
  J[0][2] = neg(pw(1, Q));
  J[2][0] = pw(10, p);
  J[2][1] = neg(pw(9, p));
  J[3][5] = pw(2, p);
  J[3][6] = pw(1, p);
  if (c == Chart::a5_nonzero) {
    J[1][0] = pw(7, p);
    J[1][1] = neg(pw(6, p));
    J[1][3] = neg(F.mul(pw(2, p), pw(5, p - 1)));
    J[1][4] = neg(F.mul(pw(1, p), pw(5, p - 1)));
  } else {
    J[1][0] = pw(7, p);
    J[1][3] = F.mul(F.add(F.mul(pw(1, p), A(8)), F.mul(pw(2, p), A(7))), pw(5, p - 2));
    J[1][4] = neg(F.mul(pw(1, p), pw(5, p - 1)));
  }
  return J;
}

/// Roots of a univariate condition by scanning the field.
inline std::vector<Elem> scan_roots(const Fq& F, const std::function<bool(Elem)>& pred) {
  std::vector<Elem> out;
  for (std::uint64_t i = 0; i < F.size(); ++i)
    if (pred(F.element(i))) out.push_back(F.element(i));
  return out;
}

/// A random point of the flag variety in the given chart, or nullopt if the
/// random choices admit no completion.
inline std::optional<Point> sample_chart_point(const Fq& F, Chart c, std::mt19937_64& rng) {
  const std::uint32_t p = F.p();
  const std::uint64_t Q = static_cast<std::uint64_t>(p) * p;
  Point a(11, F.zero());
  auto at = [&](int i) -> Elem& { return a[static_cast<std::size_t>(i - 1)]; };
  at(1) = F.one();
  at(9) = F.one();
  at(6) = F.zero();
  at(2) = F.random(rng);
  at(3) = F.random(rng);
  // f: a4^{p^2} - a4 = a2^{p^2} a3 - a2 a3^{p^2}
  const Elem rhs4 = F.sub(F.mul(F.pow(at(2), Q), at(3)), F.mul(at(2), F.pow(at(3), Q)));
  auto r4 = scan_roots(F, [&](Elem x) { return F.sub(F.pow(x, Q), x) == rhs4; });
  if (r4.empty()) return std::nullopt;
  at(4) = r4[rng() % r4.size()];
  // g2, g3 with a9 = 1: a11 = a3^p - a2^p a10 and a10^p (a2 - a2^{p^2}) = a3 - a3^{p^2}
  const Elem lhs = F.sub(at(2), F.pow(at(2), Q));
  const Elem rhs = F.sub(at(3), F.pow(at(3), Q));
  if (!F.is_zero(lhs)) {
    at(10) = F.pth_root(F.div(rhs, lhs));
  } else if (F.is_zero(rhs)) {
    at(10) = F.random(rng);
  } else {
    return std::nullopt;
  }
  at(11) = F.sub(F.pow(at(3), p), F.mul(F.pow(at(2), p), at(10)));
  if (c == Chart::a5_nonzero) {
    at(5) = F.one();
    at(7) = F.random(rng);
    // g1: a8^p - a8 = a2^p a7 - a2 a7^p
    const Elem rhs8 = F.sub(F.mul(F.pow(at(2), p), at(7)), F.mul(at(2), F.pow(at(7), p)));
    auto r8 = scan_roots(F, [&](Elem x) { return F.sub(F.pow(x, p), x) == rhs8; });
    if (r8.empty()) return std::nullopt;
    at(8) = r8[rng() % r8.size()];
  } else {
    at(5) = F.zero();
    at(7) = F.one();
    // g1: a8^p + a2 = 0
    at(8) = F.pth_root(F.neg(at(2)));
  }
  if (!chart_hypotheses_hold(F, c, a)) return std::nullopt;
  return a;
}

struct JacobianSample {
  Point point;
  std::size_t rank_displayed;
  std::size_t rank_formal;
  bool displayed_equals_formal;
};

struct JacobianReport {
  Chart chart;
  std::uint32_t p;
  unsigned m;
  std::vector<JacobianSample> samples;
  std::size_t draws = 0;
  bool all_rank4() const {
    for (const auto& s : samples)
      if (s.rank_displayed != 4 || s.rank_formal != 4 || !s.displayed_equals_formal) return false;
    return !samples.empty();
  }
};

/// Draws `trials` valid chart points over F_{p^m} and checks both displayed
/// Jacobians against the formal ones and for rank 4.
inline JacobianReport jacobian_rank_samples(std::uint32_t p, Chart c, unsigned trials, std::uint64_t seed,
                                            unsigned m = 4) {
  Fq F(p, m);
  std::mt19937_64 rng(seed);
  JacobianReport rep{c, p, m, {}, 0};
  const std::size_t max_draws = 1000ULL * trials + 1000;
  while (rep.samples.size() < trials) {
    if (++rep.draws > max_draws) throw std::runtime_error("jacobian_rank_samples: sampler failed to find points");
    auto pt = sample_chart_point(F, c, rng);
    if (!pt) continue;
    auto D = displayed_jacobian(F, c, *pt);
    auto J = formal_jacobian(F, c, *pt);
    rep.samples.push_back({*pt, rank(F, D), rank(F, J), D == J});
  }
  return rep;
}

}  // namespace sslocus::finitefield
