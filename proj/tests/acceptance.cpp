// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sslocus/commands.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace sslocus;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = s < limit_s;
  bool ok = o.ok && in_time;
  if (!ok) ++failures;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3fs < %.0fs", s, limit_s);
  std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << title << " (" << timing << (in_time ? "" : " EXCEEDED")
            << ") " << o.detail << std::endl;
}

// Frozen after calibration: at g = 3 the generic rate over 4000 samples is 93.6% (15/16 expected).
constexpr std::uint64_t kPatternSeed = 1;
constexpr std::uint64_t kGenericSeed = 1;

}  // namespace

int main() {
  const PPoly P = PPoly::p();
  const RatFn p = flagcalc::pp(), one(1);

  criterion(1, "f4 identity from the g=4 relation system", 1, [&] {
    auto sol = flagcalc::solve_g4();
    RatFn b = p * (p * p + one), q = p * p - p + one;
    std::vector<RatFn> reference{b * q, -(b * q), -(b * (p - one) * (p - one)), b * q, b * p};
    auto d = flagcalc::f4_derivation();
    PPoly want = (P - PPoly(1)).pow(3) * (P.pow(3) - PPoly(1)) * (P.pow(4) - PPoly(1)) * (P.pow(6) - PPoly(1));
    bool ok = sol == reference && d.f4 == RatFn(want) && cli::cmd_solve(4).count(cli::Status::fail) == 0;
    return Outcome{ok, "f4 = " + d.f4.to_string()};
  });

  criterion(2, "f3 identity from the g=3 chain", 1, [&] {
    auto c = flagcalc::g3_chain();
    bool derived = !c.l0sq_coefficient.is_zero() && c.lambda1sq_minus_2lambda2.terms().size() == 1;
    bool ok = derived && c.deg_lambda2 == RatFn((P + PPoly(1)) * (P - PPoly(1)).pow(2)) &&
              c.section_self_intersection == RatFn(PPoly(-2) * (P + PPoly(1))) &&
              c.f3 == RatFn((P - PPoly(1)).pow(2) * (P.pow(3) - PPoly(1)) * (P.pow(4) - PPoly(1))) &&
              cli::cmd_solve(3).count(cli::Status::fail) == 0;
    return Outcome{ok, "lambda1^2-2lambda2 = (" + c.l0sq_coefficient.to_string() + ")l0^2, deg lambda2 = " +
                           c.deg_lambda2.to_string() + ", S^2 = " + c.section_self_intersection.to_string()};
  });

  criterion(3, "tautological ring: basis 2^g, Gorenstein pairing, v(g) table", 10, [&] {
    bool ok = true;
    for (int g = 1; g <= 5; ++g) {
      std::size_t total = 0;
      for (int n = 0; n <= tautring::top_degree(g); ++n) {
        total += tautring::basis(g, n).size();
        auto m = tautring::gorenstein_pairing_matrix(g, n);
        ok = ok && m.size() == m.at(0).size() && linalg::rank(m) == m.size();
      }
      ok = ok && total == (std::size_t{1} << g);
    }
    const Rational v[] = {Rational(1), Rational(1, 24), Rational(1, 5760), Rational(1, 2903040), Rational(1, 1393459200)};
    for (unsigned g = 0; g < 5; ++g) ok = ok && proportionality_v(g) == v[g];
    return Outcome{ok, "g = 1..5"};
  });

  criterion(4, "point counts at p = 2, 3", 60, [&] {
    using namespace finitefield;
    bool ok = true;
    std::ostringstream os;
    for (std::uint64_t q : {2u, 3u}) {
      auto pp = static_cast<std::uint32_t>(q);
      auto fermat = count_fermat_curve(pp), f2 = count_F2_surface(pp), g1 = count_G1_surface(pp);
      auto planes = count_isotropic(FormKind::hermitian, 4, 2, pp, 1);
      auto lines = count_isotropic(FormKind::hermitian, 4, 1, pp, 2);
      ok = ok && fermat == q * q * q + 1 && f2 == (q * q + 1) * (q * q * q * q + 1) &&
           g1 == (q * q + 1) * (q * q * q + 1) && planes == (q + 1) * (q * q * q + 1) && lines == f2;
      os << "p=" << q << ": " << fermat << "," << f2 << "," << g1 << "," << planes << "," << lines << "; ";
    }
    os << "lines use the conjugation x^{p^2} matching the F2 equation";
    return Outcome{ok, os.str()};
  });

  criterion(5, "counting identities as polynomial identities", 1, [&] {
    bool ok = true;
    std::size_t n = 0;
    for (int g : {2, 3, 4})
      for (const auto& id : strata::consistency_identities(g)) {
        ok = ok && id.holds_symbolically();
        ++n;
      }
    for (int g : {2, 4})
      ok = ok && RatFn(strata::component_count_N(g).expand()) ==
                     RatFn(strata::superspecial_mass(g).expand()) * strata::correction_factor(g);
    return Outcome{ok, std::to_string(n) + " identities + 2 mass/correction checks"};
  });

  criterion(6, "Jacobian rank 4 on both charts, 100 samples, p = 2, 3", 30, [&] {
    using namespace finitefield;
    bool ok = true;
    for (std::uint32_t q : {2u, 3u})
      for (Chart c : {Chart::a5_nonzero, Chart::a5_zero}) {
        auto rep = jacobian_rank_samples(q, c, 100, 1);
        ok = ok && rep.samples.size() == 100 && rep.all_rank4();
      }
    return Outcome{ok, "400 samples"};
  });

  criterion(7, "Dieudonne property suite (p=2, m=4, N=2g+4)", 300, [&] {
    using namespace dieudonne;
    bool ok = true;
    std::ostringstream os;
    auto eq4_all = [&](const TrialSummary& s) {
      for (const auto& t : s.trials)
        if (!t.eq4.pass || t.eq4.residual_valuation < s.N - static_cast<unsigned>(2 * s.g)) return false;
      return true;
    };
    for (int g : {1, 2}) {
      auto s = run_trials(g, 2, 4, default_precision(g), 20, kGenericSeed, false);
      std::size_t half = s.count_if([](const Trial& t) { return t.slopes.all_half(); });
      ok = ok && half == 20 && eq4_all(s);
      os << "g=" << g << ": " << half << "/20 slopes 1/2; ";
    }
    for (int g : {3, 4}) {
      auto ss = run_trials(g, 2, 4, default_precision(g), 50, kPatternSeed, true);
      auto gen = run_trials(g, 2, 4, default_precision(g), 50, kGenericSeed, false);
      std::size_t half = ss.count_if([](const Trial& t) { return t.slopes.all_half(); });
      std::size_t rej = gen.rejected();
      ok = ok && half == 50 && rej >= 45 && eq4_all(ss) && eq4_all(gen) && ss.implication_holds() &&
           gen.implication_holds();
      os << "g=" << g << ": pattern " << half << "/50 slopes 1/2, generic " << rej << "/50 rejected; ";
    }
    os << "eq4 on every sample";
    return Outcome{ok, os.str()};
  });

  criterion(8, "crosscheck section with a verdict per pair", 1, [&] {
    auto r = cli::cmd_solve(4);
    std::size_t pairs = 0;
    bool definite = true;
    std::ostringstream os;
    for (const auto& it : r.items)
      if (it.section == "crosscheck") {
        ++pairs;
        definite = definite && (it.status == cli::Status::pass || it.status == cli::Status::finding);
        os << "[" << cli::to_string(it.status) << "] ";
      }
    return Outcome{pairs == 3 && definite, os.str()};
  });

  std::cout << (failures ? "ACCEPTANCE FAILED: " + std::to_string(failures) + " criterion(s)" : std::string("ACCEPTANCE PASSED"))
            << std::endl;
  return failures ? 1 : 0;
}
