#pragma once
/// Batch commands behind the command-line tool. Each returns a Report; the
/// tool only parses flags and renders.

#include <sslocus/dieudonne.hpp>
#include <sslocus/exactpoly.hpp>
#include <sslocus/finitefield.hpp>
#include <sslocus/flagcalc.hpp>
#include <sslocus/report.hpp>
#include <sslocus/strata.hpp>
#include <sslocus/tautring.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sslocus::cli {

struct Options {
  std::optional<int> g;
  std::optional<std::uint32_t> p;
  unsigned m = 4;
  std::optional<unsigned> precision;
  std::optional<unsigned> trials;
  std::uint64_t seed = 1;
  std::uint64_t budget = 20'000'000;
};

namespace detail {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline std::string str(const RatFn& r) { return r.to_string(); }
inline std::string str(const Rational& r) { return r.get_str(); }

/// scalar * prod f_i(p)^{e_i}, evaluated factor by factor.
inline Rational eval_factored(const FactoredPPoly& f, const Rational& p) {
  Rational r = f.scalar();
  for (const auto& [poly, e] : f.factors()) {
    Rational v = poly(p);
    for (unsigned i = 0; i < e; ++i) r *= v;
  }
  return r;
}

inline std::uint32_t require_prime(std::uint32_t p) {
  if (!finitefield::is_prime(p)) throw std::invalid_argument("p must be prime, got " + std::to_string(p));
  return p;
}

}  // namespace detail

// ------------------------------------------------------------------ classes

inline Report cmd_classes(int g, std::optional<std::uint32_t> p = std::nullopt) {
  if (g < 1 || g > 4) throw std::invalid_argument("classes: g must be in 1..4");
  if (p) detail::require_prime(*p);
  detail::Stopwatch sw;
  Report r;
  r.command = "classes";
  r.parameters["g"] = g;
  if (p) r.parameters["p"] = *p;

  const strata::StratumClass s = strata::ss_class(g);
  r.note("class", "[S_" + std::to_string(g) + "]", s.to_string());
  r.add("class", "[S_g] monomial", tautring::monomial_name(strata::ss_class_shape(g)), tautring::monomial_name(s.monomial),
        pass_if(s.monomial == strata::ss_class_shape(g)));
  const tautring::Mask complement = tautring::full_mask(g) ^ s.monomial;
  r.note("class", "deg([S_g] * " + tautring::monomial_name(complement) + ")",
         detail::str(strata::degree_against(s, complement)));
  for (int f = 0; f < g; ++f) {
    auto e = strata::eo_prank_class(g, f);
    r.note("eo", "p-rank <= " + std::to_string(f), e.to_string());
  }
  if (g == 3) r.note("eo", "V_[3,2]", strata::eo_class_g3_ab().to_string());

  const FactoredPPoly mass = strata::superspecial_mass(g);
  const FactoredPPoly comps = strata::component_count_N(g);
  r.note("mass", "superspecial mass", mass.to_string());
  r.note("mass", "components N_g", comps.to_string());
  if (g % 2 == 0) {
    RatFn lhs(comps.expand()), rhs = RatFn(mass.expand()) * strata::correction_factor(g);
    r.add("mass", "N_g = mass * correction", detail::str(rhs), detail::str(lhs), pass_if(lhs == rhs));
  } else {
    r.add("mass", "N_g = mass", mass.expand().to_string(), comps.expand().to_string(),
          pass_if(mass.expand() == comps.expand()));
  }

  if (p) {
    const Rational x(*p);
    const std::string at = " at p=" + std::to_string(*p);
    auto eval_item = [&](const std::string& name, const FactoredPPoly& f) {
      Rational factored = detail::eval_factored(f, x), expanded = f.expand()(x);
      r.add("values", name + at, detail::str(factored), detail::str(expanded), pass_if(factored == expanded));
    };
    eval_item("[S_g] coefficient", s.coefficient);
    eval_item("superspecial mass", mass);
    eval_item("components N_g", comps);
    for (int f = 0; f < g; ++f) eval_item("p-rank <= " + std::to_string(f) + " coefficient", strata::eo_prank_class(g, f).coefficient);
  }
  r.wall_time_ms = sw.ms();
  return r;
}

// -------------------------------------------------------------------- solve

inline void solve_g4_into(Report& r) {
  using namespace flagcalc;
  RelationSystem sys = relation_system_g4();
  for (const auto& row : sys.rows) {
    std::string lhs;
    for (std::size_t k = 0; k < row.coeffs.size(); ++k) {
      if (row.coeffs[k].is_zero()) continue;
      if (!lhs.empty()) lhs += " + ";
      lhs += "(" + row.coeffs[k].to_string() + ")*" + monomial_name(sys.unknowns[k]);
    }
    r.note("relations", row.label + " [" + row.provenance + "]", lhs + " = " + row.rhs.to_string());
  }
  const std::size_t rk = sys.rank();
  r.add("system", "rank of the relation system", "5", std::to_string(rk), pass_if(rk == 5));

  std::vector<RatFn> sol;
  try {
    sol = solve(sys);
  } catch (const std::exception& e) {
    r.add("system", "solve", "unique solution", e.what(), Status::fail);
    return;
  }
  bool zero_res = true;
  for (const auto& x : residuals(sys, sol)) zero_res = zero_res && x.is_zero();
  r.add("system", "residuals vanish", "0", zero_res ? "0" : "nonzero", pass_if(zero_res));

  const PPoly p = PPoly::p();
  const PPoly base = p * PPoly::p_power_plus(2, 1);
  const PPoly q = p * p - p + PPoly(1);
  const std::vector<PPoly> reference{base * q, base * q * PPoly(-1), base * (p - PPoly(1)).pow(2) * PPoly(-1), base * q,
                                   base * p};
  for (std::size_t k = 0; k < sol.size(); ++k) {
    RatFn want(reference[k]);
    r.add("degrees", "deg " + monomial_name(sys.unknowns[k]), want.to_string(), sol[k].to_string(),
          pass_if(want == sol[k]));
  }

  F4Derivation d = f4_derivation();
  r.note("f4", "deg(lambda3*lambda1) on F0", d.deg_l3l1_on_F0.to_string());
  r.note("f4", "deg(lambda3*lambda1) on a component", d.deg_l3l1_on_component.to_string());
  r.add("f4", "f4(p)", d.expected.expand().to_string(), d.f4.to_string(), pass_if(d.matches()));
  r.note("f4", "f4 factored", d.expected.to_string());

  Crosscheck cc = crosscheck_reference_g4();
  for (const auto& c : cc.combinations) r.note("crosscheck", c.name, c.value.to_string());
  for (const auto& v : cc.pairs) {
    std::string computed = v.values_agree ? "values agree" : "values differ by " + v.difference.to_string();
    computed += "; difference of forms in relation span: ";
    computed += v.difference_in_relation_span ? "yes" : "no";
    computed += "; proportional: " + (v.ratio ? v.ratio->to_string() : std::string("no"));
    r.add("crosscheck", v.first + " vs " + v.second, "values agree", computed,
          v.values_agree ? Status::pass : Status::finding);
  }
}

inline void solve_g3_into(Report& r) {
  using namespace flagcalc;
  G3Chain c;
  try {
    c = g3_chain();
  } catch (const std::exception& e) {
    r.add("g3", "derivation", "completes", e.what(), Status::fail);
    return;
  }
  r.note("g3", "lambda1", c.lambda1.to_string());
  r.note("g3", "lambda2", c.lambda2.to_string());
  r.note("g3", "lambda1^2 - 2 lambda2", c.lambda1sq_minus_2lambda2.to_string());
  r.add("g3", "l0^2 = 0 from lambda1^2 = 2 lambda2", "nonzero multiple of l0^2",
        "(" + c.l0sq_coefficient.to_string() + ")*l0^2", pass_if(!c.l0sq_coefficient.is_zero()));
  r.note("g3", "deg l0*l1", c.deg_l0l1.to_string());
  const PPoly p = PPoly::p();
  RatFn want_l2((p + PPoly(1)) * (p - PPoly(1)).pow(2));
  r.add("g3", "deg lambda2", want_l2.to_string(), c.deg_lambda2.to_string(), pass_if(want_l2 == c.deg_lambda2));
  r.note("g3", "section class S", c.section_class.to_string());
  RatFn want_s2((p + PPoly(1)) * PPoly(-2));
  r.add("g3", "S^2", want_s2.to_string(), c.section_self_intersection.to_string(),
        pass_if(want_s2 == c.section_self_intersection));
  RatFn want_f3(c.f3_expected.expand());
  r.add("g3", "f3(p)", want_f3.to_string(), c.f3.to_string(), pass_if(want_f3 == c.f3));
  r.note("g3", "f3 factored", c.f3_expected.to_string());
}

inline Report cmd_solve(int g) {
  if (g != 3 && g != 4) throw std::invalid_argument("solve: g must be 3 or 4");
  detail::Stopwatch sw;
  Report r;
  r.command = "solve";
  r.parameters["g"] = g;
  if (g == 4)
    solve_g4_into(r);
  else
    solve_g3_into(r);
  r.wall_time_ms = sw.ms();
  return r;
}

// ------------------------------------------------------------------- counts

inline Report cmd_verify_counts(std::uint32_t p, std::uint64_t budget, std::uint64_t seed, unsigned jacobian_trials = 100) {
  using namespace finitefield;
  detail::require_prime(p);
  detail::Stopwatch sw;
  Report r;
  r.command = "verify counts";
  r.parameters = {{"p", p}, {"budget", budget}, {"seed", seed}, {"trials", jacobian_trials}};
  CountOptions opt;
  opt.budget = budget;

  auto guarded = [&](const std::string& section, const std::string& name, const std::string& expected, auto fn) {
    try {
      fn();
    } catch (const BudgetExceeded& e) {
      r.add(section, name, expected, std::string("budget exceeded: ") + e.what(), Status::inconclusive);
    }
  };
  const std::uint64_t P = p;
  const std::uint64_t q = P * P;
  auto eq_item = [&](const std::string& section, const std::string& name, std::uint64_t want, std::uint64_t got) {
    r.add(section, name, std::to_string(want), std::to_string(got), pass_if(want == got));
  };

  std::uint64_t n_f2 = 0, n_g1 = 0;
  guarded("points", "Fermat curve over F_{p^2}", "p^3+1", [&] { eq_item("points", "Fermat curve over F_{p^2}", P * P * P + 1, count_fermat_curve(p, opt)); });
  guarded("points", "F2 surface over F_{p^2}", "(p^2+1)(p^4+1)", [&] {
    n_f2 = count_F2_surface(p, opt);
    eq_item("points", "F2 surface over F_{p^2}", (P * P + 1) * (q * q + 1), n_f2);
  });
  guarded("points", "G1 surface over F_{p^2}", "(p^2+1)(p^3+1)", [&] {
    n_g1 = count_G1_surface(p, opt);
    eq_item("points", "G1 surface over F_{p^2}", (P * P + 1) * (P * P * P + 1), n_g1);
  });
  guarded("points", "F2 surface, descending traversal", "same as ascending", [&] {
    CountOptions d = opt;
    d.order = Traversal::descending;
    eq_item("points", "F2 surface, descending traversal", n_f2, count_F2_surface(p, d));
  });
  guarded("points", "G1 surface under sampled isometries", "invariant", [&] {
    Fq F = field_p2(p);
    std::mt19937_64 rng(seed);
    bool same = true;
    for (const auto& T : sample_isometries(F, 1, rng)) same = same && count_hypersurface_twisted(F, g1_poly(p), T, opt) == n_g1;
    r.add("points", "G1 surface under sampled isometries", std::to_string(n_g1), same ? std::to_string(n_g1) : "changed",
          pass_if(same));
  });

  guarded("isotropic", "hermitian planes", "(p+1)(p^3+1)", [&] {
    eq_item("isotropic", "hermitian planes (conjugation x^p)", (P + 1) * (P * P * P + 1),
            count_isotropic(FormKind::hermitian, 4, 2, p, 1, budget));
  });
  guarded("isotropic", "isotropic lines", "#F2", [&] {
    eq_item("isotropic", "lines isotropic for the F2 form (conjugation x^{p^2}) = #F2", n_f2,
            count_isotropic(FormKind::hermitian, 4, 1, p, 2, budget));
    eq_item("isotropic", "lines isotropic for conjugation x^p = #G1", n_g1,
            count_isotropic(FormKind::hermitian, 4, 1, p, 1, budget));
  });
  guarded("isotropic", "symplectic planes", "(q+1)(q^2+1)", [&] {
    eq_item("isotropic", "symplectic planes over F_{p^2}", (q + 1) * (q * q + 1),
            count_isotropic(FormKind::symplectic, 4, 2, p, 1, budget));
  });

  guarded("quadric", "Q", "(q+1)(q^2+1)", [&] {
    QuadricReport qr = count_quadric_Q(p, opt);
    eq_item("quadric", "Q in P^5 vs after elimination in P^4", qr.count_p5, qr.count_p4);
    eq_item("quadric", "singular points of Q", 0, qr.singular_points);
    eq_item("quadric", "Q over F_{p^2} = (q+1)(q^2+1)", qr.smooth_formula, qr.count_p5);
    r.add("quadric", "Q inside the Klein quadric", "<= " + std::to_string(qr.klein_quadric), std::to_string(qr.count_p5),
          pass_if(qr.count_p5 <= qr.klein_quadric));
  });

  guarded("fiber", "fiber curve", "cusp", [&] {
    // a2 outside F_{p^2}: a primitive element of F_{p^3}
    Fq F3(p, 3);
    Elem a2 = F3.primitive();
    FiberCurveReport fr = analyze_fiber_curve(F3, a2, opt);
    auto cusp = predicted_cusp(F3, a2);
    if (p == 2) {
      r.add("fiber", "singular points, generic a2, p=2", "0 (smooth conic)", std::to_string(fr.singular_points.size()),
            pass_if(fr.singular_points.empty()));
    } else {
      bool at = fr.singular_points.size() == 1 && fr.singular_points[0] == cusp;
      r.add("fiber", "singular points, generic a2", "1 at (0 : 1 : -a2^{1/p})",
            std::to_string(fr.singular_points.size()) + (at ? " at predicted point" : ""), pass_if(at));
    }
    r.add("fiber", "points over F_{p^3}, generic a2", std::to_string(F3.size() + 1), std::to_string(fr.count),
          pass_if(fr.count == F3.size() + 1));
    Fq F2(p, 2);
    FiberCurveReport split = analyze_fiber_curve(F2, F2.primitive(), opt);
    eq_item("fiber", "points over F_{p^2}, a2 in F_{p^2}", P * q + 1, split.count);
  });

  for (Chart c : {Chart::a5_nonzero, Chart::a5_zero}) {
    const std::string name = c == Chart::a5_nonzero ? "Jacobian rank, chart a5 != 0" : "Jacobian rank, chart a5 = 0";
    JacobianReport jr = jacobian_rank_samples(p, c, jacobian_trials, seed);
    std::size_t ok = 0;
    for (const auto& s : jr.samples) ok += (s.rank_displayed == 4 && s.rank_formal == 4 && s.displayed_equals_formal);
    r.add("jacobian", name, std::to_string(jacobian_trials) + "/" + std::to_string(jacobian_trials) + " rank 4",
          std::to_string(ok) + "/" + std::to_string(jr.samples.size()) + " rank 4", pass_if(jr.all_rank4() && ok == jacobian_trials));
  }
  r.wall_time_ms = sw.ms();
  return r;
}

// --------------------------------------------------------------- identities

inline Report cmd_verify_identities() {
  detail::Stopwatch sw;
  Report r;
  r.command = "verify identities";
  for (int g : {2, 3, 4})
    for (const auto& id : strata::consistency_identities(g)) {
      const std::string sec = "g=" + std::to_string(g);
      r.add(sec, id.name + ": " + id.lhs_text + " = " + id.rhs_text, id.rhs.to_string(), id.lhs.to_string(),
            pass_if(id.holds_symbolically()));
      bool numeric = true;
      for (long p : {2L, 3L, 5L}) numeric = numeric && id.holds_at(p);
      r.add(sec, id.name + " at p = 2, 3, 5", "equal", numeric ? "equal" : "differ", pass_if(numeric));
    }

  const std::vector<Rational> reference_v{Rational(1), Rational(1, 24), Rational(1, 5760), Rational(1, 2903040),
                                        Rational(1, 1393459200)};
  for (unsigned g = 0; g < reference_v.size(); ++g) {
    Rational v = proportionality_v(g);
    r.add("tautological", "v(" + std::to_string(g) + ")", reference_v[g].get_str(), v.get_str(), pass_if(v == reference_v[g]));
  }
  for (int g = 1; g <= 5; ++g) {
    std::size_t total = 0;
    bool gorenstein = true;
    for (int n = 0; n <= tautring::top_degree(g); ++n) {
      auto b = tautring::basis(g, n);
      total += b.size();
      auto m = tautring::gorenstein_pairing_matrix(g, n);
      if (m.size() != m.at(0).size() || linalg::rank(m) != m.size()) gorenstein = false;
    }
    const std::string sec = "R_" + std::to_string(g);
    r.add(sec, "basis size", std::to_string(1U << g), std::to_string(total), pass_if(total == (1U << g)));
    r.add(sec, "pairing nonsingular in every degree", "yes", gorenstein ? "yes" : "no", pass_if(gorenstein));
  }
  r.wall_time_ms = sw.ms();
  return r;
}

// ---------------------------------------------------------------- dieudonne

inline constexpr double kRejectionThreshold = 0.9;

inline Report cmd_verify_dieudonne(int g, std::uint32_t p, unsigned m, unsigned N, unsigned trials, std::uint64_t seed) {
  using namespace dieudonne;
  detail::require_prime(p);
  if (g < 1 || g > 4) throw std::invalid_argument("dieudonne: g must be in 1..4");
  if (N < static_cast<unsigned>(2 * g + 2)) throw std::invalid_argument("dieudonne: precision must be >= 2g+2");
  if (trials == 0) throw std::invalid_argument("dieudonne: trials must be positive");
  detail::Stopwatch sw;
  Report r;
  r.command = "verify dieudonne";
  r.parameters = {{"g", g}, {"p", p}, {"m", m}, {"precision", N}, {"trials", trials}, {"seed", seed}};

  TrialSummary ss = run_trials(g, p, m, N, trials, seed, true);
  TrialSummary gen = run_trials(g, p, m, N, trials, seed + trials, false);
  for (const auto* s : {&ss, &gen})
    for (const auto& t : s->trials)
      r.note(t.ss_pattern ? "ss_pattern trials" : "generic trials", "seed " + std::to_string(t.seed),
             std::string("criterion ") + (t.criterion ? "yes" : "no") + ", slopes " + t.slopes.to_string() +
                 (t.slopes.note.empty() ? "" : " (" + t.slopes.note + ")") + ", eq4 residual valuation " +
                 std::to_string(t.eq4.residual_valuation));

  auto all = [&](auto pred) {
    std::size_t k = 0;
    for (const auto* s : {&ss, &gen})
      for (const auto& t : s->trials) k += pred(t) ? 1 : 0;
    return k;
  };
  const std::size_t total = 2 * trials;
  const std::string frac_all = std::to_string(total) + "/" + std::to_string(total);

  std::size_t sym = all([](const Trial& t) { return t.symplectic; });
  r.add("normal form", "gamma symplectic", frac_all, std::to_string(sym) + "/" + std::to_string(total), pass_if(sym == total));

  std::size_t eq4 = all([](const Trial& t) { return t.eq4.pass; });
  r.add("eq4", "F^{2g} e1 = P e1 to valuation >= N-2g", frac_all, std::to_string(eq4) + "/" + std::to_string(total),
        pass_if(eq4 == total));

  std::size_t ss_half = ss.count_if([](const Trial& t) { return t.slopes.all_half(); });
  std::size_t ss_incon = ss.inconclusive();
  Status ss_status = ss_half == trials ? Status::pass : (ss_incon > 0 && ss_half + ss_incon == trials ? Status::inconclusive : Status::fail);
  r.add("slopes", "ss_pattern samples with all slopes 1/2", std::to_string(trials) + "/" + std::to_string(trials),
        std::to_string(ss_half) + "/" + std::to_string(trials) +
            (ss_incon ? " (" + std::to_string(ss_incon) + " inconclusive)" : ""),
        ss_status);

  bool impl = ss.implication_holds() && gen.implication_holds();
  r.add("slopes", "criterion implies all slopes 1/2", "holds", impl ? "holds" : "violated", pass_if(impl));

  bool sym_slopes = true;
  for (const auto* s : {&ss, &gen})
    for (const auto& t : s->trials)
      if (t.slopes.status == SlopeStatus::conclusive)
        sym_slopes = sym_slopes && t.slopes.symmetric() && t.slopes.total() == Rational(g);
  r.add("slopes", "slope sequences symmetric with total g", "yes", sym_slopes ? "yes" : "no", pass_if(sym_slopes));

  std::size_t rejected = gen.rejected();
  std::size_t gen_incon = gen.inconclusive();
  const std::string got = std::to_string(rejected) + "/" + std::to_string(trials) +
                          (gen_incon ? " (" + std::to_string(gen_incon) + " inconclusive)" : "");
  if (g <= 2) {
    // p-rank zero forces supersingularity in genus <= 2
    r.add("slopes", "generic samples with all slopes 1/2 (g <= 2)", "0/" + std::to_string(trials) + " rejected", got,
          pass_if(rejected == 0 && gen_incon == 0));
  } else {
    bool enough = static_cast<double>(rejected) >= kRejectionThreshold * trials;
    r.add("slopes", "generic samples rejected", ">= 90%", got, enough ? Status::pass : Status::inconclusive);
  }
  r.note("summary", "criterion conditions (independent)", std::to_string(criterion_condition_count(g)));
  r.wall_time_ms = sw.ms();
  return r;
}

// ---------------------------------------------------------------------- all

inline Report cmd_verify_all(const Options& o) {
  detail::Stopwatch sw;
  Report r;
  r.command = "verify all";
  const std::uint32_t p = o.p.value_or(2);
  const int g = o.g.value_or(3);
  const unsigned N = o.precision.value_or(dieudonne::default_precision(g));
  r.parameters = {{"g", g}, {"p", p}, {"m", o.m}, {"precision", N}, {"seed", o.seed}, {"budget", o.budget}};
  r.absorb(cmd_verify_identities());
  r.absorb(cmd_solve(3));
  r.absorb(cmd_solve(4));
  r.absorb(cmd_verify_counts(p, o.budget, o.seed, o.trials.value_or(100)));
  r.absorb(cmd_verify_dieudonne(g, p, o.m, N, o.trials.value_or(50), o.seed));
  r.wall_time_ms = sw.ms();
  return r;
}

inline Report cmd_verify(const std::string& suite, const Options& o) {
  if (suite == "counts") return cmd_verify_counts(o.p.value_or(2), o.budget, o.seed, o.trials.value_or(100));
  if (suite == "identities") return cmd_verify_identities();
  if (suite == "dieudonne") {
    const int g = o.g.value_or(3);
    return cmd_verify_dieudonne(g, o.p.value_or(2), o.m, o.precision.value_or(dieudonne::default_precision(g)),
                                o.trials.value_or(50), o.seed);
  }
  if (suite == "all") return cmd_verify_all(o);
  throw std::invalid_argument("verify: unknown suite '" + suite + "'");
}

}  // namespace sslocus::cli
