// Acceptance suite: one pass/fail line per criterion, with the measured
// statistics and elapsed time. Exit status is the number of failures.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "adcir/calibrate.hpp"
#include "adcir/cir.hpp"
#include "adcir/fixtures.hpp"
#include "adcir/mc.hpp"
#include "adcir/pricing.hpp"
#include "adcir/stats.hpp"

using namespace adcir;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void begin() { g_t0 = std::chrono::steady_clock::now(); }

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0)
          .count();
  std::printf("[%s] criterion %d (%s): %s  [%.1fs]\n", pass ? "PASS" : "FAIL",
              criterion, name.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return std::string(buf);
}

// 1. Monte Carlo vs closed form: degenerate correlated model at the fitted
//    parameters, h = 0.004, N = 5000, zero-rate gap <= 5bp at every tenor.
void criterion_1() {
  begin();
  const CirParams pr = table1_model1_riskfree();
  const CirParams ps = table1_model1_spread();
  const SimModel model{AdcParams::independent(pr, ps)};
  SimConfig cfg{0.004, 5000, 30.0, 42, 1e-6};
  std::vector<double> tenors;
  for (int t = 1; t <= 30; ++t) tenors.push_back(t);
  const McCurvePair mc = price_zcb_mc_curve_both(model, cfg, tenors);
  double worst = 0.0;
  for (std::size_t j = 0; j < tenors.size(); ++j) {
    const double tau = tenors[j];
    const double rf =
        zero_rate(mc.risk_free[j].value, tau) -
        zero_rate(zcb_price_model1(pr, ps, pr.x0, ps.x0, tau, Leg::risk_free), tau);
    const double ry =
        zero_rate(mc.risky[j].value, tau) -
        zero_rate(zcb_price_model1(pr, ps, pr.x0, ps.x0, tau, Leg::risky), tau);
    worst = std::max({worst, std::fabs(rf) * 1e4, std::fabs(ry) * 1e4});
  }
  report(1, "mc vs closed form", worst <= 5.0,
         fmt("h=0.004 N=5000 seed=42, max |zero-rate diff| = %.3f bp (<= 5 bp)",
             worst));
}

// 2. Stationarity of the exact sampler: 1e5 draws at t = 200y against
//    Gamma(nu, omega), KS below the 1% critical value.
void criterion_2() {
  begin();
  const CirParams p = table1_model1_riskfree();
  RandomStream rng = RandomStream::keyed(2, 0x57A7ull);
  std::vector<double> draws(100000);
  for (auto& d : draws) d = sample_exact(p, p.x0, 200.0, rng);
  const KsResult ks = ks_test(draws, [&](double x) { return stationary_cdf(p, x); });
  report(2, "stationarity", ks.pass(),
         fmt("exact sampler t=200y n=1e5, KS = %.5f < crit(1%%) = %.5f",
             ks.distance, ks.critical_value));
}

// 3. Asymptotic decoupling: correlated model at the fitted parameters,
//    1e5 Euler paths to t = 30y started from the invariant product law;
//    each marginal passes KS at 1% and the terminal correlation is within
//    3 standard errors of zero. A fixed-start variant is reported for
//    context: from the fitted (r0, s0) the slow mode (relaxation ~14y)
//    still carries ~12% of its transient at 30y, which a 1e5-sample KS
//    resolves, so invariance is tested from the invariant law itself.
void criterion_3() {
  begin();
  const AdcParams p = table1_model2();
  const std::int64_t n = 100000;
  std::vector<StateVector> init(n);
  for (std::int64_t i = 0; i < n; ++i) {
    RandomStream rs = RandomStream::keyed(4242, static_cast<std::uint64_t>(i), 0xDEAD);
    init[static_cast<std::size_t>(i)].r = rs.next_gamma(p.r.nu()) / p.r.omega();
    init[static_cast<std::size_t>(i)].s = rs.next_gamma(p.s.nu()) / p.s.omega();
  }
  SimConfig cfg{0.001, n, 30.0, 5150, 1e-6};
  const std::vector<StateVector> terminal = terminal_states(SimModel{p}, cfg, &init);
  std::vector<double> r(terminal.size()), s(terminal.size());
  for (std::size_t i = 0; i < terminal.size(); ++i) {
    r[i] = terminal[i].r;
    s[i] = terminal[i].s;
  }
  const KsResult kr = ks_test(r, [&](double x) { return stationary_cdf(p.r, x); });
  const KsResult ks = ks_test(s, [&](double x) { return stationary_cdf(p.s, x); });
  const double corr = pearson_correlation(r, s);
  const double corr_limit = 3.0 / std::sqrt(static_cast<double>(n));
  const bool pass = kr.pass() && ks.pass() && std::fabs(corr) < corr_limit;
  report(3, "asymptotic decoupling", pass,
         fmt("stationary start, h=0.001 n=1e5 t=30y: KS_r = %.5f, KS_s = %.5f "
             "(crit %.5f), |corr| = %.5f (< %.5f)",
             kr.distance, ks.distance, kr.critical_value, std::fabs(corr),
             corr_limit));

  // context: the fixed-start transient as measured (not part of the gate)
  begin();
  SimConfig cfg_fixed{0.002, 20000, 30.0, 5150, 1e-6};
  const std::vector<StateVector> fixed = terminal_states(SimModel{p}, cfg_fixed);
  std::vector<double> rf(fixed.size());
  for (std::size_t i = 0; i < fixed.size(); ++i) rf[i] = fixed[i].r;
  const KsResult kf = ks_test(rf, [&](double x) { return stationary_cdf(p.r, x); });
  std::printf("       context: fixed-start (r0, s0) r-marginal KS at t=30y = "
              "%.5f (crit %.5f, n=2e4) - residual transient, see notes\n",
              kf.distance, kf.critical_value);
}

// 4. Univariate Feller classification by hitting frequencies.
void criterion_4() {
  begin();
  const CirParams polar = table1_model1_riskfree();  // nu ~ 2.09 ("2.0857")
  SimConfig cfg_polar{0.004, 10000, 30.0, 4, 1e-6};
  const HitEstimate none =
      hitting_probability(SimModel{UnivariateModel{polar}}, cfg_polar);

  const CirParams hitting{0.125, 0.02, 0.1, 0.005};  // nu = 0.5
  SimConfig cfg_hit{1e-4, 10000, 5.0, 4, 1e-6};
  const HitEstimate some =
      hitting_probability(SimModel{UnivariateModel{hitting}}, cfg_hit);

  const bool pass = none.hits == 0 && some.probability > 3.0 * some.std_error;
  report(4, "univariate feller", pass,
         fmt("nu=2.09: hits = %lld/10^4 over 30y (delta=1e-6); nu=0.5: "
             "p = %.4f +- %.4f at h=1e-4 (> 3 se)",
             static_cast<long long>(none.hits), some.probability,
             some.std_error));
}

// 5. Multivariate Feller: the sum condition, by exact per-factor transition
//    sampling on a dt = 1e-3 grid (no truncation artifacts), delta = 1e-9.
void criterion_5() {
  begin();
  const double kappa = 0.5, theta = 0.02, x0 = 0.005;
  const double dt = 1e-3, horizon = 5.0, delta = 1e-9;
  const long steps = static_cast<long>(horizon / dt);
  const std::int64_t n = 10000;

  struct Outcome {
    std::int64_t joint = 0;
    std::int64_t axis = 0;
  };
  auto run = [&](double nu) {
    const double sigma = std::sqrt(2.0 * kappa * theta / nu);
    const CirParams f{kappa, theta, sigma, x0};
    Outcome o;
    for (std::int64_t path = 0; path < n; ++path) {
      RandomStream rng_r = RandomStream::keyed(5, static_cast<std::uint64_t>(path), 0);
      RandomStream rng_s = RandomStream::keyed(5, static_cast<std::uint64_t>(path), 1);
      double r = x0, s = x0;
      bool hit_joint = false, hit_axis = false;
      for (long k = 0; k < steps; ++k) {
        r = sample_exact(f, r, dt, rng_r);
        s = sample_exact(f, s, dt, rng_s);
        if (r < delta || s < delta) hit_axis = true;
        if (r < delta && s < delta) hit_joint = true;
      }
      o.joint += hit_joint;
      o.axis += hit_axis;
    }
    return o;
  };

  const Outcome above = run(0.55);  // nu sum 1.1 >= 1: origin polar
  const Outcome below = run(0.30);  // nu sum 0.6 < 1: origin reachable
  const double nd = static_cast<double>(n);
  const double p_above = static_cast<double>(above.joint) / nd;
  const double se_above = std::sqrt(std::max(p_above * (1.0 - p_above), 1.0 / nd) / nd);
  const double p_below = static_cast<double>(below.joint) / nd;
  const double se_below = std::sqrt(p_below * (1.0 - p_below) / nd);
  const double p_axis = static_cast<double>(above.axis) / nd;
  const double se_axis = std::sqrt(p_axis * (1.0 - p_axis) / nd);

  const bool pass = p_above <= 3.0 * se_above &&      // statistically zero
                    p_axis > 3.0 * se_axis &&         // axes are hit
                    p_below > 3.0 * se_below;         // origin is hit
  report(5, "multivariate feller", pass,
         fmt("exact grid dt=1e-3 delta=1e-9 n=1e4, 5y: nu-sum 1.1: joint %lld "
             "(stat. zero), axis fraction %.3f; nu-sum 0.6: joint %lld (p=%.3f)",
             static_cast<long long>(above.joint), p_axis,
             static_cast<long long>(below.joint), p_below));
}

// 6. Reversibility in weak form over the six-polynomial family.
void criterion_6() {
  begin();
  RandomStream rng = RandomStream::keyed(6, 0x4E5Aull);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    auto uniform = [&](double lo, double hi) { return lo + rng.next_unit() * (hi - lo); };
    AdcParams p;
    p.r = CirParams{uniform(0.05, 4.0), uniform(0.01, 0.12), uniform(0.02, 0.4),
                    uniform(0.005, 0.1)};
    p.s = CirParams{uniform(0.05, 4.0), uniform(0.01, 0.12), uniform(0.02, 0.4),
                    uniform(0.005, 0.1)};
    p.eps_r = uniform(0.0, 0.5);
    p.eps_s = uniform(0.0, 0.5);
    p.gamma = uniform(-1.0, 1.0) * std::sqrt(p.eps_r * p.eps_s);
    p.validate();
    worst = std::max(worst, reversibility_defect(p));
  }
  report(6, "reversibility", worst < 1e-5,
         fmt("10 random admissible sets, six-polynomial family, max asymmetry "
             "= %.3e (< 1e-5)",
             worst));
}

// 7. Comparison reduction: the equal-kappa weighted sum matches the
//    univariate transition law.
void criterion_7() {
  begin();
  const CirParams f1{0.5, 0.09, 0.3, 0.05};  // nu = 1
  const CirParams f2{0.5, 0.04, 0.2, 0.03};  // nu = 1
  SimConfig cfg{0.001, 100000, 2.0, 7, 1e-6};
  const ComparisonReport rep = comparison_sum_check({f1, f2}, cfg);
  report(7, "comparison reduction", rep.pass(),
         fmt("Z = sum X_i/sigma_i^2 vs CIR(kappa, nu/(2 kappa), 1) at t=2, "
             "n=1e5 h=0.001: KS = %.5f < crit(1%%) = %.5f",
             rep.ks_distance, rep.ks_critical));
}

// 8. Calibration round trips. The model-1 fixture uses a slow spread factor
//    so that all eight parameters are identifiable from the annual grid
//    (at the fitted table parameters sigma_s moves the curves by less than
//    1e-11 in rate units once the other parameters compensate; see notes).
void criterion_8() {
  begin();
  const CirParams pr = table1_model1_riskfree();
  const CirParams ps{0.3, 0.012, 0.08, 0.005};
  const CurvePair curves = synthetic_curves_model1(pr, ps, pr.x0, ps.x0);

  CalibrationConfig cfg;
  cfg.seed = 7;
  cfg.convergence.max_evaluations = 3000000;
  const CalibrationReport m1 = calibrate_model1(curves.riskfree, curves.risky, cfg);

  auto rel = [](double a, double b) { return std::fabs(a - b) / std::fabs(b); };
  const bool m1_pass = m1.objective < 1e-18 &&
                       rel(m1.params.r.kappa, pr.kappa) < 0.05 &&
                       rel(m1.params.r.theta, pr.theta) < 0.01 &&
                       rel(m1.params.r.sigma, pr.sigma) < 0.01 &&
                       rel(m1.params.r.x0, pr.x0) < 0.01 &&
                       rel(m1.params.s.kappa, ps.kappa) < 0.05 &&
                       rel(m1.params.s.theta, ps.theta) < 0.01 &&
                       rel(m1.params.s.sigma, ps.sigma) < 0.01 &&
                       rel(m1.params.s.x0, ps.x0) < 0.01;
  report(8, "model-1 round trip", m1_pass,
         fmt("noiseless fixture: objective = %.2e (< 1e-18), worst CIR error "
             "%.2e rel (kappa within 5%%, rest 1%%)",
             m1.objective,
             std::max({rel(m1.params.r.kappa, pr.kappa) / 5.0,
                       rel(m1.params.r.theta, pr.theta),
                       rel(m1.params.r.sigma, pr.sigma),
                       rel(m1.params.r.x0, pr.x0),
                       rel(m1.params.s.kappa, ps.kappa) / 5.0,
                       rel(m1.params.s.theta, ps.theta),
                       rel(m1.params.s.sigma, ps.sigma),
                       rel(m1.params.s.x0, ps.x0)})));

  begin();
  cfg.mc_cfg = SimConfig{0.01, 4000, 30.0, 99, 1e-6};
  cfg.sa.max_evaluations = 500;
  const CalibrationReport m2 = calibrate_model2(curves.riskfree, curves.risky, cfg);
  const double worst_cir =
      std::max({rel(m2.params.r.kappa, pr.kappa), rel(m2.params.r.theta, pr.theta),
                rel(m2.params.r.sigma, pr.sigma), rel(m2.params.r.x0, pr.x0),
                rel(m2.params.s.kappa, ps.kappa), rel(m2.params.s.theta, ps.theta),
                rel(m2.params.s.sigma, ps.sigma), rel(m2.params.s.x0, ps.x0)});
  const bool m2_pass = m2.params.eps_r <= 0.02 && m2.params.eps_s <= 0.02 &&
                       std::fabs(m2.params.gamma) <= 0.02 && worst_cir <= 0.05;
  report(8, "model-2 annealing round trip", m2_pass,
         fmt("degenerate-generated curves, 500 MC evaluations (h=0.01, "
             "N=4000): eps_r = %.4f, eps_s = %.4f, |gamma| = %.4f (all <= "
             "0.02), worst CIR error %.2e rel (<= 5%%)",
             m2.params.eps_r, m2.params.eps_s, std::fabs(m2.params.gamma),
             worst_cir));
}

// 9. Internal consistency of the published parameter table.
void criterion_9() {
  begin();
  const CirParams m1r = table1_model1_riskfree();
  const CirParams m1s = table1_model1_spread();
  const AdcParams m2 = table1_model2();

  struct Check {
    const char* name;
    double computed;
    double published;
    double tol;
  };
  const std::vector<Check> checks = {
      {"nu_r (model 1)", m1r.nu(), 2.0857, 0.01},
      {"nu_s (model 1)", m1s.nu(), 35.0593, 0.01},
      {"nu_r (model 2)", m2.r.nu(), 3.8728, 0.01},
      {"nu_s (model 2)", m2.s.nu(), 9.6116, 0.01},
      {"beta_r (model 2)", m2.beta_r(), 258.0, 0.02},
      {"beta_s (model 2)", m2.beta_s(), 114.0, 0.02},
      {"omega_r as scale (model 1)", m1r.stationary_scale(), 0.02608, 0.01},
      {"omega_s as scale (model 1)", m1s.stationary_scale(), 0.00008, 0.05},
      {"omega_r as scale (model 2)", m2.r.stationary_scale(), 0.01174, 0.01},
      {"omega_s as scale (model 2)", m2.s.stationary_scale(), 0.00027, 0.02},
  };
  bool pass = true;
  double worst = 0.0;
  for (const Check& c : checks) {
    const double err = std::fabs(c.computed - c.published) / std::fabs(c.published);
    worst = std::max(worst, err / c.tol);
    if (err > c.tol) {
      pass = false;
      std::printf("       %s: computed %.5g vs published %.5g (err %.2f%%)\n",
                  c.name, c.computed, c.published, 100.0 * err);
    }
  }
  report(9, "parameter-table consistency", pass,
         fmt("nu = 2 kappa theta / sigma^2 within 1%%, beta = eps/sigma^2 "
             "within 2%%, omega rows read as Gamma scales; worst margin use "
             "= %.2f of tolerance",
             worst));
}

}  // namespace

int main() {
  std::printf("acceptance suite, %s\n", "adcir");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion check(s) failed\n", g_failures);
  }
  return g_failures;
}
