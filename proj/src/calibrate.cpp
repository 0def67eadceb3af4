#include "adcir/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "adcir/pricing.hpp"
#include "adcir/rng.hpp"

namespace adcir {

namespace {

void require_30y_grid(const YieldCurve& curve, const char* name) {
  const auto& t = curve.tenors();
  if (t.size() != 30) {
    throw std::invalid_argument(std::string(name) + ": curve must have tenors 1..30");
  }
  for (int i = 0; i < 30; ++i) {
    if (std::fabs(t[static_cast<std::size_t>(i)] - (i + 1)) > 1e-9) {
      throw std::invalid_argument(std::string(name) + ": curve must have tenors 1..30");
    }
  }
}

std::vector<double> integer_tenors() {
  std::vector<double> t(30);
  for (int i = 0; i < 30; ++i) t[static_cast<std::size_t>(i)] = i + 1.0;
  return t;
}

// ---------------------------------------------------------------------------
// Derivative-free minimization: cyclic coordinate golden-section line
// searches over the box, with a Hooke-Jeeves pattern move after each cycle.

using BoxObjective = std::function<double(const std::vector<double>&)>;

struct SearchBudget {
  long max_evaluations = 0;
  long used = 0;
  bool exhausted() const { return used >= max_evaluations; }
};

double golden_line(const std::function<double(double)>& f, double lo, double hi,
                   double fx_hint, double x_hint, double* x_out,
                   SearchBudget& budget, int line_iters) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  budget.used += 2;
  // 75 shrink steps bring the bracket below 1e-15 of the range.
  for (int it = 0; it < line_iters && !budget.exhausted(); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    ++budget.used;
  }
  double xm = f1 <= f2 ? x1 : x2;
  double fm = std::min(f1, f2);
  // keep the incumbent if the line search did not beat it
  if (fx_hint <= fm) {
    xm = x_hint;
    fm = fx_hint;
  }
  *x_out = xm;
  return fm;
}

struct CoordinateSearchResult {
  std::vector<double> x;
  double objective = 0.0;
  bool converged = false;
};

// Feasible parameter range of x + t d inside the box.
bool segment_range(const std::vector<ParamBounds>& box,
                   const std::vector<double>& x, const std::vector<double>& d,
                   double* t_lo, double* t_hi) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (d[i] == 0.0) continue;
    double a = (box[i].lo - x[i]) / d[i];
    double b = (box[i].hi - x[i]) / d[i];
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) return false;
  *t_lo = lo;
  *t_hi = hi;
  return true;
}

double line_minimize(const BoxObjective& f, const std::vector<ParamBounds>& box,
                     std::vector<double>& x, const std::vector<double>& d,
                     double fx, SearchBudget& budget, int line_iters) {
  double t_lo = 0.0, t_hi = 0.0;
  if (!segment_range(box, x, d, &t_lo, &t_hi)) return fx;
  auto along = [&](double t) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] = std::clamp(x[i] + t * d[i], box[i].lo, box[i].hi);
    }
    return f(y);
  };
  double t_best = 0.0;
  const double f_best = golden_line(along, t_lo, t_hi, fx, 0.0, &t_best, budget,
                                    line_iters);
  if (f_best < fx) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::clamp(x[i] + t_best * d[i], box[i].lo, box[i].hi);
    }
  }
  return std::min(f_best, fx);
}

// Powell's direction-set search: golden-section line minimizations along an
// evolving direction set, initialized with the (box-scaled) coordinate
// directions and reset to them periodically. Derivative-free and bounded.
CoordinateSearchResult direction_set_search(const BoxObjective& f,
                                            const std::vector<ParamBounds>& box,
                                            std::vector<double> x,
                                            int max_iterations,
                                            double objective_tol,
                                            SearchBudget& budget,
                                            int line_iters = 75) {
  const std::size_t dims = box.size();
  auto coordinate_directions = [&]() {
    std::vector<std::vector<double>> dirs(dims, std::vector<double>(dims, 0.0));
    for (std::size_t i = 0; i < dims; ++i) dirs[i][i] = box[i].hi - box[i].lo;
    return dirs;
  };
  std::vector<std::vector<double>> dirs = coordinate_directions();

  double fx = f(x);
  ++budget.used;
  bool converged = false;
  for (int iter = 0; iter < max_iterations && !budget.exhausted(); ++iter) {
    if (iter > 0 && iter % static_cast<int>(2 * dims) == 0) {
      dirs = coordinate_directions();
    }
    const double f_start = fx;
    const std::vector<double> x_start = x;
    double biggest_drop = 0.0;
    std::size_t drop_idx = 0;
    for (std::size_t i = 0; i < dims && !budget.exhausted(); ++i) {
      const double f_before = fx;
      fx = line_minimize(f, box, x, dirs[i], fx, budget, line_iters);
      if (f_before - fx > biggest_drop) {
        biggest_drop = f_before - fx;
        drop_idx = i;
      }
    }
    // extrapolated point and Powell's replacement test
    std::vector<double> d_new(dims);
    bool nonzero = false;
    for (std::size_t i = 0; i < dims; ++i) {
      d_new[i] = x[i] - x_start[i];
      if (d_new[i] != 0.0) nonzero = true;
    }
    if (nonzero && !budget.exhausted()) {
      std::vector<double> extrapolated(dims);
      for (std::size_t i = 0; i < dims; ++i) {
        extrapolated[i] =
            std::clamp(2.0 * x[i] - x_start[i], box[i].lo, box[i].hi);
      }
      const double f_ext = f(extrapolated);
      ++budget.used;
      if (f_ext < f_start) {
        const double a = f_start - fx - biggest_drop;
        const double b = f_start - f_ext;
        if (2.0 * (f_start - 2.0 * fx + f_ext) * a * a < biggest_drop * b * b) {
          fx = line_minimize(f, box, x, d_new, fx, budget, line_iters);
          dirs[drop_idx] = dirs[dims - 1];
          dirs[dims - 1] = d_new;
        }
      }
    }
    if (fx <= objective_tol) {
      converged = true;
      break;
    }
    // relative stall per full iteration (tight: golden sections keep paying
    // off far below the nominal objective scale)
    if (f_start - fx < 1e-13 * std::max(fx, 1e-300)) {
      converged = true;
      break;
    }
  }
  return {std::move(x), fx, converged};
}

// Positive-bounded dimensions are searched in log space: the CIR parameter
// scales span decades and golden sections should refine multiplicatively.
struct BoxTransform {
  std::vector<bool> log_scale;
  std::vector<ParamBounds> u_box;

  static BoxTransform make(const std::vector<ParamBounds>& box) {
    BoxTransform t;
    t.log_scale.resize(box.size());
    t.u_box.resize(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (box[i].lo > 0.0) {
        t.log_scale[i] = true;
        t.u_box[i] = {std::log(box[i].lo), std::log(box[i].hi)};
      } else {
        t.log_scale[i] = false;
        t.u_box[i] = box[i];
      }
    }
    return t;
  }

  std::vector<double> to_x(const std::vector<double>& u) const {
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      x[i] = log_scale[i] ? std::exp(u[i]) : u[i];
    }
    return x;
  }

  std::vector<double> to_u(const std::vector<double>& x) const {
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      u[i] = log_scale[i] ? std::log(x[i]) : x[i];
    }
    return u;
  }
};

CoordinateSearchResult multistart_search(const BoxObjective& f,
                                         const std::vector<ParamBounds>& box,
                                         int n_starts, int coarse_cycles,
                                         int polish_cycles, double objective_tol,
                                         std::uint64_t seed,
                                         SearchBudget& budget) {
  const std::size_t dims = box.size();
  const BoxTransform transform = BoxTransform::make(box);
  auto fu = [&](const std::vector<double>& u) { return f(transform.to_x(u)); };

  RandomStream rng = RandomStream::keyed(seed, 0xC0FFEEull);
  std::vector<std::vector<double>> starts;  // in transformed coordinates
  {
    std::vector<double> center(dims);
    for (std::size_t i = 0; i < dims; ++i) {
      center[i] = 0.5 * (transform.u_box[i].lo + transform.u_box[i].hi);
    }
    starts.push_back(std::move(center));
  }
  // a deterministic ladder along the first dimension (the mean-reversion
  // speed is the weakly identified direction)
  for (double frac : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    std::vector<double> u(dims);
    u[0] = transform.u_box[0].lo + frac * (transform.u_box[0].hi - transform.u_box[0].lo);
    for (std::size_t i = 1; i < dims; ++i) {
      u[i] = transform.u_box[i].lo +
             0.5 * (transform.u_box[i].hi - transform.u_box[i].lo);
    }
    starts.push_back(std::move(u));
  }
  while (static_cast<int>(starts.size()) < n_starts) {
    std::vector<double> u(dims);
    for (std::size_t i = 0; i < dims; ++i) {
      u[i] = transform.u_box[i].lo +
             rng.next_unit() * (transform.u_box[i].hi - transform.u_box[i].lo);
    }
    starts.push_back(std::move(u));
  }

  // coarse pass on every start, with short line searches; the first start
  // always runs so an exhausted budget still yields a best-so-far point
  std::vector<CoordinateSearchResult> coarse;
  coarse.reserve(starts.size());
  for (const auto& s : starts) {
    if (!coarse.empty() && budget.exhausted()) break;
    coarse.push_back(direction_set_search(fu, transform.u_box, s, coarse_cycles,
                                          objective_tol, budget, 24));
  }
  std::sort(coarse.begin(), coarse.end(),
            [](const auto& a, const auto& b) { return a.objective < b.objective; });

  // deep polish on the best candidates, each with one restart from the
  // converged point (fresh coordinate directions)
  CoordinateSearchResult best = coarse.front();
  const std::size_t n_polish = std::min<std::size_t>(5, coarse.size());
  for (std::size_t i = 0; i < n_polish && !budget.exhausted(); ++i) {
    CoordinateSearchResult r = direction_set_search(
        fu, transform.u_box, coarse[i].x, polish_cycles, objective_tol, budget);
    if (!budget.exhausted() && r.objective > objective_tol) {
      CoordinateSearchResult again = direction_set_search(
          fu, transform.u_box, r.x, polish_cycles, objective_tol, budget);
      if (again.objective < r.objective) r = std::move(again);
    }
    if (r.objective < best.objective) best = std::move(r);
  }
  best.x = transform.to_x(best.x);
  return best;
}

std::vector<CurvatureDiagnostic> curvature_diagnostic(
    const BoxObjective& f, const std::vector<ParamBounds>& box,
    const std::vector<double>& x, const std::vector<std::string>& names,
    double f0) {
  std::vector<CurvatureDiagnostic> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = std::max(1e-7, 1e-4 * (box[i].hi - box[i].lo));
    std::vector<double> up = x, dn = x;
    up[i] = std::min(box[i].hi, x[i] + step);
    dn[i] = std::max(box[i].lo, x[i] - step);
    const double fu = f(up);
    const double fd = f(dn);
    const double h_up = up[i] - x[i];
    const double h_dn = x[i] - dn[i];
    const double h = 0.5 * (h_up + h_dn);
    const double curv = (fu + fd - 2.0 * f0) / (h * h);
    out.push_back({names[i], curv, curv < 1e-6});
  }
  return out;
}

std::vector<double> spreads_of(const YieldCurve& de, const YieldCurve& it) {
  return spread_curve(it, de);
}

}  // namespace

void CalibrationConfig::validate() const {
  auto check = [](const ParamBounds& b, const char* name) {
    if (!(b.lo < b.hi)) {
      throw std::invalid_argument(std::string("CalibrationConfig: empty bounds for ") +
                                  name);
    }
  };
  for (const CirBounds* cb : {&rf_bounds, &spread_bounds}) {
    check(cb->kappa, "kappa");
    check(cb->theta, "theta");
    check(cb->sigma, "sigma");
    check(cb->x0, "x0");
    if (cb->kappa.lo <= 0.0 || cb->theta.lo <= 0.0 || cb->sigma.lo <= 0.0 ||
        cb->x0.lo <= 0.0) {
      throw std::invalid_argument(
          "CalibrationConfig: CIR bounds must keep parameters positive");
    }
  }
  check(eps_r, "eps_r");
  check(eps_s, "eps_s");
  check(rho, "rho");
  if (eps_r.lo < 0.0 || eps_s.lo < 0.0 || rho.lo < -1.0 || rho.hi > 1.0) {
    throw std::invalid_argument("CalibrationConfig: inadmissible correlation bounds");
  }
  if (!(sa.decay > 0.0 && sa.decay < 1.0)) {
    throw std::invalid_argument("CalibrationConfig: sa.decay must lie in (0, 1)");
  }
  if (sa.steps_per_stage <= 0 || sa.max_evaluations <= 0 ||
      convergence.max_evaluations <= 0 || multistart <= 0) {
    throw std::invalid_argument("CalibrationConfig: counts must be positive");
  }
}

CalibrationConfig CalibrationConfig::from_key_values(const KeyValueMap& kv) {
  CalibrationConfig c;
  auto bounds = [&](const std::string& prefix, ParamBounds& b) {
    b.lo = kv_get_double(kv, prefix + ".lo", b.lo);
    b.hi = kv_get_double(kv, prefix + ".hi", b.hi);
  };
  bounds("bounds.kappa_r", c.rf_bounds.kappa);
  bounds("bounds.theta_r", c.rf_bounds.theta);
  bounds("bounds.sigma_r", c.rf_bounds.sigma);
  bounds("bounds.r0", c.rf_bounds.x0);
  bounds("bounds.kappa_s", c.spread_bounds.kappa);
  bounds("bounds.theta_s", c.spread_bounds.theta);
  bounds("bounds.sigma_s", c.spread_bounds.sigma);
  bounds("bounds.s0", c.spread_bounds.x0);
  bounds("bounds.eps_r", c.eps_r);
  bounds("bounds.eps_s", c.eps_s);
  bounds("bounds.rho", c.rho);
  c.sa.initial_temperature = kv_get_double(kv, "sa.initial_temperature",
                                           c.sa.initial_temperature);
  c.sa.decay = kv_get_double(kv, "sa.decay", c.sa.decay);
  c.sa.steps_per_stage = static_cast<int>(
      kv_get_double(kv, "sa.steps_per_stage", c.sa.steps_per_stage));
  c.sa.reanneal_after_stale_stages = static_cast<int>(kv_get_double(
      kv, "sa.reanneal_after_stale_stages", c.sa.reanneal_after_stale_stages));
  c.sa.reanneal_factor =
      kv_get_double(kv, "sa.reanneal_factor", c.sa.reanneal_factor);
  c.sa.proposal_width =
      kv_get_double(kv, "sa.proposal_width", c.sa.proposal_width);
  c.sa.max_evaluations = static_cast<long>(kv_get_double(
      kv, "sa.max_evaluations", static_cast<double>(c.sa.max_evaluations)));
  c.mc_cfg.step_h = kv_get_double(kv, "mc.step_h", c.mc_cfg.step_h);
  c.mc_cfg.n_paths = static_cast<std::int64_t>(
      kv_get_double(kv, "mc.n_paths", static_cast<double>(c.mc_cfg.n_paths)));
  c.mc_cfg.horizon = kv_get_double(kv, "mc.horizon", c.mc_cfg.horizon);
  c.mc_cfg.seed = static_cast<std::uint64_t>(
      kv_get_double(kv, "mc.seed", static_cast<double>(c.mc_cfg.seed)));
  c.weight_rates = kv_get_double(kv, "weights.rates", c.weight_rates);
  c.weight_spreads = kv_get_double(kv, "weights.spreads", c.weight_spreads);
  c.convergence.objective_tol =
      kv_get_double(kv, "convergence.objective_tol", c.convergence.objective_tol);
  c.convergence.max_evaluations = static_cast<long>(
      kv_get_double(kv, "convergence.max_evaluations",
                    static_cast<double>(c.convergence.max_evaluations)));
  c.seed = static_cast<std::uint64_t>(
      kv_get_double(kv, "seed", static_cast<double>(c.seed)));
  c.multistart =
      static_cast<int>(kv_get_double(kv, "multistart", c.multistart));
  c.validate();
  return c;
}

double objective_model1(const CirParams& pr, const CirParams& ps, double r0,
                        double s0, const YieldCurve& de, const YieldCurve& it,
                        double weight_rates, double weight_spreads) {
  require_30y_grid(de, "objective_model1");
  require_30y_grid(it, "objective_model1");
  const std::vector<double> observed_spread = spreads_of(de, it);
  double sum = 0.0;
  for (int i = 0; i < 30; ++i) {
    const double tau = i + 1.0;
    const double model_rate = zero_rate(zcb_price_cir(pr, r0, tau), tau);
    const double model_spread = zero_rate(zcb_price_cir(ps, s0, tau), tau);
    const double dr = model_rate - de.zero_rates()[static_cast<std::size_t>(i)];
    const double dsp = model_spread - observed_spread[static_cast<std::size_t>(i)];
    sum += weight_rates * dr * dr + weight_spreads * dsp * dsp;
  }
  return sum;
}

double objective_model2(const AdcParams& p, double r0, double s0,
                        const YieldCurve& de, const YieldCurve& it,
                        const SimConfig& mc_cfg, double weight_rates,
                        double weight_spreads) {
  require_30y_grid(de, "objective_model2");
  require_30y_grid(it, "objective_model2");
  AdcParams model = p;
  model.r.x0 = r0;
  model.s.x0 = s0;
  const McCurvePair mc =
      price_zcb_mc_curve_both(SimModel{model}, mc_cfg, integer_tenors());
  const std::vector<double> observed_spread = spreads_of(de, it);
  double sum = 0.0;
  for (int i = 0; i < 30; ++i) {
    const double tau = i + 1.0;
    const std::size_t j = static_cast<std::size_t>(i);
    // explosive proposals drive the discount to underflow; price them as
    // an infinitely bad fit instead of a domain error
    if (!(mc.risk_free[j].value > 0.0) || !(mc.risky[j].value > 0.0)) {
      return std::numeric_limits<double>::infinity();
    }
    const double rate_rf = zero_rate(mc.risk_free[j].value, tau);
    const double rate_risky = zero_rate(mc.risky[j].value, tau);
    const double dr = rate_rf - de.zero_rates()[j];
    const double dsp = (rate_risky - rate_rf) - observed_spread[j];
    sum += weight_rates * dr * dr + weight_spreads * dsp * dsp;
  }
  return sum;
}

namespace {

CalibrationReport finish_report_model1(const CirParams& pr, const CirParams& ps,
                                       const YieldCurve& de, const YieldCurve& it,
                                       const CalibrationConfig& cfg,
                                       long evaluations, bool converged) {
  CalibrationReport rep;
  rep.params = AdcParams::independent(pr, ps);
  rep.objective = objective_model1(pr, ps, pr.x0, ps.x0, de, it,
                                   cfg.weight_rates, cfg.weight_spreads);
  rep.evaluations = evaluations;
  rep.seed = cfg.seed;
  rep.converged = converged;
  const std::vector<double> observed_spread = spreads_of(de, it);
  rep.residual_rates_bp.resize(30);
  rep.residual_spreads_bp.resize(30);
  for (int i = 0; i < 30; ++i) {
    const double tau = i + 1.0;
    const std::size_t j = static_cast<std::size_t>(i);
    const double model_rate = zero_rate(zcb_price_cir(pr, pr.x0, tau), tau);
    const double model_spread = zero_rate(zcb_price_cir(ps, ps.x0, tau), tau);
    rep.residual_rates_bp[j] = (model_rate - de.zero_rates()[j]) * 1e4;
    rep.residual_spreads_bp[j] = (model_spread - observed_spread[j]) * 1e4;
  }
  return rep;
}

std::vector<ParamBounds> cir_box(const CirBounds& b) {
  return {b.kappa, b.theta, b.sigma, b.x0};
}

}  // namespace

CalibrationReport calibrate_model1(const YieldCurve& de, const YieldCurve& it,
                                   const CalibrationConfig& cfg) {
  cfg.validate();
  require_30y_grid(de, "calibrate_model1");
  require_30y_grid(it, "calibrate_model1");
  const std::vector<double> observed_spread = spreads_of(de, it);

  SearchBudget budget{cfg.convergence.max_evaluations, 0};

  // Step 1: risk-free factor on the risk-free curve alone.
  auto rf_objective = [&](const std::vector<double>& v) {
    CirParams p{v[0], v[1], v[2], v[3]};
    double sum = 0.0;
    for (int i = 0; i < 30; ++i) {
      const double tau = i + 1.0;
      const double d = zero_rate(zcb_price_cir(p, v[3], tau), tau) -
                       de.zero_rates()[static_cast<std::size_t>(i)];
      sum += cfg.weight_rates * d * d;
    }
    return sum;
  };
  const CoordinateSearchResult rf = multistart_search(
      rf_objective, cir_box(cfg.rf_bounds), cfg.multistart, 25, 400,
      0.5 * cfg.convergence.objective_tol, cfg.seed, budget);
  const CirParams pr{rf.x[0], rf.x[1], rf.x[2], rf.x[3]};

  // Step 2: spread factor on the observed spread, risk-free frozen.
  auto spread_objective = [&](const std::vector<double>& v) {
    CirParams p{v[0], v[1], v[2], v[3]};
    double sum = 0.0;
    for (int i = 0; i < 30; ++i) {
      const double tau = i + 1.0;
      const double d = zero_rate(zcb_price_cir(p, v[3], tau), tau) -
                       observed_spread[static_cast<std::size_t>(i)];
      sum += cfg.weight_spreads * d * d;
    }
    return sum;
  };
  const CoordinateSearchResult sp = multistart_search(
      spread_objective, cir_box(cfg.spread_bounds), cfg.multistart, 25, 400,
      0.5 * cfg.convergence.objective_tol, cfg.seed + 1, budget);
  const CirParams ps{sp.x[0], sp.x[1], sp.x[2], sp.x[3]};

  CalibrationReport rep = finish_report_model1(pr, ps, de, it, cfg, budget.used,
                                               rf.converged && sp.converged);
  const std::vector<std::string> names = {"kappa_r", "theta_r", "sigma_r", "r0",
                                          "kappa_s", "theta_s", "sigma_s", "s0"};
  auto joint = [&](const std::vector<double>& v) {
    return objective_model1(CirParams{v[0], v[1], v[2], v[3]},
                            CirParams{v[4], v[5], v[6], v[7]}, v[3], v[7], de,
                            it, cfg.weight_rates, cfg.weight_spreads);
  };
  std::vector<ParamBounds> joint_box = cir_box(cfg.rf_bounds);
  const std::vector<ParamBounds> sb = cir_box(cfg.spread_bounds);
  joint_box.insert(joint_box.end(), sb.begin(), sb.end());
  const std::vector<double> xfit = {pr.kappa, pr.theta, pr.sigma, pr.x0,
                                    ps.kappa, ps.theta, ps.sigma, ps.x0};
  rep.curvature =
      curvature_diagnostic(joint, joint_box, xfit, names, rep.objective);
  return rep;
}

CalibrationReport calibrate_model2(const YieldCurve& de, const YieldCurve& it,
                                   const CalibrationConfig& cfg) {
  cfg.validate();
  require_30y_grid(de, "calibrate_model2");
  require_30y_grid(it, "calibrate_model2");

  // Initial point: the model-1 fit with zero correlation.
  const CalibrationReport m1 = calibrate_model1(de, it, cfg);

  std::vector<ParamBounds> box = cir_box(cfg.rf_bounds);
  {
    const std::vector<ParamBounds> sb = cir_box(cfg.spread_bounds);
    box.insert(box.end(), sb.begin(), sb.end());
    box.push_back(cfg.eps_r);
    box.push_back(cfg.eps_s);
    box.push_back(cfg.rho);
  }
  auto clamp_into = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = std::clamp(v[i], box[i].lo, box[i].hi);
    }
  };

  auto decode = [](const std::vector<double>& v) {
    AdcParams p;
    p.r = CirParams{v[0], v[1], v[2], v[3]};
    p.s = CirParams{v[4], v[5], v[6], v[7]};
    p.eps_r = v[8];
    p.eps_s = v[9];
    p.gamma = v[10] * std::sqrt(v[8] * v[9]);
    return p;
  };

  long evaluations = 0;  // Monte Carlo objective calls only
  CalibrationReport rep;
  rep.trace.reserve(1024);

  auto objective = [&](const std::vector<double>& v) {
    const AdcParams p = decode(v);
    ++evaluations;
    return objective_model2(p, v[3], v[7], de, it, cfg.mc_cfg,
                            cfg.weight_rates, cfg.weight_spreads);
  };

  std::vector<double> x = {m1.params.r.kappa, m1.params.r.theta,
                           m1.params.r.sigma, m1.params.r.x0,
                           m1.params.s.kappa, m1.params.s.theta,
                           m1.params.s.sigma, m1.params.s.x0,
                           0.0,               0.0,
                           0.0};
  clamp_into(x);

  double fx = objective(x);
  std::vector<double> best_x = x;
  double best_f = fx;
  rep.trace.push_back({evaluations, 0.0, fx, true, true});

  const double t0 = cfg.sa.initial_temperature > 0.0 ? cfg.sa.initial_temperature
                                                     : std::max(fx, 1e-300);
  double temperature = t0;
  RandomStream rng = RandomStream::keyed(cfg.seed, 0x5AFEull);
  int stale_stages = 0;
  bool converged = false;

  const long sa_budget = cfg.sa.max_evaluations;
  while (evaluations < sa_budget && !converged) {
    bool stage_improved = false;
    for (int step = 0; step < cfg.sa.steps_per_stage && evaluations < sa_budget;
         ++step) {
      const std::size_t dim = static_cast<std::size_t>(rng.next_u64() % box.size());
      const double width = cfg.sa.proposal_width * (temperature / t0) *
                           (box[dim].hi - box[dim].lo);
      std::vector<double> y = x;
      y[dim] = std::clamp(x[dim] + (2.0 * rng.next_unit() - 1.0) * width,
                          box[dim].lo, box[dim].hi);
      const double fy = objective(y);
      const double delta = fy - fx;
      const bool accept =
          delta <= 0.0 || rng.next_unit() < std::exp(-delta / temperature);
      bool improved = false;
      if (accept) {
        x = std::move(y);
        fx = fy;
        if (fx < best_f) {
          best_f = fx;
          best_x = x;
          improved = true;
          stage_improved = true;
        }
      }
      rep.trace.push_back({evaluations, temperature, fy, accept, improved});
      if (best_f <= cfg.convergence.objective_tol) {
        converged = true;
        break;
      }
    }
    temperature *= cfg.sa.decay;
    stale_stages = stage_improved ? 0 : stale_stages + 1;
    if (stale_stages >= cfg.sa.reanneal_after_stale_stages) {
      temperature = t0 * cfg.sa.reanneal_factor;
      stale_stages = 0;
    }
  }

  // Final polish around the best point with the coordinate search.
  if (evaluations < sa_budget) {
    SearchBudget polish{sa_budget - evaluations, 0};
    auto counted = [&](const std::vector<double>& v) { return objective(v); };
    const CoordinateSearchResult polished = direction_set_search(
        counted, box, best_x, 3, cfg.convergence.objective_tol, polish, 32);
    if (polished.objective < best_f) {
      best_x = polished.x;
      best_f = polished.objective;
      rep.trace.push_back({evaluations, 0.0, best_f, true, true});
    }
  }

  rep.params = decode(best_x);
  rep.objective = best_f;
  rep.evaluations = evaluations;
  rep.seed = cfg.seed;
  rep.converged = converged || best_f <= cfg.convergence.objective_tol;

  // Residuals at the fitted point.
  {
    AdcParams model = rep.params;
    const McCurvePair mc = price_zcb_mc_curve_both(SimModel{model}, cfg.mc_cfg,
                                                   integer_tenors());
    const std::vector<double> observed_spread = spreads_of(de, it);
    rep.residual_rates_bp.resize(30);
    rep.residual_spreads_bp.resize(30);
    for (int i = 0; i < 30; ++i) {
      const double tau = i + 1.0;
      const std::size_t j = static_cast<std::size_t>(i);
      const double rate_rf = zero_rate(mc.risk_free[j].value, tau);
      const double rate_risky = zero_rate(mc.risky[j].value, tau);
      rep.residual_rates_bp[j] = (rate_rf - de.zero_rates()[j]) * 1e4;
      rep.residual_spreads_bp[j] =
          ((rate_risky - rate_rf) - observed_spread[j]) * 1e4;
    }
  }

  const std::vector<std::string> names = {"kappa_r", "theta_r", "sigma_r", "r0",
                                          "kappa_s", "theta_s", "sigma_s", "s0",
                                          "eps_r",   "eps_s",   "rho"};
  auto diag_obj = [&](const std::vector<double>& v) {
    const AdcParams p = decode(v);
    return objective_model2(p, v[3], v[7], de, it, cfg.mc_cfg, cfg.weight_rates,
                            cfg.weight_spreads);
  };
  rep.curvature = curvature_diagnostic(diag_obj, box, best_x, names, best_f);
  return rep;
}

void write_report_text(const CalibrationReport& report, std::ostream& out) {
  out.precision(12);
  out << "calibration report\n";
  out << "objective = " << report.objective << "\n";
  out << "evaluations = " << report.evaluations << "\n";
  out << "seed = " << report.seed << "\n";
  out << "converged = " << (report.converged ? "yes" : "no") << "\n";
  out << "\nfitted parameters\n";
  const AdcParams& p = report.params;
  out << "  kappa_r = " << p.r.kappa << "\n  theta_r = " << p.r.theta
      << "\n  sigma_r = " << p.r.sigma << "\n  r0 = " << p.r.x0 << "\n";
  out << "  kappa_s = " << p.s.kappa << "\n  theta_s = " << p.s.theta
      << "\n  sigma_s = " << p.s.sigma << "\n  s0 = " << p.s.x0 << "\n";
  out << "  eps_r = " << p.eps_r << "\n  eps_s = " << p.eps_s
      << "\n  gamma = " << p.gamma << "\n";
  out << "  nu_r = " << p.r.nu() << "\n  nu_s = " << p.s.nu() << "\n";
  out << "\nresiduals (fitted - observed, basis points)\n";
  out << "  tenor  rate_resid  spread_resid\n";
  for (std::size_t i = 0; i < report.residual_rates_bp.size(); ++i) {
    out << "  " << (i + 1) << "  " << report.residual_rates_bp[i] << "  "
        << report.residual_spreads_bp[i] << "\n";
  }
  out << "\ncurvature diagnostic (objective second differences)\n";
  for (const CurvatureDiagnostic& c : report.curvature) {
    out << "  " << c.name << " = " << c.curvature
        << (c.flat ? "  [flat direction]" : "") << "\n";
  }
  out << "\ntrace: " << report.trace.size() << " recorded moves\n";
}

void write_fitted_params_csv(const CalibrationReport& report, std::ostream& out,
                             const std::vector<std::string>& comment_lines) {
  for (const std::string& c : comment_lines) out << "# " << c << "\n";
  out << "parameter,value\n";
  out.precision(17);
  const AdcParams& p = report.params;
  out << "kappa_r," << p.r.kappa << "\n";
  out << "theta_r," << p.r.theta << "\n";
  out << "sigma_r," << p.r.sigma << "\n";
  out << "r0," << p.r.x0 << "\n";
  out << "kappa_s," << p.s.kappa << "\n";
  out << "theta_s," << p.s.theta << "\n";
  out << "sigma_s," << p.s.sigma << "\n";
  out << "s0," << p.s.x0 << "\n";
  out << "eps_r," << p.eps_r << "\n";
  out << "eps_s," << p.eps_s << "\n";
  out << "gamma," << p.gamma << "\n";
  out << "objective," << report.objective << "\n";
}

void write_residuals_csv(const CalibrationReport& report, std::ostream& out,
                         const std::vector<std::string>& comment_lines) {
  for (const std::string& c : comment_lines) out << "# " << c << "\n";
  out << "tenor_years,rate_residual_bp,spread_residual_bp\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.residual_rates_bp.size(); ++i) {
    out << (i + 1) << "," << report.residual_rates_bp[i] << ","
        << report.residual_spreads_bp[i] << "\n";
  }
}

}  // namespace adcir
