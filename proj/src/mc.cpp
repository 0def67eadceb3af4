#include "adcir/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace adcir {

namespace {

constexpr double kGridTol = 1e-6;

std::int64_t step_count(double horizon, double step_h) {
  const double exact = horizon / step_h;
  const double rounded = std::nearbyint(exact);
  std::int64_t n;
  if (std::fabs(exact - rounded) <= kGridTol * std::max(1.0, rounded)) {
    n = static_cast<std::int64_t>(rounded);
  } else {
    n = static_cast<std::int64_t>(std::ceil(exact));
  }
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  return n;
}

void validate_sim_cir(const CirParams& p, const char* where) {
  auto ok = [](double v) { return std::isfinite(v); };
  if (!ok(p.kappa) || !ok(p.theta) || !ok(p.sigma) || !ok(p.x0) ||
      p.kappa <= 0.0 || p.theta <= 0.0 || p.sigma < 0.0 || p.x0 < 0.0) {
    throw std::invalid_argument(std::string(where) +
                                ": need kappa, theta > 0 and sigma, x0 >= 0");
  }
}

void validate_model(const SimModel& model) {
  if (const auto* u = std::get_if<UnivariateModel>(&model)) {
    validate_sim_cir(u->p, "simulate");
  } else if (const auto* m1 = std::get_if<IndependentPair>(&model)) {
    validate_sim_cir(m1->r, "simulate");
    validate_sim_cir(m1->s, "simulate");
  } else {
    const auto& p = std::get<AdcParams>(model);
    validate_sim_cir(p.r, "simulate");
    validate_sim_cir(p.s, "simulate");
    if (p.eps_r < 0.0 || p.eps_s < 0.0 || p.gamma * p.gamma > p.eps_r * p.eps_s) {
      throw std::invalid_argument("simulate: inadmissible correlation parameters");
    }
  }
}

bool is_univariate(const SimModel& model) {
  return std::holds_alternative<UnivariateModel>(model);
}

AdcParams as_adc(const SimModel& model) {
  if (const auto* m1 = std::get_if<IndependentPair>(&model)) {
    return AdcParams::independent(m1->r, m1->s);
  }
  return std::get<AdcParams>(model);
}

struct UnivariateStepper {
  CirParams p;
  double h = 0.0;
  double sqrt_h = 0.0;
  std::uint64_t seed = 0;
  const std::vector<StateVector>* initial_override = nullptr;

  StateVector initial(std::int64_t path) const {
    if (initial_override) return (*initial_override)[static_cast<std::size_t>(path)];
    return StateVector{p.x0, 0.0};
  }

  StateVector step(StateVector x, std::int64_t path, std::int64_t k) const {
    const double z = normal_pair(seed, static_cast<std::uint64_t>(path),
                                 static_cast<std::uint64_t>(k)).first;
    const double r = x.r + p.kappa * (p.theta - x.r) * h +
                     p.sigma * std::sqrt(x.r) * sqrt_h * z;
    return StateVector{r > 0.0 ? r : 0.0, 0.0};
  }
};

struct BivariateStepper {
  AdcParams p;
  double h = 0.0;
  double sqrt_h = 0.0;
  std::uint64_t seed = 0;
  const std::vector<StateVector>* initial_override = nullptr;

  StateVector initial(std::int64_t path) const {
    if (initial_override) return (*initial_override)[static_cast<std::size_t>(path)];
    return StateVector{p.r.x0, p.s.x0};
  }

  StateVector step(StateVector x, std::int64_t path, std::int64_t k) const {
    const NormalPair z = normal_pair(seed, static_cast<std::uint64_t>(path),
                                     static_cast<std::uint64_t>(k));
    const Vec2 a = drift(p, x);
    const DiffusionFactor b = diffusion_factor(p, x);
    const double r = x.r + a.r * h + sqrt_h * b.b11 * z.first;
    const double s =
        x.s + a.s * h + sqrt_h * (b.b21 * z.first + b.b22 * z.second);
    return StateVector{r > 0.0 ? r : 0.0, s > 0.0 ? s : 0.0};
  }
};

// Runs every path through `make_sink(path)`; the sink is invoked once per
// grid instant, including the initial one. Paths are distributed over
// threads in contiguous chunks; sinks must only touch per-path slots.
template <class Stepper, class MakeSink>
void sweep(const Stepper& st, std::int64_t n_paths, std::int64_t n_steps,
           MakeSink make_sink) {
  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t path = lo; path < hi; ++path) {
      auto sink = make_sink(path);
      StateVector x = st.initial(path);
      sink(0, x);
      for (std::int64_t k = 0; k < n_steps; ++k) {
        x = st.step(x, path, k);
        sink(k + 1, x);
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::int64_t n_threads =
      std::min<std::int64_t>(static_cast<std::int64_t>(hw), n_paths);
  if (n_threads <= 1) {
    run_range(0, n_paths);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_threads));
  const std::int64_t chunk = (n_paths + n_threads - 1) / n_threads;
  for (std::int64_t t = 0; t < n_threads; ++t) {
    const std::int64_t lo = t * chunk;
    const std::int64_t hi = std::min(n_paths, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back(run_range, lo, hi);
  }
  for (auto& w : workers) w.join();
}

template <class MakeSink>
void sweep_model(const SimModel& model, const SimConfig& cfg,
                 std::int64_t n_steps,
                 const std::vector<StateVector>* initial_states,
                 MakeSink make_sink) {
  const double h = cfg.horizon / static_cast<double>(n_steps);
  if (is_univariate(model)) {
    UnivariateStepper st{std::get<UnivariateModel>(model).p, h, std::sqrt(h),
                         cfg.seed, initial_states};
    sweep(st, cfg.n_paths, n_steps, make_sink);
  } else {
    BivariateStepper st{as_adc(model), h, std::sqrt(h), cfg.seed,
                        initial_states};
    sweep(st, cfg.n_paths, n_steps, make_sink);
  }
}

std::int64_t grid_index(double t, double h, std::int64_t n_steps,
                        const char* where) {
  const double exact = t / h;
  const double rounded = std::nearbyint(exact);
  if (std::fabs(exact - rounded) > kGridTol * std::max(1.0, rounded)) {
    throw std::invalid_argument(std::string(where) + ": time off the step grid");
  }
  const std::int64_t idx = static_cast<std::int64_t>(rounded);
  if (idx < 0 || idx > n_steps) {
    throw std::invalid_argument(std::string(where) + ": time outside the horizon");
  }
  return idx;
}

}  // namespace

SimConfig SimConfig::normalized() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("SimConfig: horizon must be > 0");
  if (!(step_h > 0.0)) throw std::invalid_argument("SimConfig: step_h must be > 0");
  if (n_paths <= 0) throw std::invalid_argument("SimConfig: n_paths must be > 0");
  if (boundary_delta < 0.0) {
    throw std::invalid_argument("SimConfig: boundary_delta must be >= 0");
  }
  SimConfig out = *this;
  out.step_h = horizon / static_cast<double>(step_count(horizon, step_h));
  return out;
}

std::int64_t SimConfig::n_steps() const {
  return step_count(horizon, step_h);
}

PathBatch simulate(const SimModel& model, const SimConfig& cfg_in) {
  validate_model(model);
  const SimConfig cfg = cfg_in.normalized();
  const std::int64_t n_steps = cfg.n_steps();
  const std::int64_t n_instants = n_steps + 1;
  const bool univariate = is_univariate(model);
  const double delta = cfg.boundary_delta;

  PathBatch batch;
  batch.seed = cfg.seed;
  batch.n_paths = cfg.n_paths;
  batch.n_instants = n_instants;
  batch.times.resize(static_cast<std::size_t>(n_instants));
  for (std::int64_t k = 0; k < n_instants; ++k) {
    batch.times[static_cast<std::size_t>(k)] =
        cfg.step_h * static_cast<double>(k);
  }
  batch.states.assign(static_cast<std::size_t>(cfg.n_paths * n_instants),
                      StateVector{});
  batch.hit_flags.assign(static_cast<std::size_t>(cfg.n_paths), 0);

  StateVector* states = batch.states.data();
  std::uint8_t* flags = batch.hit_flags.data();
  sweep_model(model, cfg, n_steps, nullptr, [&](std::int64_t path) {
    StateVector* row = states + path * n_instants;
    std::uint8_t* flag = flags + path;
    return [row, flag, univariate, delta](std::int64_t k, StateVector x) {
      row[k] = x;
      const bool hit = univariate ? (x.r < delta) : (x.r < delta && x.s < delta);
      if (hit) *flag = 1;
    };
  });
  return batch;
}

namespace {

// Streaming composite-Simpson state for one discount integrand.
struct SimpsonState {
  double first = 0.0, last = 0.0, sum_odd = 0.0, sum_even = 0.0;
  void push(std::int64_t k, double f) {
    if (k == 0) {
      first = f;
    } else if (k % 2 == 1) {
      sum_odd += f;
    } else {
      sum_even += f;
    }
    last = f;
  }
  double integral(double h3, std::int64_t k) const {
    return k == 0 ? 0.0 : h3 * (first + 4.0 * sum_odd + 2.0 * sum_even - last);
  }
};

// Per-path discount factors exp(-Simpson integral) at the requested tenors
// for one or both legs; rows are path-major.
struct DiscountTable {
  std::vector<double> risk_free;
  std::vector<double> risky;
};

DiscountTable mc_discounts(const SimModel& model, const SimConfig& cfg_in,
                           const std::vector<double>& tenors, bool want_rf,
                           bool want_risky) {
  validate_model(model);
  if (want_risky && is_univariate(model)) {
    throw std::invalid_argument("price_zcb_mc: risky leg needs a bivariate model");
  }
  const SimConfig cfg = cfg_in.normalized();
  const std::int64_t n_steps = cfg.n_steps();
  const double h = cfg.horizon / static_cast<double>(n_steps);

  std::vector<std::pair<std::int64_t, std::size_t>> schedule;
  schedule.reserve(tenors.size());
  for (std::size_t j = 0; j < tenors.size(); ++j) {
    const double T = tenors[j];
    if (T < 0.0 || T > cfg.horizon * (1.0 + 1e-12)) {
      throw std::invalid_argument("price_zcb_mc: tenor outside the horizon");
    }
    const std::int64_t idx = grid_index(T, h, n_steps, "price_zcb_mc");
    if (idx % 2 != 0) {
      throw std::invalid_argument(
          "price_zcb_mc: tenor lands on an odd interval count");
    }
    schedule.emplace_back(idx, j);
  }
  std::sort(schedule.begin(), schedule.end());

  const std::size_t n_tenors = tenors.size();
  DiscountTable table;
  const std::size_t cells = static_cast<std::size_t>(cfg.n_paths) * n_tenors;
  if (want_rf) table.risk_free.assign(cells, 1.0);
  if (want_risky) table.risky.assign(cells, 1.0);

  struct Sink {
    double h3;
    SimpsonState rf, ry;
    const std::pair<std::int64_t, std::size_t>* sched;
    std::size_t n_sched;
    std::size_t cursor = 0;
    double* out_rf;  // either may be null
    double* out_ry;
    void operator()(std::int64_t k, StateVector x) {
      if (out_rf) rf.push(k, x.r);
      if (out_ry) ry.push(k, x.r + x.s);
      while (cursor < n_sched && sched[cursor].first == k) {
        const std::size_t j = sched[cursor].second;
        if (out_rf) out_rf[j] = std::exp(-rf.integral(h3, k));
        if (out_ry) out_ry[j] = std::exp(-ry.integral(h3, k));
        ++cursor;
      }
    }
  };

  sweep_model(model, cfg, n_steps, nullptr, [&](std::int64_t path) {
    Sink s;
    s.h3 = h / 3.0;
    s.sched = schedule.data();
    s.n_sched = schedule.size();
    const std::size_t offset = static_cast<std::size_t>(path) * n_tenors;
    s.out_rf = want_rf ? table.risk_free.data() + offset : nullptr;
    s.out_ry = want_risky ? table.risky.data() + offset : nullptr;
    return s;
  });
  return table;
}

std::vector<McPrice> reduce_discounts(const std::vector<double>& table,
                                      std::size_t n_tenors,
                                      std::int64_t n_paths) {
  std::vector<McPrice> prices(n_tenors);
  std::vector<double> column(static_cast<std::size_t>(n_paths));
  for (std::size_t j = 0; j < n_tenors; ++j) {
    for (std::int64_t p = 0; p < n_paths; ++p) {
      column[static_cast<std::size_t>(p)] =
          table[static_cast<std::size_t>(p) * n_tenors + j];
    }
    const Summary s = summarize(column);
    prices[j] = McPrice{s.mean, s.std_error, n_paths};
  }
  return prices;
}

}  // namespace

std::vector<McPrice> price_zcb_mc_curve(const SimModel& model,
                                        const SimConfig& cfg,
                                        const std::vector<double>& tenors,
                                        Leg leg) {
  const bool risky = (leg == Leg::risky);
  const DiscountTable table = mc_discounts(model, cfg, tenors, !risky, risky);
  return reduce_discounts(risky ? table.risky : table.risk_free, tenors.size(),
                          cfg.normalized().n_paths);
}

McCurvePair price_zcb_mc_curve_both(const SimModel& model,
                                    const SimConfig& cfg,
                                    const std::vector<double>& tenors) {
  const DiscountTable table = mc_discounts(model, cfg, tenors, true, true);
  McCurvePair out;
  const std::int64_t n_paths = cfg.normalized().n_paths;
  out.risk_free = reduce_discounts(table.risk_free, tenors.size(), n_paths);
  out.risky = reduce_discounts(table.risky, tenors.size(), n_paths);
  return out;
}

McPrice price_zcb_mc(const SimModel& model, const SimConfig& cfg, double T,
                     Leg leg) {
  return price_zcb_mc_curve(model, cfg, {T}, leg).front();
}

HitEstimate hitting_probability(const SimModel& model, const SimConfig& cfg_in) {
  validate_model(model);
  const SimConfig cfg = cfg_in.normalized();
  const std::int64_t n_steps = cfg.n_steps();
  const bool univariate = is_univariate(model);
  const double delta = cfg.boundary_delta;

  std::vector<std::uint8_t> flags(static_cast<std::size_t>(cfg.n_paths), 0);
  std::uint8_t* fp = flags.data();
  sweep_model(model, cfg, n_steps, nullptr, [&](std::int64_t path) {
    std::uint8_t* flag = fp + path;
    return [flag, univariate, delta](std::int64_t, StateVector x) {
      const bool hit = univariate ? (x.r < delta) : (x.r < delta && x.s < delta);
      if (hit) *flag = 1;
    };
  });

  HitEstimate est;
  est.n_paths = cfg.n_paths;
  est.hits = std::count(flags.begin(), flags.end(), std::uint8_t{1});
  const double n = static_cast<double>(cfg.n_paths);
  est.probability = static_cast<double>(est.hits) / n;
  est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / n);
  return est;
}

std::vector<StateVector> terminal_states(
    const SimModel& model, const SimConfig& cfg_in,
    const std::vector<StateVector>* initial_states) {
  validate_model(model);
  const SimConfig cfg = cfg_in.normalized();
  const std::int64_t n_steps = cfg.n_steps();
  if (initial_states &&
      initial_states->size() != static_cast<std::size_t>(cfg.n_paths)) {
    throw std::invalid_argument("terminal_states: need one initial state per path");
  }
  std::vector<StateVector> terminal(static_cast<std::size_t>(cfg.n_paths));
  StateVector* out = terminal.data();
  sweep_model(model, cfg, n_steps, initial_states, [&](std::int64_t path) {
    StateVector* slot = out + path;
    return [slot, n_steps](std::int64_t k, StateVector x) {
      if (k == n_steps) *slot = x;
    };
  });
  return terminal;
}

namespace {

std::vector<double> component_at(const PathBatch& batch, std::int64_t instant,
                                 bool spread) {
  std::vector<double> v(static_cast<std::size_t>(batch.n_paths));
  for (std::int64_t p = 0; p < batch.n_paths; ++p) {
    const StateVector x = batch.at(p, instant);
    v[static_cast<std::size_t>(p)] = spread ? x.s : x.r;
  }
  return v;
}

std::int64_t batch_instant(const PathBatch& batch, double t) {
  for (std::int64_t k = 0; k < batch.n_instants; ++k) {
    if (std::fabs(batch.times[static_cast<std::size_t>(k)] - t) <=
        kGridTol * std::max(1.0, std::fabs(t))) {
      return k;
    }
  }
  throw std::invalid_argument("empirical_distribution: t not on the batch grid");
}

}  // namespace

Histogram1D empirical_distribution(const PathBatch& batch, double t,
                                   Component component) {
  if (component == Component::joint) {
    throw std::invalid_argument(
        "empirical_distribution: use the joint overload for 2-D histograms");
  }
  const std::int64_t k = batch_instant(batch, t);
  return histogram_fd(component_at(batch, k, component == Component::s));
}

Histogram2D empirical_distribution_joint(const PathBatch& batch, double t) {
  const std::int64_t k = batch_instant(batch, t);
  return histogram2d_fd(component_at(batch, k, false),
                        component_at(batch, k, true));
}

ComparisonReport comparison_sum_check(const std::vector<CirParams>& factors,
                                      const SimConfig& cfg_in, double alpha) {
  if (factors.empty()) {
    throw std::invalid_argument("comparison_sum_check: need >= 1 factor");
  }
  for (const CirParams& p : factors) p.validate();
  const double kappa = factors.front().kappa;
  for (const CirParams& p : factors) {
    if (std::fabs(p.kappa - kappa) > 1e-12 * std::max(1.0, std::fabs(kappa))) {
      throw std::invalid_argument("comparison_sum_check: kappas must be equal");
    }
  }
  const SimConfig cfg = cfg_in.normalized();
  const std::int64_t n_steps = cfg.n_steps();
  const double h = cfg.horizon / static_cast<double>(n_steps);
  const double sqrt_h = std::sqrt(h);
  const std::size_t n_factors = factors.size();

  double nu_sum = 0.0;
  double z0 = 0.0;
  for (const CirParams& p : factors) {
    nu_sum += p.nu();
    z0 += p.x0 / (p.sigma * p.sigma);
  }

  std::vector<double> z_terminal(static_cast<std::size_t>(cfg.n_paths), 0.0);
  double* out = z_terminal.data();

  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> x(n_factors);
    for (std::int64_t path = lo; path < hi; ++path) {
      for (std::size_t f = 0; f < n_factors; ++f) x[f] = factors[f].x0;
      for (std::int64_t k = 0; k < n_steps; ++k) {
        for (std::size_t f = 0; f < n_factors; ++f) {
          const double z = normal_pair(cfg.seed, static_cast<std::uint64_t>(path),
                                       static_cast<std::uint64_t>(k),
                                       static_cast<std::uint64_t>(f))
                               .first;
          const CirParams& p = factors[f];
          const double nx = x[f] + p.kappa * (p.theta - x[f]) * h +
                            p.sigma * std::sqrt(x[f]) * sqrt_h * z;
          x[f] = nx > 0.0 ? nx : 0.0;
        }
      }
      double zsum = 0.0;
      for (std::size_t f = 0; f < n_factors; ++f) {
        zsum += x[f] / (factors[f].sigma * factors[f].sigma);
      }
      out[path] = zsum;
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::int64_t n_threads =
      std::min<std::int64_t>(static_cast<std::int64_t>(hw), cfg.n_paths);
  if (n_threads <= 1) {
    run_range(0, cfg.n_paths);
  } else {
    std::vector<std::thread> workers;
    const std::int64_t chunk = (cfg.n_paths + n_threads - 1) / n_threads;
    for (std::int64_t t = 0; t < n_threads; ++t) {
      const std::int64_t lo = t * chunk;
      const std::int64_t hi = std::min(cfg.n_paths, lo + chunk);
      if (lo >= hi) break;
      workers.emplace_back(run_range, lo, hi);
    }
    for (auto& w : workers) w.join();
  }

  CirParams zp;
  zp.kappa = kappa;
  zp.theta = nu_sum / (2.0 * kappa);
  zp.sigma = 1.0;
  zp.x0 = z0;
  const KsResult ks = ks_test(
      z_terminal, [&](double x) { return transition_cdf(zp, cfg.horizon, x); },
      alpha);

  ComparisonReport rep;
  rep.ks_distance = ks.distance;
  rep.ks_critical = ks.critical_value;
  rep.alpha = alpha;
  rep.n_paths = cfg.n_paths;
  rep.t = cfg.horizon;
  return rep;
}

}  // namespace adcir
