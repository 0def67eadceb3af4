// Command-line front end: simulation, pricing, curve construction,
// calibration, verification suites and report grids. Every run logs its
// resolved configuration and seed; every output file starts with a comment
// header carrying the version, the seed and a hash of that configuration,
// so identical invocations produce byte-identical artifacts.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "adcir/calibrate.hpp"
#include "adcir/cir.hpp"
#include "adcir/curve.hpp"
#include "adcir/fixtures.hpp"
#include "adcir/io.hpp"
#include "adcir/mc.hpp"
#include "adcir/pricing.hpp"
#include "adcir/quadrature.hpp"
#include "adcir/stats.hpp"
#include "adcir/version.hpp"

namespace fs = std::filesystem;
using namespace adcir;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ADCIR_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

// Resolved-configuration block: logged to stderr and hashed into headers.
struct RunContext {
  std::map<std::string, std::string> resolved;
  std::uint64_t seed = 0;

  void set(const std::string& key, const std::string& value) {
    resolved[key] = value;
  }
  void set(const std::string& key, double value) {
    std::ostringstream ss;
    ss.precision(17);
    ss << value;
    resolved[key] = ss.str();
  }
  void set(const std::string& key, std::int64_t value) {
    resolved[key] = std::to_string(value);
  }

  std::string canonical() const {
    std::ostringstream ss;
    for (const auto& [k, v] : resolved) ss << k << "=" << v << "\n";
    return ss.str();
  }

  std::vector<std::string> header_lines() const {
    std::ostringstream hash;
    hash << std::hex << fnv1a_hash(canonical());
    return {std::string("adcir version=") + kVersion,
            "seed=" + std::to_string(seed), "config_hash=" + hash.str()};
  }

  void log() const {
    std::cerr << "# resolved configuration\n";
    for (const auto& [k, v] : resolved) std::cerr << "#   " << k << " = " << v << "\n";
    for (const std::string& line : header_lines()) std::cerr << "# " << line << "\n";
  }
};

CirParams cir_from_kv(const KeyValueMap& kv, const std::string& prefix) {
  CirParams p;
  p.kappa = kv_get_double(kv, "kappa" + prefix);
  p.theta = kv_get_double(kv, "theta" + prefix);
  p.sigma = kv_get_double(kv, "sigma" + prefix);
  p.x0 = kv_get_double(kv, prefix.empty() ? "x0" : (prefix == "_r" ? "r0" : "s0"));
  return p;
}

SimModel load_model(const std::string& kind, const std::string& params_path,
                    RunContext& ctx) {
  const KeyValueMap kv = read_key_value_file(params_path);
  for (const auto& [k, v] : kv) ctx.set("params." + k, v);
  if (kind == "cir") {
    return SimModel{UnivariateModel{cir_from_kv(kv, "")}};
  }
  if (kind == "model1") {
    return SimModel{IndependentPair{cir_from_kv(kv, "_r"), cir_from_kv(kv, "_s")}};
  }
  if (kind == "adc") {
    AdcParams p;
    p.r = cir_from_kv(kv, "_r");
    p.s = cir_from_kv(kv, "_s");
    p.eps_r = kv_get_double(kv, "eps_r", 0.0);
    p.eps_s = kv_get_double(kv, "eps_s", 0.0);
    p.gamma = kv_get_double(kv, "gamma", 0.0);
    p.validate();
    return SimModel{p};
  }
  throw std::invalid_argument("unknown model kind: " + kind);
}

std::vector<double> parse_tenors(const std::string& text) {
  std::vector<double> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int a = std::stoi(text.substr(0, dots));
    const int b = std::stoi(text.substr(dots + 2));
    if (a < 0 || b < a) throw std::invalid_argument("bad tenor range: " + text);
    for (int t = a; t <= b; ++t) out.push_back(t);
    return out;
  }
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) out.push_back(std::stod(piece));
  if (out.empty()) throw std::invalid_argument("empty tenor list");
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& model_kind, const std::string& params_path,
                 SimConfig cfg, const std::string& hist_times_text, bool joint,
                 const fs::path& out_dir) {
  RunContext ctx;
  ctx.seed = cfg.seed;
  ctx.set("command", std::string("simulate"));
  ctx.set("model", model_kind);
  ctx.set("step_h", cfg.step_h);
  ctx.set("n_paths", cfg.n_paths);
  ctx.set("horizon", cfg.horizon);
  ctx.set("boundary_delta", cfg.boundary_delta);
  ctx.set("seed", static_cast<std::int64_t>(cfg.seed));
  const SimModel model = load_model(model_kind, params_path, ctx);
  ctx.log();

  fs::create_directories(out_dir);
  const PathBatch batch = simulate(model, cfg);

  {
    auto out = open_out(out_dir / "paths.csv");
    write_path_batch_csv(batch, out, ctx.header_lines());
  }

  std::vector<double> hist_times;
  if (hist_times_text.empty()) {
    hist_times.push_back(cfg.horizon);
  } else {
    hist_times = parse_tenors(hist_times_text);
  }
  const bool univariate = model_kind == "cir";
  for (double t : hist_times) {
    std::ostringstream tag;
    tag << "t" << t;
    {
      auto out = open_out(out_dir / ("hist_r_" + tag.str() + ".csv"));
      write_histogram_csv(empirical_distribution(batch, t, Component::r), out,
                          ctx.header_lines());
    }
    if (!univariate) {
      auto out = open_out(out_dir / ("hist_s_" + tag.str() + ".csv"));
      write_histogram_csv(empirical_distribution(batch, t, Component::s), out,
                          ctx.header_lines());
      if (joint) {
        auto out2 = open_out(out_dir / ("hist_joint_" + tag.str() + ".csv"));
        write_histogram_csv(empirical_distribution_joint(batch, t), out2,
                            ctx.header_lines());
      }
    }
  }
  const double hit_fraction =
      batch.n_paths == 0
          ? 0.0
          : static_cast<double>(std::count(batch.hit_flags.begin(),
                                           batch.hit_flags.end(), 1)) /
                static_cast<double>(batch.n_paths);
  std::cout << "paths=" << batch.n_paths << " instants=" << batch.n_instants
            << " hit_fraction=" << hit_fraction << "\n";
  return 0;
}

int cmd_price(const std::string& model_kind, const std::string& params_path,
              const std::string& tenors_text, const std::string& method,
              SimConfig cfg, const std::string& out_path) {
  RunContext ctx;
  ctx.seed = cfg.seed;
  ctx.set("command", std::string("price"));
  ctx.set("model", model_kind);
  ctx.set("tenors", tenors_text);
  ctx.set("method", method);
  ctx.set("step_h", cfg.step_h);
  ctx.set("n_paths", cfg.n_paths);
  ctx.set("seed", static_cast<std::int64_t>(cfg.seed));
  const SimModel model = load_model(model_kind, params_path, ctx);
  ctx.log();

  const std::vector<double> tenors = parse_tenors(tenors_text);
  const bool univariate = model_kind == "cir";
  const bool want_closed = method == "closed" || method == "both";
  const bool want_mc = method == "mc" || method == "both";
  if (want_closed && model_kind == "adc") {
    const AdcParams& p = std::get<AdcParams>(model);
    if (p.eps_r != 0.0 || p.eps_s != 0.0 || p.gamma != 0.0) {
      throw std::invalid_argument(
          "price: no closed form for the correlated model; use --method mc");
    }
  }

  McCurvePair mc;
  if (want_mc) {
    double max_tenor = 0.0;
    for (double t : tenors) max_tenor = std::max(max_tenor, t);
    cfg.horizon = max_tenor;
    if (univariate) {
      mc.risk_free = price_zcb_mc_curve(model, cfg, tenors, Leg::risk_free);
    } else {
      mc = price_zcb_mc_curve_both(model, cfg, tenors);
    }
  }

  std::ostringstream table;
  table << "tenor_years";
  if (want_closed) table << ",closed_risk_free,closed_risky";
  if (want_mc) table << ",mc_risk_free,mc_risk_free_se,mc_risky,mc_risky_se";
  table << "\n";
  table.precision(12);
  for (std::size_t j = 0; j < tenors.size(); ++j) {
    table << tenors[j];
    if (want_closed) {
      CirParams pr{}, ps{};
      if (univariate) {
        pr = std::get<UnivariateModel>(model).p;
      } else if (std::holds_alternative<IndependentPair>(model)) {
        pr = std::get<IndependentPair>(model).r;
        ps = std::get<IndependentPair>(model).s;
      } else {
        pr = std::get<AdcParams>(model).r;
        ps = std::get<AdcParams>(model).s;
      }
      const double rf = zcb_price_cir(pr, pr.x0, tenors[j]);
      table << "," << rf;
      if (univariate) {
        table << ",";
      } else {
        table << "," << rf * zcb_price_cir(ps, ps.x0, tenors[j]);
      }
    }
    if (want_mc) {
      table << "," << mc.risk_free[j].value << "," << mc.risk_free[j].std_error;
      if (univariate) {
        table << ",,";
      } else {
        table << "," << mc.risky[j].value << "," << mc.risky[j].std_error;
      }
    }
    table << "\n";
  }

  if (out_path.empty()) {
    for (const std::string& line : ctx.header_lines()) std::cout << "# " << line << "\n";
    std::cout << table.str();
  } else {
    auto out = open_out(out_path);
    for (const std::string& line : ctx.header_lines()) out << "# " << line << "\n";
    out << table.str();
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_curve(const std::string& quotes_path, const std::string& out_path,
              const std::string& spread_vs, const std::string& spread_out,
              std::uint64_t seed) {
  RunContext ctx;
  ctx.seed = seed;
  ctx.set("command", std::string("curve"));
  ctx.set("quotes", quotes_path);
  ctx.set("out", out_path);
  if (!spread_vs.empty()) ctx.set("spread_vs", spread_vs);
  ctx.log();

  std::ifstream in(quotes_path);
  if (!in) throw std::runtime_error("cannot open quotes file: " + quotes_path);
  const QuoteSet quotes = read_quotes_csv(in);
  const YieldCurve curve = build_curve(quotes);
  {
    auto out = open_out(out_path);
    write_curve_csv(curve, out, ctx.header_lines());
  }
  std::cout << "wrote " << out_path << "\n";

  if (!spread_vs.empty()) {
    if (spread_out.empty()) {
      throw std::invalid_argument("curve: --spread-vs requires --spread-out");
    }
    std::ifstream base_in(spread_vs);
    if (!base_in) throw std::runtime_error("cannot open curve file: " + spread_vs);
    const YieldCurve base = read_curve_csv(base_in);
    const std::vector<double> s = spread_curve(curve, base);
    auto out = open_out(spread_out);
    write_spread_csv(curve.tenors(), s, out, ctx.header_lines());
    std::cout << "wrote " << spread_out << "\n";
  }
  return 0;
}

int cmd_calibrate(const std::string& model_kind, const std::string& german_path,
                  const std::string& italian_path, const std::string& config_path,
                  std::uint64_t seed_override, bool seed_given,
                  const fs::path& out_dir) {
  CalibrationConfig cfg;
  if (!config_path.empty()) {
    cfg = CalibrationConfig::from_key_values(read_key_value_file(config_path));
  }
  if (seed_given) {
    cfg.seed = seed_override;
    cfg.mc_cfg.seed = seed_override;
  }

  RunContext ctx;
  ctx.seed = cfg.seed;
  ctx.set("command", std::string("calibrate"));
  ctx.set("model", model_kind);
  ctx.set("german", german_path);
  ctx.set("italian", italian_path);
  ctx.set("config", config_path.empty() ? std::string("<defaults>") : config_path);
  ctx.set("seed", static_cast<std::int64_t>(cfg.seed));
  ctx.set("mc.step_h", cfg.mc_cfg.step_h);
  ctx.set("mc.n_paths", cfg.mc_cfg.n_paths);
  ctx.set("mc.seed", static_cast<std::int64_t>(cfg.mc_cfg.seed));
  ctx.set("sa.max_evaluations", static_cast<std::int64_t>(cfg.sa.max_evaluations));
  ctx.log();

  auto load_curve = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open quotes file: " + path);
    return build_curve(read_quotes_csv(in));
  };
  const YieldCurve de = load_curve(german_path);
  const YieldCurve it = load_curve(italian_path);

  CalibrationReport report;
  if (model_kind == "model1") {
    report = calibrate_model1(de, it, cfg);
  } else if (model_kind == "adc") {
    report = calibrate_model2(de, it, cfg);
  } else {
    throw std::invalid_argument("calibrate: model must be model1 or adc");
  }

  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "report.txt");
    for (const std::string& line : ctx.header_lines()) out << "# " << line << "\n";
    write_report_text(report, out);
  }
  {
    auto out = open_out(out_dir / "fitted_params.csv");
    write_fitted_params_csv(report, out, ctx.header_lines());
  }
  {
    auto out = open_out(out_dir / "residuals.csv");
    write_residuals_csv(report, out, ctx.header_lines());
  }
  std::cout << "objective=" << report.objective
            << " evaluations=" << report.evaluations
            << " converged=" << (report.converged ? 1 : 0) << "\n";
  return 0;
}

int cmd_report(const std::string& params1_path, const std::string& params2_path,
               double t, SimConfig cfg, const fs::path& out_dir) {
  RunContext ctx;
  ctx.seed = cfg.seed;
  ctx.set("command", std::string("report"));
  ctx.set("t", t);
  ctx.set("n_paths", cfg.n_paths);
  ctx.set("step_h", cfg.step_h);
  ctx.set("seed", static_cast<std::int64_t>(cfg.seed));
  const SimModel model1 = load_model("model1", params1_path, ctx);
  const SimModel model2 = load_model("adc", params2_path, ctx);
  ctx.log();

  cfg.horizon = t;
  const std::vector<StateVector> term2 = terminal_states(model2, cfg);
  const std::vector<StateVector> term1 = terminal_states(model1, cfg);

  auto split = [](const std::vector<StateVector>& v) {
    std::pair<std::vector<double>, std::vector<double>> out;
    out.first.reserve(v.size());
    out.second.reserve(v.size());
    for (const StateVector& x : v) {
      out.first.push_back(x.r);
      out.second.push_back(x.s);
    }
    return out;
  };
  const auto [r2, s2] = split(term2);
  const auto [r1, s1] = split(term1);

  // common grid from the correlated model's sample
  const Histogram2D h2 = histogram2d_fd(r2, s2);
  const Histogram2D h1 = histogram2d_fixed(r1, s1, h2.r_edges, h2.s_edges);
  Histogram2D diff = h2;
  for (std::size_t i = 0; i < diff.mass.size(); ++i) diff.mass[i] -= h1.mass[i];

  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "joint_model2.csv");
    write_histogram_csv(h2, out, ctx.header_lines());
  }
  {
    auto out = open_out(out_dir / "joint_model1.csv");
    write_histogram_csv(h1, out, ctx.header_lines());
  }
  {
    auto out = open_out(out_dir / "joint_diff.csv");
    write_histogram_csv(diff, out, ctx.header_lines());
  }
  std::cout << "wrote joint_model2.csv joint_model1.csv joint_diff.csv in "
            << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verification suites

struct SuiteOutcome {
  int failures = 0;
  void line(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    if (!pass) ++failures;
  }
};

void verify_stationarity(SuiteOutcome& out, std::uint64_t seed, std::int64_t n) {
  const CirParams p = table1_model1_riskfree();
  RandomStream rng = RandomStream::keyed(seed, 0x57A7ull);
  std::vector<double> draws(static_cast<std::size_t>(n));
  for (auto& d : draws) d = sample_exact(p, p.x0, 200.0, rng);
  const KsResult ks = ks_test(draws, [&](double x) { return stationary_cdf(p, x); });
  std::ostringstream detail;
  detail << "exact sampler t=200y n=" << n << " KS=" << ks.distance
         << " crit(1%)=" << ks.critical_value;
  out.line("stationarity", ks.pass(), detail.str());
}

void verify_reversibility(SuiteOutcome& out, std::uint64_t seed) {
  RandomStream rng = RandomStream::keyed(seed, 0x4E5Aull);
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
    worst = std::max(worst, reversibility_defect(p));
  }
  std::ostringstream detail;
  detail << "10 admissible parameter sets, max |int f Lg - int g Lf| dpi = " << worst;
  out.line("reversibility", worst < 1e-5, detail.str());
}

void verify_feller(SuiteOutcome& out, double nu, std::uint64_t seed,
                   std::int64_t n, double h) {
  // nu < 1: a boundary-adjacent start makes hits frequent within 5y.
  // nu >= 1: the fitted risk-free scale started at the long-run level,
  // where the origin must never be flagged over 30y.
  CirParams p;
  if (nu < 1.0) {
    p.kappa = 0.125;
    p.theta = 0.02;
    p.x0 = 0.005;
  } else {
    p.kappa = 0.0398;
    p.theta = 0.0544;
    p.x0 = p.theta;
  }
  p.sigma = std::sqrt(2.0 * p.kappa * p.theta / nu);
  SimConfig cfg{h, n, nu < 1.0 ? 5.0 : 30.0, seed, 1e-6};
  const HitEstimate est = hitting_probability(SimModel{UnivariateModel{p}}, cfg);
  std::ostringstream detail;
  detail << "nu=" << nu << " hits=" << est.hits << "/" << est.n_paths
         << " p=" << est.probability << " se=" << est.std_error;
  const bool pass = nu < 1.0 ? est.probability > 3.0 * est.std_error
                             : est.hits == 0;
  out.line("feller", pass, detail.str());
}

void verify_feller2d(SuiteOutcome& out, std::uint64_t seed, std::int64_t n) {
  // independent factors, exact per-factor transition sampling on the grid
  const double kappa = 0.5, theta = 0.02, x0 = 0.005;
  const double dt = 1e-3, horizon = 5.0, delta = 1e-9;
  const long steps = static_cast<long>(horizon / dt);
  for (double nu : {0.55, 0.3}) {
    const double sigma = std::sqrt(2.0 * kappa * theta / nu);
    const CirParams f{kappa, theta, sigma, x0};
    std::int64_t joint = 0, axis = 0;
    for (std::int64_t path = 0; path < n; ++path) {
      RandomStream rng_r = RandomStream::keyed(seed, static_cast<std::uint64_t>(path), 0);
      RandomStream rng_s = RandomStream::keyed(seed, static_cast<std::uint64_t>(path), 1);
      double r = x0, s = x0;
      bool hit_joint = false, hit_axis = false;
      for (long k = 0; k < steps; ++k) {
        r = sample_exact(f, r, dt, rng_r);
        s = sample_exact(f, s, dt, rng_s);
        if (r < delta || s < delta) hit_axis = true;
        if (r < delta && s < delta) hit_joint = true;
      }
      joint += hit_joint;
      axis += hit_axis;
    }
    const double pj = static_cast<double>(joint) / static_cast<double>(n);
    const double se = std::sqrt(std::max(pj * (1.0 - pj), 1.0 / static_cast<double>(n)) /
                                static_cast<double>(n));
    std::ostringstream detail;
    detail << "nu_sum=" << 2.0 * nu << " joint=" << joint << "/" << n
           << " axis_fraction=" << static_cast<double>(axis) / static_cast<double>(n)
           << " delta=" << delta;
    const bool pass = (2.0 * nu >= 1.0) ? (pj <= 3.0 * se && axis > 0)
                                        : (pj > 3.0 * se);
    out.line("feller2d", pass, detail.str());
  }
}

void verify_mc_closed_form(SuiteOutcome& out, std::uint64_t seed,
                           std::int64_t n_paths) {
  const CirParams pr = table1_model1_riskfree();
  const CirParams ps = table1_model1_spread();
  const SimModel model{AdcParams::independent(pr, ps)};
  SimConfig cfg{0.004, n_paths, 30.0, seed, 1e-6};
  std::vector<double> tenors;
  for (int t = 1; t <= 30; ++t) tenors.push_back(t);
  const McCurvePair mc = price_zcb_mc_curve_both(model, cfg, tenors);
  double worst_bp = 0.0;
  for (std::size_t j = 0; j < tenors.size(); ++j) {
    const double tau = tenors[j];
    const double rf = zero_rate(mc.risk_free[j].value, tau) -
                      zero_rate(zcb_price_model1(pr, ps, pr.x0, ps.x0, tau,
                                                 Leg::risk_free), tau);
    const double ry = zero_rate(mc.risky[j].value, tau) -
                      zero_rate(zcb_price_model1(pr, ps, pr.x0, ps.x0, tau,
                                                 Leg::risky), tau);
    worst_bp = std::max({worst_bp, std::fabs(rf) * 1e4, std::fabs(ry) * 1e4});
  }
  std::ostringstream detail;
  detail << "degenerate model, h=0.004 N=" << n_paths
         << ", max |zero-rate diff| = " << worst_bp << " bp";
  out.line("mc-closed-form", worst_bp <= 5.0, detail.str());
}

void verify_comparison(SuiteOutcome& out, std::uint64_t seed, std::int64_t n) {
  const CirParams f1{0.5, 0.09, 0.3, 0.05};  // nu = 1
  const CirParams f2{0.5, 0.04, 0.2, 0.03};  // nu = 1
  SimConfig cfg{0.001, n, 2.0, seed, 1e-6};
  const ComparisonReport rep = comparison_sum_check({f1, f2}, cfg);
  std::ostringstream detail;
  detail << "equal-kappa sum vs univariate law at t=2: KS=" << rep.ks_distance
         << " crit(1%)=" << rep.ks_critical;
  out.line("comparison", rep.pass(), detail.str());
}

int cmd_verify(const std::string& suite, double nu, std::int64_t paths,
               std::uint64_t seed, double h) {
  RunContext ctx;
  ctx.seed = seed;
  ctx.set("command", std::string("verify"));
  ctx.set("suite", suite);
  ctx.set("nu", nu);
  ctx.set("paths", paths);
  ctx.set("h", h);
  ctx.set("seed", static_cast<std::int64_t>(seed));
  ctx.log();

  SuiteOutcome out;
  const bool all = suite == "all";
  if (all || suite == "stationarity") verify_stationarity(out, seed, paths);
  if (all || suite == "reversibility") verify_reversibility(out, seed);
  if (all || suite == "feller") verify_feller(out, nu, seed, paths / 10, h);
  if (all || suite == "feller2d") verify_feller2d(out, seed, paths / 10);
  if (all || suite == "mc-closed-form") verify_mc_closed_form(out, seed, 5000);
  if (all || suite == "comparison") verify_comparison(out, seed, paths);
  if (!all && out.failures == 0 &&
      suite != "stationarity" && suite != "reversibility" && suite != "feller" &&
      suite != "feller2d" && suite != "mc-closed-form" && suite != "comparison") {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  return out.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"univariate and correlated square-root rate models: "
               "simulation, pricing, curves, calibration, verification"};
  app.require_subcommand(1);

  std::string model_kind = "model1";
  std::string params_path, quotes_path, out_path, out_dir = ".";
  std::string tenors_text = "1..30", method = "both", hist_times;
  std::string german_path, italian_path, config_path;
  std::string spread_vs, spread_out, suite = "all";
  std::string params1_path, params2_path;
  bool joint = false;
  double nu = 0.5, t_report = 30.0, h = 0.004, horizon = 5.0, delta = 1e-6;
  std::int64_t paths = 5000;
  std::uint64_t seed = default_seed();
  bool seed_given = false;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed (default from ADCIR_SEED)")
        ->each([&](const std::string&) { seed_given = true; });
  };

  CLI::App* sim = app.add_subcommand("simulate", "simulate paths and histograms");
  sim->add_option("--model", model_kind, "cir | model1 | adc")->required();
  sim->add_option("--params", params_path, "model parameter file")->required();
  sim->add_option("--step", h, "time step (years)");
  sim->add_option("--paths", paths, "number of paths");
  sim->add_option("--horizon", horizon, "horizon (years)");
  sim->add_option("--delta", delta, "boundary hit threshold");
  sim->add_option("--hist-times", hist_times, "comma list or a..b of histogram times");
  sim->add_flag("--joint", joint, "also write joint 2-D histograms");
  sim->add_option("--out-dir", out_dir, "output directory");
  add_seed(sim);

  CLI::App* price = app.add_subcommand("price", "zero-coupon price tables");
  price->add_option("--model", model_kind, "cir | model1 | adc")->required();
  price->add_option("--params", params_path, "model parameter file")->required();
  price->add_option("--tenors", tenors_text, "tenor list or a..b (years)");
  price->add_option("--method", method, "closed | mc | both");
  price->add_option("--step", h, "time step for mc");
  price->add_option("--paths", paths, "paths for mc");
  price->add_option("--out", out_path, "output csv (stdout if omitted)");
  add_seed(price);

  CLI::App* curve = app.add_subcommand("curve", "build zero curves from quotes");
  curve->add_option("--quotes", quotes_path, "quotes csv")->required();
  curve->add_option("--out", out_path, "curve csv")->required();
  curve->add_option("--spread-vs", spread_vs, "reference curve csv for a spread");
  curve->add_option("--spread-out", spread_out, "spread csv output");
  add_seed(curve);

  CLI::App* cal = app.add_subcommand("calibrate", "fit model parameters to curves");
  cal->add_option("--model", model_kind, "model1 | adc")->required();
  cal->add_option("--german", german_path, "risk-free quotes csv")->required();
  cal->add_option("--italian", italian_path, "risky quotes csv")->required();
  cal->add_option("--config", config_path, "calibration key-value config");
  cal->add_option("--out-dir", out_dir, "output directory");
  add_seed(cal);

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suite,
                     "stationarity | reversibility | feller | feller2d | "
                     "mc-closed-form | comparison | all");
  verify->add_option("--nu", nu, "shape parameter for the feller suite");
  verify->add_option("--paths", paths, "sample/path count scale");
  verify->add_option("--step", h, "time step for the feller suite");
  add_seed(verify);

  CLI::App* report = app.add_subcommand("report", "joint density grids");
  report->add_option("--params-model1", params1_path, "model-1 parameter file")
      ->required();
  report->add_option("--params-model2", params2_path, "correlated parameter file")
      ->required();
  report->add_option("--t", t_report, "evaluation time (years)");
  report->add_option("--step", h, "time step");
  report->add_option("--paths", paths, "number of paths");
  report->add_option("--out-dir", out_dir, "output directory");
  add_seed(report);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return cmd_simulate(model_kind, params_path,
                          SimConfig{h, paths, horizon, seed, delta}, hist_times,
                          joint, out_dir);
    }
    if (price->parsed()) {
      return cmd_price(model_kind, params_path, tenors_text, method,
                       SimConfig{h, paths, 30.0, seed, 1e-6}, out_path);
    }
    if (curve->parsed()) {
      return cmd_curve(quotes_path, out_path, spread_vs, spread_out, seed);
    }
    if (cal->parsed()) {
      return cmd_calibrate(model_kind, german_path, italian_path, config_path,
                           seed, seed_given, out_dir);
    }
    if (verify->parsed()) {
      const double feller_h = verify->count("--step") ? h : 1e-3;
      const std::int64_t n = verify->count("--paths") ? paths : 100000;
      return cmd_verify(suite, nu, n, seed, feller_h);
    }
    if (report->parsed()) {
      return cmd_report(params1_path, params2_path, t_report,
                        SimConfig{h, paths, t_report, seed, 1e-6}, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "adcir-error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
