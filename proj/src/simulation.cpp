#include "derivreg/simulation.hpp"

#include "derivreg/estimators.hpp"
#include "derivreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace derivreg {

void
CobbDouglasConfig::validate() const
{
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("c1, c2 and c must be positive");
  }
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("sigma must be non-negative");
  }
  if (!(std::abs(rho) <= 1.0)) {
    throw std::invalid_argument("rho must lie in [-1, 1]");
  }
  if (n == 0) {
    throw std::invalid_argument("n >= 1 required");
  }
  if (random_r && !(r_low > 0.0 && r_high >= r_low)) {
    throw std::invalid_argument("r range must satisfy 0 < r_low <= r_high");
  }
}

double
CobbDouglasConfig::c_tilde() const
{
  const double sum = c1 + c2;
  return (std::pow(c1 / c2, c2 / sum) + std::pow(c1 / c2, -c1 / sum)) *
         std::pow(c, -1.0 / sum);
}

double
CobbDouglasConfig::average_cost(double q, double s, double r) const
{
  const double sum = c1 + c2;
  return r * c_tilde() * std::pow(q, (1.0 - sum) / sum) * std::pow(s, c2 / sum);
}

double
CobbDouglasConfig::average_labor(double q, double s) const
{
  const double sum = c1 + c2;
  return (c2 / sum) * c_tilde() * std::pow(q, (1.0 - sum) / sum) *
         std::pow(s, -c1 / sum);
}

namespace {

DataSet
unit_dataset(const CobbDouglasSample& smp, DerivIndex deriv, bool labor)
{
  const std::size_t n = smp.size();
  std::vector<double> pts(2 * n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[2 * i] = std::clamp(smp.q[i] - 0.5, 0.0, 1.0);
    pts[2 * i + 1] = std::clamp(smp.s[i] - 0.5, 0.0, 1.0);
    y[i] = labor ? smp.y_al[i] : smp.y_ac[i] / smp.r[i];
  }
  return DataSet(deriv, std::move(pts), std::move(y));
}

} // namespace

DataSet
CobbDouglasSample::ac_dataset() const
{
  return unit_dataset(*this, DerivIndex(2, 0b00), false);
}

DataSet
CobbDouglasSample::al_dataset() const
{
  return unit_dataset(*this, DerivIndex(2, 0b10), true);
}

CobbDouglasSample
generate(const CobbDouglasConfig& cfg, std::uint64_t replication)
{
  cfg.validate();
  RngStream design = split_stream(cfg.seed, { replication, 0 });
  RngStream z1s = split_stream(cfg.seed, { replication, 1 });
  RngStream z2s = split_stream(cfg.seed, { replication, 2 });
  const std::size_t n = cfg.n;
  CobbDouglasSample smp;
  smp.q.resize(n);
  smp.s.resize(n);
  smp.r.resize(n);
  smp.y_ac.resize(n);
  smp.y_al.resize(n);
  smp.ac.resize(n);
  smp.al.resize(n);
  const double tail = std::sqrt(std::max(0.0, 1.0 - cfg.rho * cfg.rho));
  for (std::size_t i = 0; i < n; ++i) {
    smp.q[i] = design.uniform(0.5, 1.5);
    smp.s[i] = design.uniform(0.5, 1.5);
    smp.r[i] = cfg.random_r ? design.uniform(cfg.r_low, cfg.r_high) : 1.0;
    const double z1 = z1s.normal();
    const double z2 = z2s.normal();
    smp.ac[i] = cfg.average_cost(smp.q[i], smp.s[i], smp.r[i]);
    smp.al[i] = cfg.average_labor(smp.q[i], smp.s[i]);
    smp.y_ac[i] = smp.ac[i] + cfg.sigma * z1;
    smp.y_al[i] = smp.al[i] + cfg.sigma * (cfg.rho * z1 + tail * z2);
  }
  return smp;
}

// ---------------------------------------------------------------------------

BoxcarAcEstimator::BoxcarAcEstimator(const CobbDouglasSample& sample, double h)
  : sample_(sample)
  , h_(h)
{
  if (!(h > 0.0)) {
    throw std::invalid_argument("boxcar bandwidth must be positive");
  }
  if (sample.size() == 0) {
    throw std::invalid_argument("boxcar estimator needs n >= 1");
  }
  const std::size_t n = sample.size();
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{ 0 });
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return sample.q[a] < sample.q[b]; });
  q_sorted_.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    q_sorted_[r] = sample.q[order_[r]];
  }
  resid_prefix_.assign(n + 1, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = order_[r];
    const double ga = g_a(sample.q[j], sample.s[j], sample.r[j]);
    resid_prefix_[r + 1] = resid_prefix_[r] + (sample.y_ac[j] - ga) / sample.r[j];
  }
}

std::pair<std::size_t, std::size_t>
BoxcarAcEstimator::window(double q) const
{
  const double half = h_ / 2.0;
  // Same predicate as |Q_j − q| ≤ h/2 evaluated directly.
  const auto lo = std::partition_point(q_sorted_.begin(), q_sorted_.end(), [&](double v) {
    return v < q && std::abs(v - q) > half;
  });
  const auto hi = std::partition_point(lo, q_sorted_.end(), [&](double v) {
    return !(v > q && std::abs(v - q) > half);
  });
  if (lo == hi) {
    throw DomainError("boxcar window around Q=" + format_double(q) +
                      " is empty; increase h");
  }
  return { static_cast<std::size_t>(lo - q_sorted_.begin()),
           static_cast<std::size_t>(hi - q_sorted_.begin()) };
}

double
BoxcarAcEstimator::g_a(double q, double s, double r) const
{
  const auto [lo, hi] = window(q);
  double sum = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    const std::size_t j = order_[k];
    if (sample_.s[j] <= s) {
      sum += sample_.y_al[j];
    }
  }
  return r * sum / (static_cast<double>(sample_.size()) * h_);
}

double
BoxcarAcEstimator::g_b(double q, double r) const
{
  const auto [lo, hi] = window(q);
  const double sum = resid_prefix_[hi] - resid_prefix_[lo];
  return r * sum / (static_cast<double>(sample_.size()) * h_);
}

std::vector<double>
BoxcarAcEstimator::in_sample() const
{
  std::vector<double> out(sample_.size());
  for (std::size_t i = 0; i < sample_.size(); ++i) {
    out[i] = estimate(sample_.q[i], sample_.s[i], sample_.r[i]);
  }
  return out;
}

double
deriv_ac_estimator(const CobbDouglasSample& sample, double q, double s, double r,
                   double h)
{
  return BoxcarAcEstimator(sample, h).estimate(q, s, r);
}

double
boxcar_reference(const CobbDouglasSample& sample, double q, double s, double r, double h)
{
  if (!(h > 0.0)) {
    throw std::invalid_argument("boxcar bandwidth must be positive");
  }
  const double half = h / 2.0;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t j = 0; j < sample.size(); ++j) {
    if (std::abs(sample.q[j] - q) <= half && std::abs(sample.s[j] - s) <= half) {
      sum += sample.y_ac[j] / sample.r[j];
      ++hits;
    }
  }
  if (hits == 0) {
    throw DomainError("bivariate boxcar window is empty; increase h");
  }
  return r * sum / (static_cast<double>(sample.size()) * h * h);
}

std::vector<double>
boxcar_reference_in_sample(const CobbDouglasSample& sample, double h)
{
  const std::size_t n = sample.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sample.q[a] < sample.q[b]; });
  std::vector<double> qs(n);
  for (std::size_t r = 0; r < n; ++r) {
    qs[r] = sample.q[order[r]];
  }
  const double half = h / 2.0;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = sample.q[i];
    const auto lo = std::partition_point(qs.begin(), qs.end(), [&](double v) {
      return v < q && std::abs(v - q) > half;
    });
    double sum = 0.0;
    for (auto it = lo; it != qs.end(); ++it) {
      if (*it > q && std::abs(*it - q) > half) {
        break;
      }
      const std::size_t j = order[static_cast<std::size_t>(it - qs.begin())];
      if (std::abs(sample.s[j] - sample.s[i]) <= half) {
        sum += sample.y_ac[j] / sample.r[j];
      }
    }
    out[i] = sample.r[i] * sum / (static_cast<double>(n) * h * h);
  }
  return out;
}

// ---------------------------------------------------------------------------

void
Table1Config::validate() const
{
  model.validate();
  if (ns.empty() || rhos.empty()) {
    throw std::invalid_argument("table grid needs at least one n and one rho");
  }
  for (auto n : ns) {
    if (n < 2) {
      throw std::invalid_argument("table grid sample sizes must be >= 2");
    }
  }
  for (double r : rhos) {
    if (!(std::abs(r) <= 1.0)) {
      throw std::invalid_argument("rho must lie in [-1, 1]");
    }
  }
  if (reps == 0) {
    throw std::invalid_argument("reps >= 1 required");
  }
  if (!(h_constant > 0.0) || !(baseline_constant > 0.0) || h_denominator < 1 ||
      baseline_denominator < 1) {
    throw std::invalid_argument("bandwidth rules need positive constants and denominators");
  }
  if (!(trim_low < trim_high)) {
    throw std::invalid_argument("trim bounds must satisfy low < high");
  }
}

RatioEstimate
ratio_of_means(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("ratio_of_means needs equal, non-empty samples");
  }
  const double m = static_cast<double>(a.size());
  RatioEstimate out;
  out.numerator = std::accumulate(a.begin(), a.end(), 0.0) / m;
  out.denominator = std::accumulate(b.begin(), b.end(), 0.0) / m;
  out.ratio = out.numerator / out.denominator;
  if (a.size() > 1) {
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double da = a[i] - out.numerator;
      const double db = b[i] - out.denominator;
      saa += da * da;
      sbb += db * db;
      sab += da * db;
    }
    saa /= m - 1.0;
    sbb /= m - 1.0;
    sab /= m - 1.0;
    const double r = out.ratio;
    const double var = (saa - 2.0 * r * sab + r * r * sbb) /
                       (m * out.denominator * out.denominator);
    out.se = std::sqrt(std::max(0.0, var));
  }
  return out;
}

McResult
run_table1(const Table1Config& cfg)
{
  cfg.validate();
  McResult result;
  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
    const std::size_t n = cfg.ns[ni];
    const double h = cfg.h_constant * std::pow(static_cast<double>(n), -1.0 / cfg.h_denominator);
    const double hb = cfg.baseline_constant *
                      std::pow(static_cast<double>(n), -1.0 / cfg.baseline_denominator);
    for (double rho : cfg.rhos) {
      CobbDouglasConfig model = cfg.model;
      model.n = n;
      model.rho = rho;
      model.seed = cfg.seed;
      std::vector<double> md(cfg.reps);
      std::vector<double> mb(cfg.reps);
      parallel_for(cfg.reps, cfg.workers, [&](std::size_t rep) {
        // Replication streams are keyed by (n index, rep) so a cell does not
        // depend on which other cells are in the grid; rho only enters the
        // error combination.
        const CobbDouglasSample smp = generate(model, (ni << 32) | rep);
        const std::vector<double> est = BoxcarAcEstimator(smp, h).in_sample();
        const std::vector<double> base = boxcar_reference_in_sample(smp, hb);
        double sd = 0.0, sb = 0.0;
        std::size_t used = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (smp.q[i] < cfg.trim_low || smp.q[i] > cfg.trim_high ||
              smp.s[i] < cfg.trim_low || smp.s[i] > cfg.trim_high) {
            continue;
          }
          sd += (est[i] - smp.ac[i]) * (est[i] - smp.ac[i]);
          sb += (base[i] - smp.ac[i]) * (base[i] - smp.ac[i]);
          ++used;
        }
        if (used == 0) {
          throw DomainError("no sample points inside the trim region at n=" +
                            std::to_string(n));
        }
        md[rep] = sd / static_cast<double>(used);
        mb[rep] = sb / static_cast<double>(used);
      });
      const RatioEstimate re = ratio_of_means(md, mb);
      result.cells.push_back({ n, rho, re.numerator, re.denominator, re.ratio, cfg.reps,
                               re.se });
      if (cfg.keep_replications) {
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
          result.replications.push_back({ n, rho, rep, md[rep], mb[rep] });
        }
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

void
RateConfig::validate() const
{
  if (k < 1 || p < 0 || p > k) {
    throw std::invalid_argument("rate experiment needs 0 <= p <= k, k >= 1");
  }
  if (ns.size() < 4) {
    throw std::invalid_argument("rate experiment needs at least 4 sample sizes");
  }
  const auto [mn, mx] = std::minmax_element(ns.begin(), ns.end());
  if (*mn == 0 || static_cast<double>(*mx) < 10.0 * static_cast<double>(*mn)) {
    throw std::invalid_argument("rate experiment sample sizes must span at least a decade");
  }
  if (reps < 2) {
    throw std::invalid_argument("rate experiment needs reps >= 2");
  }
  if (!(sigma >= 0.0) || !(h_constant > 0.0) || grid_per_axis == 0) {
    throw std::invalid_argument("invalid rate experiment settings");
  }
}

TestFunction
rate_test_function(int k)
{
  std::vector<double> c(k);
  for (int i = 0; i < k; ++i) {
    c[i] = 0.9 - 0.2 * i;
  }
  return TestFunction(
    k,
    [c](const DerivIndex& a, std::span<const double> x) {
      double theta = 1.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        theta += c[i] * x[i];
      }
      double scale = 1.0;
      for (int i : a.coords()) {
        scale *= c[i];
      }
      return scale * std::sin(theta + a.order() * std::numbers::pi / 2.0);
    },
    "sin_linear");
}

namespace {

DataSet
draw_dataset(const TestFunction& g, const DerivIndex& deriv, std::size_t n, double sigma,
             RngStream& rng)
{
  const int k = g.dim();
  std::vector<double> pts(n * k);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) {
      pts[i * k + c] = rng.uniform();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = g.derivative(deriv, std::span<const double>(pts.data() + i * k, k)) +
           sigma * rng.normal();
  }
  return DataSet(deriv, std::move(pts), std::move(y));
}

double
rate_bandwidth(const RateConfig& cfg, std::size_t n)
{
  if (cfg.p == cfg.k) {
    return 0.0;
  }
  const int free_dims = cfg.k - cfg.p;
  return cfg.h_constant * std::pow(static_cast<double>(n), -1.0 / (2.0 * cfg.d + free_dims));
}

} // namespace

RateResult
rate_experiment(const RateConfig& cfg)
{
  cfg.validate();
  const TestFunction g = rate_test_function(cfg.k);
  const DerivIndex coords(cfg.k, (1u << cfg.p) - 1u);

  RateResult out;
  double h_max = 0.0;
  for (auto n : cfg.ns) {
    h_max = std::max(h_max, rate_bandwidth(cfg, n));
  }
  out.grid_offset = std::max(h_max, 0.05);
  if (out.grid_offset >= 0.5) {
    throw std::invalid_argument("bandwidth at the smallest n leaves no interior grid");
  }
  const auto grid = make_grid(cfg.k, cfg.grid_per_axis, out.grid_offset);
  std::vector<double> truth(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    truth[i] = g(grid[i]);
  }
  out.expected_slope = cfg.p == cfg.k ? -1.0
                                      : -2.0 * cfg.d / (2.0 * cfg.d + cfg.k - cfg.p);

  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
    const std::size_t n = cfg.ns[ni];
    std::vector<double> mse(cfg.reps);
    parallel_for(cfg.reps, cfg.workers, [&](std::size_t rep) {
      std::vector<DataSet> data;
      for (const auto& beta : subsets_of(coords)) {
        RngStream rng = split_stream(cfg.seed, { ni, rep, beta.bits() });
        data.push_back(draw_dataset(g, beta, n, cfg.sigma, rng));
      }
      std::vector<double> fitted(grid.size());
      if (cfg.p == 0) {
        const double h = rate_bandwidth(cfg, n);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          fitted[i] = baseline_full_smoother(data[0], grid[i], h, cfg.d);
        }
      } else {
        EstimatorOptions opts;
        // No coordinate is smoothed when p = k, so the order is irrelevant
        // there and the default passes the gate.
        opts.d = cfg.p == cfg.k ? 0 : cfg.d;
        opts.h_constant = cfg.h_constant;
        opts.estimate_density = false;
        const EstimationPlan plan(cfg.k, coords, 0, std::move(data), opts);
        fitted = fit(plan, grid).values;
      }
      double s = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        s += (fitted[i] - truth[i]) * (fitted[i] - truth[i]);
      }
      mse[rep] = s / static_cast<double>(grid.size());
    });
    RatePoint pt;
    pt.n = n;
    pt.bandwidth = rate_bandwidth(cfg, n);
    const double m = static_cast<double>(cfg.reps);
    pt.mse = std::accumulate(mse.begin(), mse.end(), 0.0) / m;
    double var = 0.0;
    for (double v : mse) {
      var += (v - pt.mse) * (v - pt.mse);
    }
    pt.mse_se = std::sqrt(var / (m - 1.0) / m);
    out.points.push_back(pt);
  }

  // OLS of log MSE on log n; the slope SE propagates the per-point MC error
  // of log MSE (≈ se/mse) through the OLS weights.
  const std::size_t m = out.points.size();
  double xbar = 0.0, ybar = 0.0;
  for (const auto& pt : out.points) {
    xbar += std::log(static_cast<double>(pt.n));
    ybar += std::log(pt.mse);
  }
  xbar /= static_cast<double>(m);
  ybar /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& pt : out.points) {
    const double dx = std::log(static_cast<double>(pt.n)) - xbar;
    sxx += dx * dx;
    sxy += dx * (std::log(pt.mse) - ybar);
  }
  out.slope = sxy / sxx;
  double var = 0.0;
  for (const auto& pt : out.points) {
    const double w = (std::log(static_cast<double>(pt.n)) - xbar) / sxx;
    const double rel = pt.mse_se / pt.mse;
    var += w * w * rel * rel;
  }
  out.slope_se = std::sqrt(var);
  return out;
}

R2Result
r2_check(const CobbDouglasConfig& cfg, std::size_t n)
{
  if (n < 100) {
    throw std::invalid_argument("r2_check needs n >= 100");
  }
  CobbDouglasConfig c = cfg;
  c.n = n;
  const CobbDouglasSample smp = generate(c, 0);
  auto r2 = [n](const std::vector<double>& y, const std::vector<double>& truth) {
    double my = 0.0, me = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      my += y[i];
      me += y[i] - truth[i];
    }
    my /= static_cast<double>(n);
    me /= static_cast<double>(n);
    double vy = 0.0, ve = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      vy += (y[i] - my) * (y[i] - my);
      const double e = y[i] - truth[i] - me;
      ve += e * e;
    }
    return vy > 0.0 ? 1.0 - ve / vy : 1.0;
  };
  return { r2(smp.y_ac, smp.ac), r2(smp.y_al, smp.al) };
}

} // namespace derivreg
