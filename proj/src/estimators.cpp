#include "derivreg/estimators.hpp"

#include "derivreg/density.hpp"
#include "derivreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace derivreg {

namespace {

void
require_nonempty(const DataSet& data, const char* what)
{
  if (data.size() == 0) {
    throw std::invalid_argument(std::string(what) + ": empty dataset");
  }
}

void
require_dim(const DataSet& data, std::span<const double> x, const char* what)
{
  if (static_cast<int>(x.size()) != data.dim()) {
    throw std::invalid_argument(std::string(what) + ": evaluation point has dimension " +
                                std::to_string(x.size()) + ", data has " +
                                std::to_string(data.dim()));
  }
}

void
require_weights(const DataSet& data, std::span<const double> inv_density)
{
  if (!inv_density.empty() && inv_density.size() != data.size()) {
    throw std::invalid_argument("density weights do not match the dataset size");
  }
}

std::string
term_label(std::size_t index, const Term& t)
{
  std::ostringstream os;
  os << 'T' << index << '_';
  for (auto op : t.ops) {
    os << op_symbol(op);
  }
  os << "_g";
  for (int i = 0; i < t.deriv.dim(); ++i) {
    os << (t.deriv.test(i) ? '1' : '0');
  }
  return os.str();
}

} // namespace

double
estimate_psi_rootn(const DataSet& data, const DerivIndex& alpha, std::span<const double> x,
                   std::span<const double> inv_density)
{
  require_nonempty(data, "estimate_psi_rootn");
  require_dim(data, x, "estimate_psi_rootn");
  require_weights(data, inv_density);
  if (data.deriv() != alpha) {
    throw std::invalid_argument("estimate_psi_rootn: dataset carries " +
                                data.deriv().str() + ", not " + alpha.str());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double v = data.response(i) * chi_eval(alpha, data.point(i), x);
    if (!inv_density.empty()) {
      v *= inv_density[i];
    }
    sum += v;
  }
  return sum / static_cast<double>(data.size());
}

double
estimate_psi_smoothed(const DataSet& data, const DerivIndex& beta,
                      std::span<const double> x, const SmoothingSpec& spec,
                      std::span<const double> inv_density)
{
  require_nonempty(data, "estimate_psi_smoothed");
  require_dim(data, x, "estimate_psi_smoothed");
  require_weights(data, inv_density);
  const int k = data.dim();
  if (spec.p >= k) {
    throw std::invalid_argument(
      "estimate_psi_smoothed needs p < k; use estimate_psi_rootn when p = k");
  }
  if (spec.p < 0) {
    throw std::invalid_argument("estimate_psi_smoothed needs p >= 0");
  }
  if (data.deriv() != beta) {
    throw std::invalid_argument("estimate_psi_smoothed: dataset carries " +
                                data.deriv().str() + ", not " + beta.str());
  }
  for (int i = spec.p; i < k; ++i) {
    if (beta.test(i)) {
      throw std::invalid_argument("estimate_psi_smoothed: " + beta.str() +
                                  " differentiates a smoothed coordinate");
    }
  }
  if (!(spec.bandwidth > 0.0)) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  const ProductKernel kernel(spec.order, spec.edge_correction);
  const double h = spec.bandwidth;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double w = 1.0;
    for (int c = spec.p; c < k && w != 0.0; ++c) {
      w *= kernel.factor(x[c], (data.coord(i, c) - x[c]) / h, h);
    }
    if (w == 0.0) {
      continue;
    }
    double v = data.response(i) * w;
    for (int c = 0; c < spec.p; ++c) {
      if (beta.test(c)) {
        v *= chi1(data.coord(i, c), x[c]);
      }
    }
    if (!inv_density.empty()) {
      v *= inv_density[i];
    }
    sum += v;
  }
  return sum / (static_cast<double>(data.size()) * std::pow(h, k - spec.p));
}

double
baseline_full_smoother(const DataSet& data, std::span<const double> x, double bandwidth,
                       int order, bool edge_correction)
{
  require_nonempty(data, "baseline_full_smoother");
  require_dim(data, x, "baseline_full_smoother");
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  const ProductKernel kernel(order, edge_correction);
  double num = 0.0;
  double den = 0.0;
  std::size_t in_window = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double w = 1.0;
    for (int c = 0; c < data.dim() && w != 0.0; ++c) {
      w *= kernel.factor(x[c], (data.coord(i, c) - x[c]) / bandwidth, bandwidth);
    }
    if (w == 0.0) {
      continue;
    }
    ++in_window;
    num += w * data.response(i);
    den += w;
  }
  if (in_window == 0 || den == 0.0) {
    throw DomainError("baseline smoother: no kernel mass at the evaluation point; "
                      "increase the bandwidth");
  }
  return num / den;
}

double
limit_covariance(const DerivIndex& beta, std::span<const double> x1,
                 std::span<const double> x2, double sigma2,
                 const std::function<double(std::span<const double>)>& density,
                 const Quadrature& q)
{
  const int k = beta.dim();
  if (static_cast<int>(x1.size()) != k || static_cast<int>(x2.size()) != k) {
    throw std::invalid_argument("limit_covariance: dimension mismatch");
  }
  std::vector<QuadratureAxis> axes;
  for (int i = 0; i < k; ++i) {
    std::vector<double> br{ 0.0, 1.0 };
    if (beta.test(i)) {
      br = { 0.0, std::min(x1[i], x2[i]), std::max(x1[i], x2[i]), 1.0 };
    }
    axes.push_back(make_axis(q, i, br, {}));
  }
  const double integral =
    integrate_tensor(axes, std::vector<double>(k, 0.0), [&](std::span<const double> u) {
      const double v = chi_eval(beta, u, x1) * chi_eval(beta, u, x2);
      return density ? v / density(u) : v;
    });
  return sigma2 * integral;
}

double
tau_squared(const DerivIndex& beta, int p, std::span<const double> x,
            const std::function<double(std::span<const double>)>& density,
            const Quadrature& q)
{
  const int k = beta.dim();
  if (static_cast<int>(x.size()) != k || p < 0 || p > k) {
    throw std::invalid_argument("tau_squared: bad dimensions");
  }
  std::vector<QuadratureAxis> axes;
  for (int i = 0; i < p; ++i) {
    std::vector<double> br{ 0.0, 1.0 };
    if (beta.test(i)) {
      br = { 0.0, x[i], 1.0 };
    }
    axes.push_back(make_axis(q, i, br, {}));
  }
  return integrate_tensor(axes, std::vector<double>(x.begin(), x.end()),
                          [&](std::span<const double> u) {
                            const double c = chi_eval(beta, u, x);
                            return density ? c * c / density(u) : c * c;
                          });
}

double
kernel_roughness_product(int order, int dims)
{
  return std::pow(kernel_roughness(make_interior_kernel(order)), dims);
}

// ---------------------------------------------------------------------------

EstimationPlan::EstimationPlan(int k, const DerivIndex& coords, int ell,
                               std::vector<DataSet> datasets, EstimatorOptions options)
  : expr_(build_representation_plan(k, coords, ell))
  , opts_(options)
  , kernel_(2)
{
  const int p = coords.order();
  if (opts_.d == 0) {
    opts_.d = smallest_even_above((k + p) / 2.0);
  }
  if (opts_.d1 == 0) {
    opts_.d1 = smallest_even_above(k);
  }
  check_order_conditions(opts_.d, opts_.d1, k, p);
  if (!(opts_.h_constant > 0.0) || !(opts_.H_constant > 0.0)) {
    throw std::invalid_argument("bandwidth constants must be positive");
  }
  if (!(opts_.density_floor > 0.0)) {
    throw std::invalid_argument("density floor must be positive");
  }
  kernel_ = ProductKernel(opts_.d, opts_.edge_correction);

  for (auto& ds : datasets) {
    if (ds.dim() != k) {
      throw std::invalid_argument("dataset for " + ds.deriv().str() +
                                  " has dimension " + std::to_string(ds.dim()) +
                                  ", plan has k=" + std::to_string(k));
    }
    if (data_.count(ds.deriv().bits())) {
      throw std::invalid_argument("two datasets for derivative index " +
                                  ds.deriv().str());
    }
    data_.emplace(ds.deriv().bits(), ds.canonicalized());
  }
  for (const auto& d : expr_.required_derivatives()) {
    if (!data_.count(d.bits())) {
      throw std::invalid_argument("plan needs data for derivative index " + d.str() +
                                  " but none was supplied");
    }
  }

  for (const auto& d : expr_.required_derivatives()) {
    const DataSet& ds = data_.at(d.bits());
    if (!opts_.estimate_density) {
      continue;
    }
    const double H = density_bandwidth(ds.size(), opts_.d, opts_.d1, k, p,
                                       opts_.H_constant);
    const DensityEstimator est(ds, opts_.d1, H, opts_.density_floor,
                               opts_.edge_correction);
    auto f = est.floored_at_design();
    for (auto& v : f) {
      v = 1.0 / v;
    }
    inv_density_.emplace(d.bits(), std::move(f));
    density_H_.emplace(d.bits(), H);
  }

  const auto& ts = expr_.terms();
  for (std::size_t t = 0; t < ts.size(); ++t) {
    PlannedTerm pt;
    pt.term = ts[t];
    pt.label = term_label(t, ts[t]);
    pt.n = data_.at(ts[t].deriv.bits()).size();
    const int m = ts[t].smoothing_dims();
    if (m > 0) {
      pt.bandwidth = smoothing_bandwidth(opts_.d, m, opts_.h_constant)(pt.n);
    }
    terms_.push_back(std::move(pt));
  }
}

const DataSet&
EstimationPlan::dataset(const DerivIndex& deriv) const
{
  const auto it = data_.find(deriv.bits());
  if (it == data_.end()) {
    throw std::out_of_range("no dataset for derivative index " + deriv.str());
  }
  return it->second;
}

std::span<const double>
EstimationPlan::inverse_density(const DerivIndex& deriv) const
{
  const auto it = inv_density_.find(deriv.bits());
  if (it == inv_density_.end()) {
    return {};
  }
  return it->second;
}

double
EstimationPlan::density_bandwidth_for(const DerivIndex& deriv) const
{
  const auto it = density_H_.find(deriv.bits());
  return it == density_H_.end() ? 0.0 : it->second;
}

double
EstimationPlan::max_bandwidth() const
{
  double h = 0.0;
  for (const auto& t : terms_) {
    h = std::max(h, t.bandwidth);
  }
  return h;
}

double
EstimationPlan::term_value(std::size_t t, std::span<const double> x) const
{
  const PlannedTerm& pt = terms_.at(t);
  const Term& term = pt.term;
  const DataSet& ds = dataset(term.deriv);
  const auto inv = inverse_density(term.deriv);
  const int k = dim();
  if (static_cast<int>(x.size()) != k) {
    throw std::invalid_argument("evaluation point has the wrong dimension");
  }
  const double h = pt.bandwidth;
  double sum = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double w = 1.0;
    for (int c = 0; c < k && w != 0.0; ++c) {
      const double u = ds.coord(i, c);
      switch (term.ops[c]) {
        case CoordOp::free:
          w *= kernel_.factor(x[c], (u - x[c]) / h, h) / h;
          break;
        case CoordOp::mean:
          break;
        case CoordOp::lower:
          w *= u <= x[c] ? 1.0 : 0.0;
          break;
        case CoordOp::mean_lower:
          w *= 1.0 - u;
          break;
        case CoordOp::chi:
          w *= chi1(u, x[c]);
          break;
      }
    }
    if (w == 0.0) {
      continue;
    }
    double v = ds.response(i) * w;
    if (!inv.empty()) {
      v *= inv[i];
    }
    sum += v;
  }
  return static_cast<double>(term.coefficient) * sum / static_cast<double>(ds.size());
}

FitResult
fit(const EstimationPlan& plan, const std::vector<std::vector<double>>& points,
    int workers)
{
  FitResult out;
  out.points = points;
  out.values.assign(points.size(), 0.0);
  out.contributions.assign(points.size(), std::vector<double>(plan.terms().size(), 0.0));
  for (const auto& t : plan.terms()) {
    out.term_labels.push_back(t.label);
  }
  for (const auto& x : points) {
    if (static_cast<int>(x.size()) != plan.dim()) {
      throw std::invalid_argument("evaluation point has the wrong dimension");
    }
    for (double v : x) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError("evaluation point outside [0,1]^k");
      }
    }
  }
  parallel_for(points.size(), workers, [&](std::size_t g) {
    double total = 0.0;
    for (std::size_t t = 0; t < plan.terms().size(); ++t) {
      const double c = plan.term_value(t, points[g]);
      out.contributions[g][t] = c;
      total += c;
    }
    out.values[g] = total;
  });
  return out;
}

std::vector<std::vector<double>>
make_grid(int k, std::size_t per_axis, double offset)
{
  if (k < 1 || per_axis == 0) {
    throw std::invalid_argument("grid needs k >= 1 and at least one point per axis");
  }
  if (!(offset >= 0.0 && offset < 0.5)) {
    throw std::invalid_argument("grid offset must lie in [0, 0.5)");
  }
  std::vector<double> axis(per_axis);
  for (std::size_t i = 0; i < per_axis; ++i) {
    axis[i] = per_axis == 1 ? 0.5
                            : offset + (1.0 - 2.0 * offset) * static_cast<double>(i) /
                                         static_cast<double>(per_axis - 1);
  }
  std::size_t total = 1;
  for (int c = 0; c < k; ++c) {
    total *= per_axis;
  }
  std::vector<std::vector<double>> grid(total, std::vector<double>(k));
  for (std::size_t g = 0; g < total; ++g) {
    std::size_t rem = g;
    for (int c = k - 1; c >= 0; --c) {
      grid[g][c] = axis[rem % per_axis];
      rem /= per_axis;
    }
  }
  return grid;
}

} // namespace derivreg
