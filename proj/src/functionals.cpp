#include "derivreg/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace derivreg {

namespace {

void
check_point(int k, std::span<const double> x, const char* what)
{
  if (static_cast<int>(x.size()) != k) {
    throw std::invalid_argument(std::string(what) + ": point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(k));
  }
}

QuadratureAxis
axis_for(CoordOp op, int coord, double xi, const Quadrature& q)
{
  const double unit[] = { 0.0, 1.0 };
  switch (op) {
    case CoordOp::mean:
      return make_axis(q, coord, unit, {});
    case CoordOp::lower: {
      const double br[] = { 0.0, xi };
      return make_axis(q, coord, br, {});
    }
    case CoordOp::mean_lower:
      return make_axis(q, coord, unit, [](double u) { return 1.0 - u; });
    case CoordOp::chi: {
      const double br[] = { 0.0, xi, 1.0 };
      return make_axis(q, coord, br, [xi](double u) { return chi1(u, xi); });
    }
    case CoordOp::free:
      break;
  }
  throw std::logic_error("free coordinates have no quadrature axis");
}

double
integrate_ops(std::span<const CoordOp> ops, const Integrand& b,
              std::span<const double> x, const Quadrature& q)
{
  std::vector<QuadratureAxis> axes;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i] != CoordOp::free) {
      axes.push_back(axis_for(ops[i], static_cast<int>(i), x[i], q));
    }
  }
  return integrate_tensor(axes, std::vector<double>(x.begin(), x.end()), b);
}

int
sign_of(const DerivIndex& b)
{
  return b.order() % 2 == 0 ? 1 : -1;
}

} // namespace

double
chi_eval(const DerivIndex& alpha, std::span<const double> u,
         std::span<const double> x)
{
  check_point(alpha.dim(), u, "chi_eval");
  check_point(alpha.dim(), x, "chi_eval");
  double v = 1.0;
  for (int j = 0; j < alpha.dim(); ++j) {
    if (alpha.test(j)) {
      v *= chi1(u[j], x[j]);
    }
  }
  return v;
}

double
psi_apply(const DerivIndex& alpha, const DerivIndex& integrated,
          const Integrand& b, std::span<const double> x, const Quadrature& q)
{
  check_point(alpha.dim(), x, "psi_apply");
  if (!alpha.subset_of(integrated)) {
    throw std::invalid_argument("psi_apply: " + alpha.str() +
                                " flags coordinates outside " + integrated.str());
  }
  std::vector<CoordOp> ops(alpha.dim(), CoordOp::free);
  for (int i = 0; i < alpha.dim(); ++i) {
    if (alpha.test(i)) {
      ops[i] = CoordOp::chi;
    } else if (integrated.test(i)) {
      ops[i] = CoordOp::mean;
    }
  }
  return integrate_ops(ops, b, x, q);
}

double
m_apply(const DerivIndex& alpha, const Integrand& b, std::span<const double> x,
        const Quadrature& q)
{
  check_point(alpha.dim(), x, "m_apply");
  std::vector<CoordOp> ops(alpha.dim(), CoordOp::free);
  for (int i : alpha.coords()) {
    ops[i] = CoordOp::mean;
  }
  return integrate_ops(ops, b, x, q);
}

double
n_apply(const DerivIndex& alpha, const Integrand& b, std::span<const double> x,
        const Quadrature& q)
{
  check_point(alpha.dim(), x, "n_apply");
  std::vector<CoordOp> ops(alpha.dim(), CoordOp::free);
  for (int i : alpha.coords()) {
    ops[i] = CoordOp::lower;
  }
  return integrate_ops(ops, b, x, q);
}

double
partial_expansion_residual(const TestFunction& g, const DerivIndex& coords,
                           std::span<const double> x, const Quadrature& q)
{
  check_point(g.dim(), x, "partial_expansion_residual");
  double sum = 0.0;
  for (const auto& beta : subsets_of(coords)) {
    sum += psi_apply(
      beta, coords,
      [&](std::span<const double> u) { return g.derivative(beta, u); }, x, q);
  }
  return std::abs(g(x) - sum);
}

double
partial_expansion_residual(const TestFunction& g, int p, std::span<const double> x,
                           const Quadrature& q)
{
  if (p < 1 || p > g.dim()) {
    throw std::invalid_argument("partial expansion needs 1 <= p <= k");
  }
  return partial_expansion_residual(
    g, DerivIndex(g.dim(), (1u << p) - 1u), x, q);
}

double
full_expansion_residual(const TestFunction& g, std::span<const double> x,
                        const Quadrature& q)
{
  return partial_expansion_residual(g, DerivIndex::ones(g.dim()), x, q);
}

// ---------------------------------------------------------------------------

CoordOp
compose_mean(CoordOp op)
{
  switch (op) {
    case CoordOp::free:
      return CoordOp::mean;
    case CoordOp::lower:
      return CoordOp::mean_lower;
    case CoordOp::mean:
    case CoordOp::mean_lower:
    case CoordOp::chi:
      // Each already integrates the coordinate out over [0,1], leaving a
      // constant in x_i; averaging a constant changes nothing.
      return op == CoordOp::chi ? CoordOp::chi : op;
  }
  return op;
}

char
op_symbol(CoordOp op)
{
  switch (op) {
    case CoordOp::free:
      return '.';
    case CoordOp::mean:
      return 'M';
    case CoordOp::lower:
      return 'N';
    case CoordOp::mean_lower:
      return 'W';
    case CoordOp::chi:
      return 'X';
  }
  return '?';
}

DerivIndex
Term::coords_with(CoordOp op) const
{
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i] == op) {
      bits |= 1u << i;
    }
  }
  return DerivIndex(static_cast<int>(ops.size()), bits);
}

DerivIndex
Term::differentiated_coords() const
{
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i] == CoordOp::lower || ops[i] == CoordOp::mean_lower ||
        ops[i] == CoordOp::chi) {
      bits |= 1u << i;
    }
  }
  return DerivIndex(static_cast<int>(ops.size()), bits);
}

std::string
Term::str() const
{
  std::ostringstream os;
  os << (coefficient >= 0 ? "+" : "") << coefficient << " [";
  for (auto op : ops) {
    os << op_symbol(op);
  }
  os << "] g^" << deriv.str();
  return os.str();
}

TermExpr::TermExpr(int k, DerivIndex coords, int ell)
  : k_(k)
  , coords_(coords)
  , ell_(ell)
{}

void
TermExpr::add(const Term& t)
{
  if (static_cast<int>(t.ops.size()) != k_ || t.deriv.dim() != k_) {
    throw std::invalid_argument("term dimension does not match expression");
  }
  auto key_less = [](const Term& a, const Term& b) {
    if (a.deriv != b.deriv) {
      return a.deriv < b.deriv;
    }
    return a.ops < b.ops;
  };
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t, key_less);
  if (it != terms_.end() && it->deriv == t.deriv && it->ops == t.ops) {
    it->coefficient += t.coefficient;
    if (it->coefficient == 0) {
      terms_.erase(it);
    }
    return;
  }
  if (t.coefficient != 0) {
    terms_.insert(it, t);
  }
}

std::vector<DerivIndex>
TermExpr::required_derivatives() const
{
  std::vector<DerivIndex> out;
  for (const auto& t : terms_) {
    if (std::find(out.begin(), out.end(), t.deriv) == out.end()) {
      out.push_back(t.deriv);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TermExpr
TermExpr::with_flipped_sign(std::size_t i) const
{
  TermExpr copy = *this;
  if (i < copy.terms_.size()) {
    copy.terms_[i].coefficient = -copy.terms_[i].coefficient;
  }
  return copy;
}

std::string
TermExpr::str() const
{
  std::ostringstream os;
  os << "plan k=" << k_ << " P=" << coords_.str() << " ell=" << ell_ << " ("
     << terms_.size() << " terms)\n";
  for (const auto& t : terms_) {
    os << "  " << t.str() << (is_residual(t) ? "  residual" : "") << '\n';
  }
  return os.str();
}

TermExpr
build_representation_plan(int k, const DerivIndex& coords, int ell)
{
  if (coords.dim() != k) {
    throw std::invalid_argument("coordinate set dimension does not match k");
  }
  const int p = coords.order();
  if (p < 1 || p > k) {
    throw std::invalid_argument("representation plan requires 1 <= p <= k (p=" +
                                std::to_string(p) + ")");
  }
  if (ell < 0 || ell > p) {
    throw std::invalid_argument(
      "representation plan requires 0 <= ell and 1 <= p - ell + 1 <= k (p=" +
      std::to_string(p) + ", ell=" + std::to_string(ell) + ")");
  }
  TermExpr expr(k, coords, ell);

  if (ell == 0) {
    for (const auto& beta : subsets_of(coords)) {
      Term t{ 1, beta, std::vector<CoordOp>(k, CoordOp::free) };
      for (int i = 0; i < k; ++i) {
        if (beta.test(i)) {
          t.ops[i] = CoordOp::chi;
        } else if (coords.test(i)) {
          t.ops[i] = CoordOp::mean;
        }
      }
      expr.add(t);
    }
    return expr;
  }

  // Residual pool: M_β g with its accumulated coefficient, keyed by β.
  std::map<std::uint32_t, std::int64_t> pool;
  auto expand = [&](std::int64_t coef, const DerivIndex& outer) {
    const DerivIndex alpha = outer.complement_in(coords);
    for (const auto& inner : subsets_of(alpha)) {
      const std::int64_t c = coef * sign_of(inner);
      Term t{ c, alpha, std::vector<CoordOp>(k, CoordOp::free) };
      for (int i = 0; i < k; ++i) {
        if (inner.test(i)) {
          t.ops[i] = CoordOp::mean_lower;
        } else if (alpha.test(i)) {
          t.ops[i] = CoordOp::lower;
        } else if (outer.test(i)) {
          t.ops[i] = CoordOp::mean;
        }
      }
      expr.add(t);
      if (!inner.is_zero()) {
        pool[(inner | outer).bits()] -= c;
      }
    }
  };

  expand(1, DerivIndex::zeros(k));
  const int threshold = p - ell;
  while (true) {
    auto pick = pool.end();
    for (auto it = pool.begin(); it != pool.end(); ++it) {
      if (it->second == 0) {
        continue;
      }
      const int order = DerivIndex(k, it->first).order();
      if (order <= threshold &&
          (pick == pool.end() || order < DerivIndex(k, pick->first).order())) {
        pick = it;
      }
    }
    if (pick == pool.end()) {
      break;
    }
    const DerivIndex beta(k, pick->first);
    const std::int64_t coef = pick->second;
    pool.erase(pick);
    expand(coef, beta);
  }

  for (const auto& [bits, coef] : pool) {
    if (coef == 0) {
      continue;
    }
    const DerivIndex beta(k, bits);
    Term t{ coef, DerivIndex::zeros(k), std::vector<CoordOp>(k, CoordOp::free) };
    for (int i : beta.coords()) {
      t.ops[i] = CoordOp::mean;
    }
    expr.add(t);
  }
  return expr;
}

TermExpr
build_representation_plan(int k, int p, int ell)
{
  if (p < 1 || p > k) {
    throw std::invalid_argument("representation plan requires 1 <= p <= k");
  }
  return build_representation_plan(k, DerivIndex(k, (1u << p) - 1u), ell);
}

void
check_representation_structure(const TermExpr& expr)
{
  const int p = expr.coords().order();
  const int ell = expr.ell();
  for (const auto& t : expr.terms()) {
    if (t.differentiated_coords() != t.deriv) {
      throw std::logic_error("term " + t.str() +
                             ": operators disagree with derivative index");
    }
    if (!t.deriv.subset_of(expr.coords())) {
      throw std::logic_error("term " + t.str() +
                             " differentiates outside the coordinate set");
    }
    if (ell == 0) {
      continue;
    }
    if (!t.coords_with(CoordOp::chi).is_zero()) {
      throw std::logic_error("term " + t.str() + ": chi operator in an ell >= 1 plan");
    }
    if (expr.is_residual(t)) {
      if (t.coords_with(CoordOp::mean).order() < p - ell + 1) {
        throw std::logic_error("residual term " + t.str() +
                               " integrates fewer than p - ell + 1 coordinates");
      }
    } else if (t.deriv.order() < ell) {
      throw std::logic_error("term " + t.str() + " uses a derivative of order < ell");
    }
  }
}

double
eval_term(const Term& term, const TestFunction& g, std::span<const double> x,
          const Quadrature& q)
{
  check_point(g.dim(), x, "eval_term");
  if (!g.has_derivative(term.deriv)) {
    throw std::out_of_range("missing derivative " + term.deriv.str() + " for term " +
                            term.str());
  }
  const double integral = integrate_ops(
    term.ops, [&](std::span<const double> u) { return g.derivative(term.deriv, u); },
    x, q);
  return static_cast<double>(term.coefficient) * integral;
}

double
eval_term_expr(const TermExpr& expr, const TestFunction& g,
               std::span<const double> x, const Quadrature& q)
{
  for (const auto& d : expr.required_derivatives()) {
    if (!g.has_derivative(d)) {
      throw std::out_of_range("missing derivative " + d.str());
    }
  }
  double total = 0.0;
  for (const auto& t : expr.terms()) {
    total += eval_term(t, g, x, q);
  }
  return total;
}

int
nonparametric_dimension(int k, std::span<const DerivIndex> observed)
{
  if (k < 1 || k > 12) {
    throw std::invalid_argument("nonparametric_dimension supports 1 <= k <= 12");
  }
  std::vector<char> have(std::size_t{ 1 } << k, 0);
  for (const auto& a : observed) {
    if (a.dim() != k) {
      throw std::invalid_argument("observed index " + a.str() +
                                  " has the wrong dimension");
    }
    have[a.bits()] = 1;
  }
  if (!have[0]) {
    throw std::invalid_argument("observed set must contain the zero index (g itself)");
  }
  int best = k;
  const std::uint32_t all = (1u << k) - 1u;
  for (std::uint32_t pmask = 1; pmask <= all; ++pmask) {
    const DerivIndex coords(k, pmask);
    const int p = coords.order();
    if (k - p >= best) {
      continue;
    }
    const auto subs = subsets_of(coords);
    for (int lbar = 0; lbar < p; ++lbar) {
      const bool ok = std::all_of(subs.begin(), subs.end(), [&](const DerivIndex& b) {
        return b.order() < lbar + 1 || have[b.bits()];
      });
      if (ok) {
        best = std::min(best, k - (p - lbar));
        break;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::vector<TestFunction>
polynomial_suite(int k)
{
  using K = Factor::Kind;
  std::vector<TestFunction> out;
  out.push_back(make_separable(k, { monomial(2.5, std::vector<int>(k, 0)) }, "constant"));
  out.push_back(make_separable(k, { monomial(1.0, std::vector<int>(k, 1)) }, "product"));
  {
    std::vector<int> sq(k, 0);
    sq[0] = 2;
    std::vector<int> lin(k, 0);
    lin[k - 1] += 1;
    out.push_back(make_separable(k, { monomial(1.0, sq), monomial(1.0, lin) },
                                 "square_plus_linear"));
  }
  {
    std::vector<SeparableTerm> terms;
    for (int j = 0; j < k; ++j) {
      std::vector<int> pw(k, 0);
      pw[j] = 3;
      terms.push_back(monomial(j + 1.0, pw));
    }
    terms.push_back(monomial(1.0, std::vector<int>(k, 2)));
    std::vector<int> mix(k, 0);
    mix[0] += 2;
    mix[k - 1] += 1;
    terms.push_back(monomial(-0.7, mix));
    SeparableTerm c;
    c.coefficient = 0.5;
    c.factors.assign(k, Factor{ K::power, 0.0 });
    terms.push_back(c);
    out.push_back(make_separable(k, std::move(terms), "cubic_mix"));
  }
  return out;
}

std::vector<TestFunction>
analytic_suite(int k)
{
  using K = Factor::Kind;
  std::vector<TestFunction> out;
  {
    SeparableTerm t;
    t.factors.assign(k, Factor{ K::exponential, 1.0 });
    out.push_back(make_separable(k, { t }, "exp_sum"));
  }
  {
    SeparableTerm a;
    a.factors.assign(k, Factor{ K::cosine, 1.0 });
    a.factors[0] = Factor{ K::sine, 2.0 };
    std::vector<SeparableTerm> terms{ a };
    for (int j = 0; j < k; ++j) {
      SeparableTerm b;
      b.coefficient = 0.5;
      b.factors.assign(k, Factor{ K::power, 0.0 });
      b.factors[j] = Factor{ K::cosine, 3.0 };
      terms.push_back(b);
    }
    out.push_back(make_separable(k, std::move(terms), "trig_mix"));
  }
  {
    SeparableTerm a;
    a.factors.assign(k, Factor{ K::power, 0.0 });
    a.factors[0] = Factor{ K::exponential, 0.5 };
    SeparableTerm b;
    b.factors.assign(k, Factor{ K::power, 0.0 });
    b.factors[k - 1] = Factor{ K::sine, 1.5 };
    SeparableTerm c;
    c.coefficient = 0.3;
    c.factors.assign(k, Factor{ K::cosine, 0.7 });
    out.push_back(make_separable(k, { a, b, c }, "exp_trig"));
  }
  return out;
}

std::vector<std::vector<double>>
probe_points(int k, std::size_t count)
{
  std::vector<std::vector<double>> pts;
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<double> x(k);
    for (int j = 0; j < k; ++j) {
      const double v = 0.2 + 0.6180339887 * (t + 1) + 0.4142135624 * j * (t + 2);
      x[j] = v - std::floor(v);
    }
    if (t + 1 == count && count > 1) {
      x[0] = 0.0;
      x[k - 1] = k > 1 ? 1.0 : 0.0;
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

namespace {

struct Tracker
{
  IdentityCheck check;
  void record(double r)
  {
    check.max_residual = std::max(check.max_residual, std::isnan(r) ? INFINITY : r);
    ++check.evaluations;
  }
};

} // namespace

std::vector<IdentityCheck>
run_identity_suite(const IdentitySuiteOptions& opts)
{
  const Quadrature q(opts.quad_nodes);
  Tracker full_poly{ { "full_expansion/polynomial", 0, opts.polynomial_tolerance, 0 } };
  Tracker full_an{ { "full_expansion/analytic", 0, opts.analytic_tolerance, 0 } };
  Tracker part_poly{ { "partial_expansion/polynomial", 0, opts.polynomial_tolerance, 0 } };
  Tracker part_an{ { "partial_expansion/analytic", 0, opts.analytic_tolerance, 0 } };
  Tracker plan{ { "representation_plan", 0, opts.analytic_tolerance, 0 } };
  Tracker plan_structure{ { "representation_plan/structure", 0, 0.0, 0 } };
  Tracker alternating{ { "alternating_operator_sum", 0, opts.polynomial_tolerance, 0 } };
  Tracker incl_excl{ { "inclusion_exclusion", 0, opts.polynomial_tolerance, 0 } };
  Tracker composition{ { "operator_composition", 0, opts.polynomial_tolerance, 0 } };
  Tracker chi_bound{ { "chi_bound", 0, 0.0, 0 } };

  for (int k = 1; k <= opts.max_dim; ++k) {
    const auto pts = probe_points(k, opts.points_per_case);
    const auto polys = polynomial_suite(k);
    const auto analytic = analytic_suite(k);
    std::vector<TestFunction> all = polys;
    all.insert(all.end(), analytic.begin(), analytic.end());
    const DerivIndex full = DerivIndex::ones(k);

    for (const auto& x : pts) {
      for (const auto& g : polys) {
        full_poly.record(full_expansion_residual(g, x, q));
      }
      for (const auto& g : analytic) {
        full_an.record(full_expansion_residual(g, x, q));
      }
      for (const auto& coords : subsets_of(full)) {
        if (coords.is_zero()) {
          continue;
        }
        for (const auto& g : polys) {
          part_poly.record(partial_expansion_residual(g, coords, x, q));
        }
        for (const auto& g : analytic) {
          part_an.record(partial_expansion_residual(g, coords, x, q));
        }
      }
    }

    for (const auto& coords : subsets_of(full)) {
      if (coords.is_zero()) {
        continue;
      }
      for (int ell = 0; ell <= coords.order(); ++ell) {
        TermExpr expr = build_representation_plan(k, coords, ell);
        try {
          check_representation_structure(expr);
          plan_structure.record(0.0);
        } catch (const std::logic_error&) {
          plan_structure.record(1.0);
        }
        if (opts.inject_sign_fault) {
          expr = expr.with_flipped_sign(0);
        }
        for (const auto& x : pts) {
          for (const auto& g : all) {
            plan.record(std::abs(eval_term_expr(expr, g, x, q) - g(x)));
          }
        }
      }
    }

    // Σ_{β⊆α} (−1)^{|β|} M_β N_α b^α  ==  Σ_{β⊆α} (−1)^{|β|} M_β b.
    for (const auto& alpha : subsets_of(full)) {
      for (const auto& x : pts) {
        for (const auto& b : all) {
          double lhs = 0.0;
          double rhs = 0.0;
          for (const auto& beta : subsets_of(alpha)) {
            Term left{ sign_of(beta), alpha, std::vector<CoordOp>(k, CoordOp::free) };
            Term right{ sign_of(beta), DerivIndex::zeros(k),
                        std::vector<CoordOp>(k, CoordOp::free) };
            for (int i : alpha.coords()) {
              left.ops[i] = beta.test(i) ? CoordOp::mean_lower : CoordOp::lower;
            }
            for (int i : beta.coords()) {
              right.ops[i] = CoordOp::mean;
            }
            lhs += eval_term(left, b, x, q);
            rhs += eval_term(right, b, x, q);
          }
          alternating.record(std::abs(lhs - rhs));
        }
      }
    }

    // N_α b^α(x) == Σ_γ (−1)^{|γ|} b(v_γ(0, x)) for α = (1,…,1).
    for (const auto& x : pts) {
      for (const auto& b : all) {
        const double lhs = n_apply(
          full, [&](std::span<const double> u) { return b.derivative(full, u); }, x, q);
        double rhs = 0.0;
        for (const auto& gamma : subsets_of(full)) {
          std::vector<double> v = x;
          for (int i : gamma.coords()) {
            v[i] = 0.0;
          }
          rhs += sign_of(gamma) * b(v);
        }
        incl_excl.record(std::abs(lhs - rhs));
      }
    }

    // Nested application against the collapsed chains: M_a∘M_b == M_{a|b}
    // and M∘N == (1 − u)-weighted mean. Kept small since nesting multiplies
    // the node count.
    if (k <= 2) {
      const Quadrature qs(std::min(opts.quad_nodes, 16));
      for (const auto& x : pts) {
        for (const auto& b : all) {
          const Integrand fb = [&](std::span<const double> u) { return b(u); };
          for (const auto& a : subsets_of(full)) {
            for (const auto& c : subsets_of(full)) {
              const double nested = m_apply(
                a, [&](std::span<const double> y) { return m_apply(c, fb, y, qs); }, x,
                qs);
              composition.record(std::abs(nested - m_apply(a | c, fb, x, qs)));
            }
            Term collapsed{ 1, a, std::vector<CoordOp>(k, CoordOp::free) };
            for (int i : a.coords()) {
              collapsed.ops[i] = CoordOp::mean_lower;
            }
            const Integrand fa = [&](std::span<const double> u) {
              return b.derivative(a, u);
            };
            const double nested = m_apply(
              a, [&](std::span<const double> y) { return n_apply(a, fa, y, qs); }, x,
              qs);
            composition.record(std::abs(nested - eval_term(collapsed, b, x, qs)));
          }
        }
      }
    }

    RngStream rng = split_stream(0, { static_cast<std::uint64_t>(k) });
    std::vector<double> u(k);
    std::vector<double> x(k);
    for (int s = 0; s < 10000; ++s) {
      for (int j = 0; j < k; ++j) {
        u[j] = rng.uniform();
        x[j] = rng.uniform();
      }
      double worst = 0.0;
      for (const auto& alpha : subsets_of(full)) {
        worst = std::max(worst, std::abs(chi_eval(alpha, u, x)));
      }
      chi_bound.record(std::max(0.0, worst - 1.0));
    }
  }

  return { full_poly.check,   full_an.check,    part_poly.check,
           part_an.check,     plan.check,       plan_structure.check,
           alternating.check, incl_excl.check,  composition.check,
           chi_bound.check };
}

} // namespace derivreg
