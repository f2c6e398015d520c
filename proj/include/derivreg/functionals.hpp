#pragma once

#include "derivreg/core.hpp"
#include "derivreg/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace derivreg {

using Integrand = std::function<double(std::span<const double>)>;

//! u − 1 + I(u ≤ x); the indicator is 1 at equality.
inline double
chi1(double u, double x)
{
  return u - 1.0 + (u <= x ? 1.0 : 0.0);
}

//! Π_j χ_{α_j}(u_j, x_j) with χ₀ ≡ 1.
double chi_eval(const DerivIndex& alpha, std::span<const double> u,
                std::span<const double> x);

//! ∫ χ_α(u, x) b(u) du over the coordinates in `integrated`; the others stay
//! at x. Coordinates flagged in α are split into panels at u_i = x_i.
double psi_apply(const DerivIndex& alpha, const DerivIndex& integrated,
                 const Integrand& b, std::span<const double> x,
                 const Quadrature& q);
inline double
psi_apply(const DerivIndex& alpha, const Integrand& b, std::span<const double> x,
          const Quadrature& q)
{
  return psi_apply(alpha, DerivIndex::ones(alpha.dim()), b, x, q);
}

//! Integral of b over the α-flagged coordinates on [0,1], rest fixed at x.
double m_apply(const DerivIndex& alpha, const Integrand& b,
               std::span<const double> x, const Quadrature& q);
//! Integral of b over each α-flagged coordinate on [0, x_i].
double n_apply(const DerivIndex& alpha, const Integrand& b,
               std::span<const double> x, const Quadrature& q);

//! |g(x) − Σ_α ψ_α g^α(x)| over all 2^k indices.
double full_expansion_residual(const TestFunction& g, std::span<const double> x,
                               const Quadrature& q);
//! Same with only the coordinates in `coords` integrated and differentiated.
double partial_expansion_residual(const TestFunction& g, const DerivIndex& coords,
                                  std::span<const double> x, const Quadrature& q);
//! The first p coordinates.
double partial_expansion_residual(const TestFunction& g, int p,
                                  std::span<const double> x, const Quadrature& q);

// ---------------------------------------------------------------------------
// Operator chains

//! Per-coordinate collapse of an operator chain.
enum class CoordOp : std::uint8_t
{
  free,       // coordinate fixed at x_i
  mean,       // ∫_0^1 du_i
  lower,      // ∫_0^{x_i} du_i
  mean_lower, // M∘N: ∫_0^1 (1 − u_i) du_i
  chi,        // ∫_0^1 χ₁(u_i, x_i) du_i
};

//! Effect of applying M on top of an existing per-coordinate operator.
CoordOp compose_mean(CoordOp op);
char op_symbol(CoordOp op);

//! coefficient × (operator chain applied to g^deriv).
struct Term
{
  std::int64_t coefficient = 0;
  DerivIndex deriv;
  std::vector<CoordOp> ops;

  DerivIndex coords_with(CoordOp op) const;
  DerivIndex free_coords() const { return coords_with(CoordOp::free); }
  int smoothing_dims() const { return free_coords().order(); }
  //! Coordinates whose operator consumes a derivative (N, M∘N, χ₁).
  DerivIndex differentiated_coords() const;
  std::string str() const;
};

//! Signed sum of terms, kept canonical: one entry per (deriv, ops) key,
//! zero coefficients dropped, sorted by key.
class TermExpr
{
public:
  TermExpr() = default;
  TermExpr(int k, DerivIndex coords, int ell);

  int dim() const { return k_; }
  //! Coordinates carrying derivative data (the set P).
  const DerivIndex& coords() const { return coords_; }
  int ell() const { return ell_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  void add(const Term& t);
  //! Residual terms are operator chains on g itself in a plan with ell >= 1.
  bool is_residual(const Term& t) const { return ell_ >= 1 && t.deriv.is_zero(); }
  //! Derivative indices referenced by the expression.
  std::vector<DerivIndex> required_derivatives() const;
  //! Test hook: the same expression with term i negated.
  TermExpr with_flipped_sign(std::size_t i) const;
  std::string str() const;

private:
  int k_ = 0;
  DerivIndex coords_;
  int ell_ = 0;
  std::vector<Term> terms_;
};

//! Linear form in operator chains equal to g, using g^α only for |α| ≥ ell
//! (α ⊆ coords) plus g itself. ell = 0 gives the ψ expansion over `coords`.
//! Requires 1 ≤ |coords| ≤ k, 0 ≤ ell ≤ |coords|.
TermExpr build_representation_plan(int k, const DerivIndex& coords, int ell);
TermExpr build_representation_plan(int k, int p, int ell);

//! Throws std::logic_error when a term breaks the cardinality constraints
//! (|α| ≥ ell for derivative terms, |β| ≥ p − ell + 1 for residuals) or its
//! operators disagree with its derivative index.
void check_representation_structure(const TermExpr& expr);

double eval_term(const Term& term, const TestFunction& g,
                 std::span<const double> x, const Quadrature& q);
//! Throws std::out_of_range naming a derivative g does not supply.
double eval_term_expr(const TermExpr& expr, const TestFunction& g,
                      std::span<const double> x, const Quadrature& q);

//! Smallest k − (p − ℓ̄) over coordinate sets P whose partials with
//! |β| ≥ ℓ̄ + 1 are all observed (k when none qualifies; 0 for the full
//! hierarchy). `observed` must contain the zero index. k ≤ 12.
int nonparametric_dimension(int k, std::span<const DerivIndex> observed);

// ---------------------------------------------------------------------------
// Identity suite

std::vector<TestFunction> polynomial_suite(int k);
std::vector<TestFunction> analytic_suite(int k);
//! Deterministic evaluation points in [0,1]^k, including a boundary point.
std::vector<std::vector<double>> probe_points(int k, std::size_t count);

struct IdentityCheck
{
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t evaluations = 0;
  bool passed() const { return max_residual <= tolerance; }
};

struct IdentitySuiteOptions
{
  int quad_nodes = 32;
  int max_dim = 3;
  std::size_t points_per_case = 3;
  bool inject_sign_fault = false;
  double polynomial_tolerance = 1e-10;
  double analytic_tolerance = 1e-8;
};

std::vector<IdentityCheck> run_identity_suite(const IdentitySuiteOptions& opts);

} // namespace derivreg
