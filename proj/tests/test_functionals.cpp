#include "derivreg/functionals.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace derivreg;

namespace {

const Quadrature q32(32);

Integrand
constant(double c)
{
  return [c](std::span<const double>) { return c; };
}

//! ∫ χ₁(u₁,x₁)χ₁(u₂,x₂) b(u) du by a per-cell 64-node rule on the four
//! rectangles cut at x; written without make_axis / integrate_tensor.
double
brute_psi11(const std::function<double(double, double)>& b, double x1, double x2)
{
  const Quadrature q(64);
  auto nodes = q.unit_nodes();
  auto weights = q.unit_weights();
  const double cuts1[] = { 0.0, x1, 1.0 };
  const double cuts2[] = { 0.0, x2, 1.0 };
  double s = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      const double l1 = cuts1[a + 1] - cuts1[a];
      const double l2 = cuts2[c + 1] - cuts2[c];
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = 0; j < nodes.size(); ++j) {
          const double u1 = cuts1[a] + l1 * nodes[i];
          const double u2 = cuts2[c] + l2 * nodes[j];
          const double c1 = a == 0 ? u1 : u1 - 1.0;
          const double c2 = c == 0 ? u2 : u2 - 1.0;
          s += weights[i] * weights[j] * l1 * l2 * c1 * c2 * b(u1, u2);
        }
      }
    }
  }
  return s;
}

} // namespace

TEST_CASE("chi evaluation")
{
  const std::vector<double> u1{ 0.3 }, x1{ 0.5 };
  CHECK(chi_eval(DerivIndex(1, 0), u1, x1) == 1.0);
  CHECK(chi_eval(DerivIndex(1, 1), u1, x1) == doctest::Approx(0.3));
  const std::vector<double> u2{ 0.9, 0.2 }, x2{ 0.5, 0.5 };
  CHECK(chi_eval(DerivIndex(2, 0b11), u2, x2) == doctest::Approx(-0.02));
  // Indicator is 1 at equality.
  CHECK(chi1(0.4, 0.4) == doctest::Approx(0.4));
  CHECK_THROWS_AS(chi_eval(DerivIndex(2, 1), u1, x1), std::invalid_argument);
}

TEST_CASE("psi, M and N on closed forms")
{
  const std::vector<double> half{ 0.5 };
  CHECK(std::abs(psi_apply(DerivIndex(1, 1), constant(1.0), half, q32)) < 1e-15);
  const std::vector<double> x07{ 0.7 };
  CHECK(psi_apply(DerivIndex(1, 1), constant(1.0), x07, q32) == doctest::Approx(0.2));

  // g = x²: ψ₀g = 1/3 and ψ₁g′ = 2/3 − 1 + x².
  const Integrand g = [](std::span<const double> u) { return u[0] * u[0]; };
  const Integrand dg = [](std::span<const double> u) { return 2 * u[0]; };
  const double p0 = psi_apply(DerivIndex(1, 0), g, half, q32);
  const double p1 = psi_apply(DerivIndex(1, 1), dg, half, q32);
  CHECK(p0 == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(p1 == doctest::Approx(2.0 / 3 - 1 + 0.25).epsilon(1e-13));
  CHECK(std::abs(p0 + p1 - 0.25) < 1e-12);

  // Degree-3 polynomial against a brute-force rule at twice the nodes.
  auto b = [](double u1, double u2) { return 1 + u1 * u2 * u2 - 2 * u1 * u1 * u1 + u2; };
  const Integrand bi = [&](std::span<const double> u) { return b(u[0], u[1]); };
  for (auto x : { std::vector<double>{ 0.3, 0.8 }, std::vector<double>{ 0.0, 1.0 },
                  std::vector<double>{ 0.61, 0.17 } }) {
    CHECK(std::abs(psi_apply(DerivIndex(2, 0b11), bi, x, q32) - brute_psi11(b, x[0], x[1])) <
          1e-12);
  }

  const std::vector<double> x2{ 0.9, 0.4 };
  const Integrand prod = [](std::span<const double> u) { return u[0] * u[1]; };
  CHECK(m_apply(DerivIndex(2, 0), prod, x2, q32) == doctest::Approx(0.36));
  CHECK(m_apply(DerivIndex(2, 0b11), constant(3.0), x2, q32) == doctest::Approx(3.0));
  CHECK(m_apply(DerivIndex(2, 0b01), prod, x2, q32) == doctest::Approx(0.2));

  CHECK(n_apply(DerivIndex(1, 1), constant(1.0), x07, q32) == doctest::Approx(0.7));
  // g = u₁²u₂: g^{(1,1)} = 2u₁, and N g^{(1,1)}(x) = x₁²x₂ − g(0,x₂) − g(x₁,0) + g(0,0).
  const Integrand d11 = [](std::span<const double> u) { return 2 * u[0]; };
  const std::vector<double> x3{ 0.6, 0.3 };
  CHECK(n_apply(DerivIndex(2, 0b11), d11, x3, q32) == doctest::Approx(0.36 * 0.3));
  const std::vector<double> x0{ 0.0, 0.3 };
  CHECK(n_apply(DerivIndex(2, 0b11), d11, x0, q32) == 0.0);
}

TEST_CASE("expansion residuals")
{
  const auto product = make_separable(2, { monomial(1.0, { 1, 1 }) });
  const std::vector<double> x{ 0.3, 0.8 };
  CHECK(full_expansion_residual(product, x, q32) <= 1e-10);

  const auto c = make_separable(2, { monomial(4.0, { 0, 0 }) });
  CHECK(full_expansion_residual(c, x, q32) <= 1e-14);

  SeparableTerm e;
  e.factors.assign(3, Factor{ Factor::Kind::exponential, 1.0 });
  const auto ex = make_separable(3, { e });
  const std::vector<double> x3{ 0.2, 0.5, 0.9 };
  CHECK(full_expansion_residual(ex, x3, q32) <= 1e-8);

  const auto mixed = make_separable(2, { monomial(1, { 2, 0 }), monomial(1, { 0, 1 }) });
  CHECK(partial_expansion_residual(mixed, 1, x, q32) <= 1e-10);
  CHECK(std::abs(partial_expansion_residual(mixed, 2, x, q32) -
                 full_expansion_residual(mixed, x, q32)) <= 1e-14);

  SeparableTerm t1;
  t1.factors = { Factor{ Factor::Kind::sine, 2.0 }, Factor{ Factor::Kind::cosine, 1.0 },
                 Factor{ Factor::Kind::sine, 0.5 } };
  const auto trig = make_separable(3, { t1 });
  CHECK(partial_expansion_residual(trig, 2, x3, q32) <= 1e-8);
  CHECK_THROWS_AS(partial_expansion_residual(trig, 4, x3, q32), std::invalid_argument);
}

TEST_CASE("representation plans")
{
  SUBCASE("ell = 0 over all coordinates is the full psi expansion")
  {
    for (int k = 1; k <= 3; ++k) {
      const TermExpr e = build_representation_plan(k, k, 0);
      CHECK(e.size() == (1u << k));
      for (const auto& t : e.terms()) {
        CHECK(t.coefficient == 1);
        CHECK(t.coords_with(CoordOp::chi) == t.deriv);
        CHECK(t.coords_with(CoordOp::mean) == t.deriv.complement());
        CHECK(!e.is_residual(t));
      }
    }
  }

  SUBCASE("k = p = 2, ell = 2 leaves an additively separable remainder")
  {
    const TermExpr e = build_representation_plan(2, 2, 2);
    CHECK(e.required_derivatives() ==
          std::vector<DerivIndex>{ DerivIndex(2, 0), DerivIndex(2, 0b11) });
    const auto g = make_separable(
      2, { monomial(1, { 2, 1 }), monomial(0.5, { 0, 3 }), monomial(-1, { 1, 0 }) });
    auto remainder = [&](double a, double b) {
      const std::vector<double> x{ a, b };
      double r = 0.0;
      for (const auto& t : e.terms()) {
        if (e.is_residual(t)) {
          CHECK(t.coords_with(CoordOp::mean).order() >= 1);
          r += eval_term(t, g, x, q32);
        }
      }
      return r;
    };
    const double contrast =
      remainder(0.2, 0.3) - remainder(0.2, 0.9) - remainder(0.7, 0.3) + remainder(0.7, 0.9);
    CHECK(std::abs(contrast) < 1e-13);
    CHECK(std::abs(remainder(0.2, 0.3)) > 1e-3);
  }

  SUBCASE("k = p = 3, ell = 2 remainder is additive in each coordinate")
  {
    const TermExpr e = build_representation_plan(3, 3, 2);
    check_representation_structure(e);
    for (const auto& t : e.terms()) {
      if (e.is_residual(t)) {
        CHECK(t.smoothing_dims() <= 1);
      } else {
        CHECK(t.deriv.order() >= 2);
      }
    }
    const auto g = analytic_suite(3)[1];
    auto remainder = [&](std::vector<double> x) {
      double r = 0.0;
      for (const auto& t : e.terms()) {
        if (e.is_residual(t)) {
          r += eval_term(t, g, x, q32);
        }
      }
      return r;
    };
    // Mixed differences vanish for every coordinate pair.
    const double c01 = remainder({ 0.2, 0.3, 0.5 }) - remainder({ 0.2, 0.8, 0.5 }) -
                       remainder({ 0.6, 0.3, 0.5 }) + remainder({ 0.6, 0.8, 0.5 });
    const double c12 = remainder({ 0.4, 0.1, 0.2 }) - remainder({ 0.4, 0.1, 0.7 }) -
                       remainder({ 0.4, 0.9, 0.2 }) + remainder({ 0.4, 0.9, 0.7 });
    CHECK(std::abs(c01) < 1e-13);
    CHECK(std::abs(c12) < 1e-13);
  }

  SUBCASE("every valid plan reproduces g")
  {
    for (int k = 1; k <= 3; ++k) {
      const auto pts = probe_points(k, 2);
      for (const auto& coords : subsets_of(DerivIndex::ones(k))) {
        if (coords.is_zero()) {
          continue;
        }
        for (int ell = 0; ell <= coords.order(); ++ell) {
          const TermExpr e = build_representation_plan(k, coords, ell);
          CHECK_NOTHROW(check_representation_structure(e));
          for (const auto& g : polynomial_suite(k)) {
            for (const auto& x : pts) {
              CHECK(std::abs(eval_term_expr(e, g, x, q32) - g(x)) <= 1e-10);
            }
          }
        }
      }
    }
  }

  SUBCASE("preconditions, empty expression and missing derivatives")
  {
    CHECK_THROWS_AS(build_representation_plan(2, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_representation_plan(2, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_representation_plan(2, 0, 0), std::invalid_argument);
    const auto g = polynomial_suite(2)[1];
    const std::vector<double> x{ 0.4, 0.4 };
    CHECK(eval_term_expr(TermExpr(2, DerivIndex::ones(2), 0), g, x, q32) == 0.0);
    const auto limited = g.restricted_to({ DerivIndex(2, 0) });
    try {
      eval_term_expr(build_representation_plan(2, 2, 2), limited, x, q32);
      FAIL("expected out_of_range");
    } catch (const std::out_of_range& err) {
      CHECK(std::string(err.what()).find("(1,1)") != std::string::npos);
    }
  }

  SUBCASE("a negated term is caught")
  {
    const TermExpr e = build_representation_plan(2, 2, 1).with_flipped_sign(0);
    const auto g = analytic_suite(2)[0];
    const std::vector<double> x{ 0.3, 0.6 };
    CHECK(std::abs(eval_term_expr(e, g, x, q32) - g(x)) > 1e-3);
  }
}

TEST_CASE("term merging")
{
  TermExpr e(1, DerivIndex::ones(1), 1);
  const Term a{ 2, DerivIndex(1, 1), { CoordOp::lower } };
  const Term b{ -2, DerivIndex(1, 1), { CoordOp::lower } };
  e.add(a);
  CHECK(e.size() == 1);
  e.add(b);
  CHECK(e.empty());
  CHECK(compose_mean(CoordOp::lower) == CoordOp::mean_lower);
  CHECK(compose_mean(CoordOp::free) == CoordOp::mean);
  CHECK(compose_mean(CoordOp::mean) == CoordOp::mean);
}

TEST_CASE("nonparametric dimension of the hierarchy examples")
{
  const int k = 4;
  auto all_subsets_of = [&](std::uint32_t mask) {
    std::vector<DerivIndex> v;
    for (const auto& s : subsets_of(DerivIndex(k, mask))) {
      v.push_back(s);
    }
    return v;
  };
  // Full hierarchy.
  CHECK(nonparametric_dimension(k, all_subsets_of(0b1111)) == 0);
  // All partials in the first three coordinates.
  CHECK(nonparametric_dimension(k, all_subsets_of(0b0111)) == 1);
  // g plus every partial of order ≥ 3.
  std::vector<DerivIndex> wedge{ DerivIndex(k, 0) };
  for (std::uint32_t m = 0; m < 16; ++m) {
    if (std::popcount(m) >= 3) {
      wedge.emplace_back(k, m);
    }
  }
  CHECK(nonparametric_dimension(k, wedge) == 2);
  // Only first-order partials.
  std::vector<DerivIndex> row{ DerivIndex(k, 0) };
  for (int i = 0; i < k; ++i) {
    row.emplace_back(k, 1u << i);
  }
  CHECK(nonparametric_dimension(k, row) == 3);
  row.emplace_back(k, 0b0011);
  CHECK(nonparametric_dimension(k, row) <= 2);
  // Function data only.
  const std::vector<DerivIndex> only_g{ DerivIndex(k, 0) };
  CHECK(nonparametric_dimension(k, only_g) == k);
  const std::vector<DerivIndex> no_g{ DerivIndex(k, 1) };
  CHECK_THROWS_AS(nonparametric_dimension(k, no_g), std::invalid_argument);
  CHECK_THROWS_AS(nonparametric_dimension(13, only_g), std::invalid_argument);
}

TEST_CASE("identity suite passes and the sign fault is named")
{
  IdentitySuiteOptions o;
  o.max_dim = 2;
  for (const auto& c : run_identity_suite(o)) {
    INFO(c.name, " ", c.max_residual);
    CHECK(c.passed());
  }
  o.inject_sign_fault = true;
  bool plan_failed = false;
  for (const auto& c : run_identity_suite(o)) {
    if (c.name == "representation_plan") {
      plan_failed = !c.passed();
    } else {
      CHECK(c.passed());
    }
  }
  CHECK(plan_failed);
}
