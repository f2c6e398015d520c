#include "derivreg/simulation.hpp"

#include "reference.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace derivreg;

TEST_CASE("Cobb-Douglas constants")
{
  CobbDouglasConfig cfg;
  cfg.c = 1.0;
  const double a = 0.8 / 0.7;
  CHECK(cfg.c_tilde() == doctest::Approx(std::pow(a, 0.7 / 1.5) + std::pow(a, -0.8 / 1.5)));
  CHECK(cfg.c_tilde() == doctest::Approx(1.99556).epsilon(1e-5));

  // AL is the w-derivative of AC: ∂/∂w [r AC(Q, w/r)] at r = 1.
  cfg.c = 1.34;
  const double q = 0.9, s = 1.1, eps = 1e-6;
  const double fd = (cfg.average_cost(q, s + eps, 1.0) - cfg.average_cost(q, s - eps, 1.0)) /
                    (2 * eps);
  CHECK(cfg.average_labor(q, s) == doctest::Approx(fd).epsilon(1e-8));

  CobbDouglasConfig bad;
  bad.rho = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.n = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("generator error structure")
{
  CobbDouglasConfig cfg;
  cfg.n = 100000;
  for (double rho : { 0.0, 0.9 }) {
    cfg.rho = rho;
    const auto smp = generate(cfg, 0);
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < smp.size(); ++i) {
      const double ea = smp.y_ac[i] - smp.ac[i];
      const double eb = smp.y_al[i] - smp.al[i];
      sa += ea;
      sb += eb;
      sab += ea * eb;
      saa += ea * ea;
      sbb += eb * eb;
    }
    const double n = static_cast<double>(smp.size());
    const double cov = sab / n - sa * sb / (n * n);
    const double corr = cov / std::sqrt((saa / n - sa * sa / (n * n)) * (sbb / n - sb * sb / (n * n)));
    CHECK(std::abs(corr - rho) < 0.01);
    CHECK(std::sqrt(sbb / n) == doctest::Approx(0.35).epsilon(0.02));
  }

  cfg.n = 500;
  cfg.sigma = 0.0;
  const auto exact = generate(cfg, 3);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    CHECK(exact.y_ac[i] == exact.ac[i]);
    CHECK(exact.y_al[i] == exact.al[i]);
    CHECK(exact.q[i] >= 0.5);
    CHECK(exact.q[i] <= 1.5);
  }
  const auto ac = exact.ac_dataset();
  CHECK(ac.deriv() == DerivIndex(2, 0));
  CHECK(exact.al_dataset().deriv().str() == "(0,1)");
  CHECK(ac.coord(7, 0) == doctest::Approx(exact.q[7] - 0.5));
}

TEST_CASE("replications and rho share the design")
{
  CobbDouglasConfig a;
  a.n = 50;
  CobbDouglasConfig b = a;
  b.rho = 0.9;
  const auto sa = generate(a, 5);
  const auto sb = generate(b, 5);
  CHECK(sa.q == sb.q);
  CHECK(sa.s == sb.s);
  CHECK(sa.y_ac == sb.y_ac);
  CHECK(sa.y_al != sb.y_al);
  CHECK(generate(a, 6).q != sa.q);
}

TEST_CASE("boxcar estimator against the naive double loop")
{
  CobbDouglasConfig cfg;
  cfg.n = 200;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const auto smp = generate(cfg, rep);
    const double h = std::pow(200.0, -1.0 / 5);
    const BoxcarAcEstimator est(smp, h);
    const auto all = est.in_sample();
    for (std::size_t j = 0; j < smp.size(); j += 7) {
      const double want = ref::boxcar_ac(smp, smp.q[j], smp.s[j], smp.r[j], h);
      CHECK(ref::max_rel_diff(all[j], want) <= 1e-12);
      CHECK(ref::max_rel_diff(deriv_ac_estimator(smp, smp.q[j], smp.s[j], smp.r[j], h),
                              want) <= 1e-12);
      const double hb = std::pow(200.0, -1.0 / 6);
      CHECK(ref::max_rel_diff(boxcar_reference(smp, smp.q[j], smp.s[j], smp.r[j], hb),
                              ref::boxcar_bivariate(smp, smp.q[j], smp.s[j], smp.r[j], hb)) <=
            1e-12);
    }
  }
}

TEST_CASE("boxcar edge cases")
{
  CobbDouglasConfig cfg;
  cfg.n = 300;
  auto smp = generate(cfg, 0);
  const BoxcarAcEstimator base(smp, 0.2);

  auto zero_al = smp;
  std::fill(zero_al.y_al.begin(), zero_al.y_al.end(), 0.0);
  const BoxcarAcEstimator z(zero_al, 0.2);
  CHECK(z.g_a(1.0, 1.0, 1.0) == 0.0);
  CHECK(z.estimate(1.0, 1.0, 1.0) == doctest::Approx(ref::boxcar_ac(zero_al, 1.0, 1.0, 1.0, 0.2)));

  // Doubling every response doubles the estimate exactly (powers of two).
  auto twice = smp;
  for (auto& v : twice.y_ac) {
    v *= 2;
  }
  for (auto& v : twice.y_al) {
    v *= 2;
  }
  const BoxcarAcEstimator t(twice, 0.2);
  CHECK(t.estimate(0.9, 1.1, 0.8) == 2 * base.estimate(0.9, 1.1, 0.8));

  CHECK_THROWS_AS(base.estimate(3.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(BoxcarAcEstimator(smp, 0.0), std::invalid_argument);
}

TEST_CASE("ratio of means")
{
  const std::vector<double> a{ 1, 2, 3, 4 };
  const std::vector<double> b{ 2, 4, 6, 8 };
  const auto r = ratio_of_means(a, b);
  CHECK(r.ratio == doctest::Approx(0.5));
  CHECK(r.se == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  const std::vector<double> c{ 2, 1, 4, 3 };
  CHECK(ratio_of_means(c, b).se > 0.0);
}

TEST_CASE("table1 runner")
{
  Table1Config cfg;
  cfg.ns = { 100, 200 };
  cfg.rhos = { 0.0, 0.9 };
  cfg.reps = 40;
  cfg.keep_replications = true;
  const McResult one = run_table1(cfg);
  cfg.workers = 4;
  const McResult four = run_table1(cfg);
  REQUIRE(one.cells.size() == 4);
  REQUIRE(one.replications.size() == 160);
  for (std::size_t i = 0; i < one.cells.size(); ++i) {
    CHECK(one.cells[i].mse_deriv == four.cells[i].mse_deriv);
    CHECK(one.cells[i].mse_baseline == four.cells[i].mse_baseline);
    CHECK(one.cells[i].ratio < 1.0);
  }
  // ρ only touches the AL errors, so the baseline is identical across ρ.
  CHECK(one.cells[0].mse_baseline == one.cells[1].mse_baseline);
  CHECK(one.cells[0].mse_deriv != one.cells[1].mse_deriv);

  // Same design draws without response noise. The r/(nh) boxcar error is
  // mostly design-driven, so the drop is modest rather than tenfold.
  Table1Config quiet = cfg;
  quiet.model.sigma = 0.0;
  quiet.ns = { 200 };
  quiet.rhos = { 0.0 };
  const McResult q = run_table1(quiet);
  CHECK(q.cells[0].mse_deriv < one.cells[2].mse_deriv);
  CHECK(q.cells[0].mse_baseline < one.cells[2].mse_baseline);

  Table1Config bad = cfg;
  bad.trim_low = 1.5;
  CHECK_THROWS_AS(run_table1(bad), std::invalid_argument);
}

TEST_CASE("R2 at the calibrated noise level")
{
  const auto r = r2_check(CobbDouglasConfig{}, 20000);
  CHECK(r.ac > 0.6);
  CHECK(r.ac < 0.85);
  CHECK(r.al > 0.1);
  CHECK(r.al < 0.3);
  CHECK_THROWS_AS(r2_check(CobbDouglasConfig{}, 10), std::invalid_argument);
}

TEST_CASE("rate configuration")
{
  RateConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.ns = { 100, 200, 400 };
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.ns = { 100, 200, 400, 800 };
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.reps = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  const auto g = rate_test_function(2);
  const std::vector<double> x{ 0.3, 0.6 };
  const double arg = 1 + 0.9 * 0.3 + 0.7 * 0.6;
  CHECK(g(x) == doctest::Approx(std::sin(arg)));
  CHECK(g.derivative(DerivIndex(2, 0b11), x) == doctest::Approx(-0.63 * std::sin(arg)));

  RateConfig small;
  small.ns = { 200, 400, 800, 2000 };
  small.reps = 10;
  small.workers = 2;
  const auto a = rate_experiment(small);
  small.workers = 1;
  const auto b = rate_experiment(small);
  CHECK(a.slope == b.slope);
  CHECK(a.expected_slope == -1.0);
  CHECK(a.points.size() == 4);
}
