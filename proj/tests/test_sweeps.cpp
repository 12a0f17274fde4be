#include <gtest/gtest.h>

#include <cmath>

#include <catpump/config.hpp>
#include <catpump/sweeps.hpp>

using namespace catpump;

TEST(Grid, RangeIncludesEndpoint) {
  const auto g = grid_range(-1.6, -0.8, 0.05);
  ASSERT_EQ(g.size(), 17u);
  EXPECT_DOUBLE_EQ(g.front(), -1.6);
  EXPECT_NEAR(g.back(), -0.8, 1e-12);
  EXPECT_EQ(grid_range(0.0, 0.29, 0.1).size(), 3u);
}

TEST(Parallel, ResultsInIndexOrderForAnyWorkerCount) {
  const std::function<double(std::size_t)> f = [](std::size_t i) { return std::sin(0.1 * double(i)) * double(i); };
  const auto one = parallel_map<double>(257, f, 1);
  for (int w : {2, 3, 8}) EXPECT_EQ(parallel_map<double>(257, f, w), one);
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i], f(i));
}

TEST(MonomialRate, LowestElementMatchesFockMatrix) {
  const FockDims d{7, 7};
  for (const Monomial mo : {Monomial{0, 1, 0, 0}, Monomial{0, 1, 0, 1}, Monomial{1, 0, 0, 1}, Monomial{2, 0, 1, 0},
                            Monomial{0, 3, 0, 2}, Monomial{1, 2, 2, 1}}) {
    const auto mats = to_matrix(HarmonicPolynomial::term(mo, {}, 1.0), d);
    ASSERT_EQ(mats.size(), 1u);
    const auto& M = mats.begin()->second;
    const cplx el = M(d.index(mo.m, mo.p), d.index(mo.n, mo.q));
    EXPECT_NEAR(std::norm(el), lowest_matrix_element_sq(mo), 1e-10 * lowest_matrix_element_sq(mo));
  }
}

TEST(MonomialRate, SumsChannelsThroughBath) {
  const double kb = ghz(0.1);
  std::vector<CollapseChannel> cat(3);
  cat[0].omega = ghz(1.0);
  cat[0].rate_weight[mon_ab()] = 0.2;
  cat[0].rate_weight[mon_a()] = 0.7;
  cat[1].omega = ghz(3.0);
  cat[1].rate_weight[mon_ab()] = 0.1;
  cat[2].omega = -ghz(1.0);
  cat[2].rate_weight[mon_ab()] = 5.0;
  EXPECT_NEAR(monomial_rate(cat, mon_ab(), BathSpectrum::zero_t(kb)), kb * (0.04 + 0.01), 1e-15);
  EXPECT_NEAR(monomial_rate(cat, mon_a(), BathSpectrum::zero_t(kb)), kb * 0.49, 1e-15);
  EXPECT_EQ(monomial_rate(cat, mon_adag_b(), BathSpectrum::zero_t(kb)), 0.0);
}

TEST(FluxSweep, MinimumNearCancellationRatio) {
  const Preset p = preset("fig4");
  const FluxSweepResult r = flux_ratio_sweep(p.cfg, grid_range(-1.6, -0.8, 0.05));
  ASSERT_GE(r.argmin_a, 0);
  for (const auto& pt : r.points) EXPECT_FALSE(pt.failed) << pt.reason;
  EXPECT_NEAR(r.analytic_ratio, (-2 * ghz(37.0)) / ghz(62.4), 1e-12);
  EXPECT_LE(std::abs(r.points[r.argmin_a].ratio - r.analytic_ratio), 0.05);
  EXPECT_GT(r.points[r.argmin_a].rate_a, 0.0);
  EXPECT_NE(r.argmin_ab, r.argmin_a);
  EXPECT_NE(r.argmin_adag_b, r.argmin_a);
}

TEST(FluxSweep, RejectsUnthreadedShunt) {
  CircuitConfig c;
  c.E_Leta_eff = 0.0;
  EXPECT_THROW(flux_ratio_sweep(c, {-1.0}), ConfigError);
}

TEST(Collision, SpectrumSparserAboveBuffer) {
  const Preset p = preset("fig5");
  const auto cols = collision_map(p.cfg, {0.7, 0.8, 1.4, 1.6});
  for (const auto& c : cols) ASSERT_FALSE(c.dropped) << c.x << " " << c.reason;
  const double below = 0.5 * (mean_neighbor_gap(cols[0]) + mean_neighbor_gap(cols[1]));
  const double above = 0.5 * (mean_neighbor_gap(cols[2]) + mean_neighbor_gap(cols[3]));
  EXPECT_GT(above, below);
  for (const auto& c : cols) {
    int labeled = 0;
    for (const auto& d : c.dots) {
      EXPECT_GT(d.freq, 0.0);
      labeled += d.labeled;
    }
    EXPECT_GE(labeled, 1);
  }
}

TEST(PumpSweep, SwptOnlyStartsAtBareRates) {
  CircuitConfig c;
  c.u = 0.01;
  PumpSweepOptions o;
  o.floquet = false;
  const PumpSweep s = rate_vs_pump(c, {0.0, 0.05, 0.1}, o);
  ASSERT_EQ(s.points.size(), 3u);
  EXPECT_NEAR(s.points[0].swpt.at({1, 0}), c.u * c.u, 1e-3 * c.u * c.u);
  for (const auto& pt : s.points) {
    EXPECT_FALSE(pt.failed) << pt.reason;
    EXPECT_TRUE(pt.floquet.empty());
    for (const auto& sec : o.sectors) EXPECT_TRUE(pt.swpt.count(sec));
  }
  EXPECT_LT(s.points[1].swpt.at({1, 0}), s.points[0].swpt.at({1, 0}));
}
