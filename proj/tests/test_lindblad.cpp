#include <gtest/gtest.h>

#include <cmath>

#include <catpump/lindblad.hpp>
#include <catpump/swpt.hpp>

using namespace catpump;
using HP = HarmonicPolynomial;

namespace {

// hbar omega / k_B T from SI constants, omega in rad/ns.
double boltzmann_exponent(double omega, double T) {
  constexpr double hbar = 1.054571817e-34, kB = 1.380649e-23;
  return hbar * omega * 1e9 / (kB * T);
}

}  // namespace

TEST(Bath, ZeroTemperatureIsOneSided) {
  const BathSpectrum b = BathSpectrum::zero_t(ghz(0.1));
  EXPECT_DOUBLE_EQ(b(ghz(1.0)), ghz(0.1));
  EXPECT_DOUBLE_EQ(b(-ghz(1.0)), 0.0);
  EXPECT_DOUBLE_EQ(b(0.0), 0.0);
}

TEST(Bath, DetailedBalance) {
  const double T = 0.01;
  const BathSpectrum b = BathSpectrum::thermal(ghz(0.1), T);
  for (double f : {0.2, 1.0, 7.05}) {
    const double w = ghz(f);
    EXPECT_NEAR(b(-w) / b(w), std::exp(-boltzmann_exponent(w, T)), 1e-12);
    EXPECT_NEAR(b(w) - b(-w), ghz(0.1), 1e-12);
  }
}

TEST(Bath, ReverseRatiosAtTenMillikelvin) {
  const BathSpectrum b = BathSpectrum::thermal(ghz(0.1), 0.01);
  EXPECT_LT(b(-ghz(1.0)) / b(ghz(1.0)), 0.10);
  EXPECT_NEAR(b(-ghz(0.2)) / b(ghz(0.2)), 0.35, 0.05);
}

TEST(GoldenRule, ZeroPumpBufferDecay) {
  CircuitConfig c;
  c.eps_p = 0.0;
  c.dims = {8, 6};
  const Derivation d = derive(c, c.undressed_drive());
  const RateResult rr = golden_rule_rates(effective_model(d, BathSpectrum::zero_t(c.kappa_b)), c.dims, 6);
  for (int i = 0; i < c.dims.size(); ++i)
    for (int j = 0; j < c.dims.size(); ++j) {
      const FockLabel li = rr.basis.labels[i], lj = rr.basis.labels[j];
      const double ref = (lj.na == li.na && lj.nb == li.nb - 1) ? li.nb * c.kappa_b : 0.0;
      EXPECT_NEAR(rr.gamma(i, j), ref, 1e-12 * c.kappa_b) << li.to_string() << "->" << lj.to_string();
    }
  EXPECT_NEAR(sector_rate(rr.gamma, rr.basis.labels, 2, 0), c.kappa_b, 1e-12 * c.kappa_b);
}

TEST(GoldenRule, ThermalExcitationOfBuffer) {
  CircuitConfig c;
  c.eps_p = 0.0;
  c.dims = {6, 5};
  const double T = 0.1;
  const Derivation d = derive(c, c.undressed_drive());
  const BathSpectrum bath = BathSpectrum::thermal(c.kappa_b, T);
  const RateResult rr = golden_rule_rates(effective_model(d, bath), c.dims, 4);
  const int s00 = slot_of(rr.basis.labels, {0, 0}), s01 = slot_of(rr.basis.labels, {0, 1});
  const double n = 1.0 / std::expm1(boltzmann_exponent(c.omega_b, T));
  EXPECT_NEAR(rr.gamma(s00, s01), c.kappa_b * n, 1e-12 * c.kappa_b);
  EXPECT_NEAR(rr.gamma(s01, s00), c.kappa_b * (n + 1), 1e-12 * c.kappa_b);
}

TEST(GoldenRule, EigenbasisFollowsNdSectors) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  c.dims = {12, 7};
  const Derivation d = derive(c, match_frequencies(c).drive);
  const EigenBasis eb = diagonalize_K(d.swpt.K, c.dims);
  for (int s = 0; s < c.dims.size(); ++s) {
    const FockLabel l = eb.labels[s];
    for (int ia = 0; ia < c.dims.na; ++ia)
      for (int ib = 0; ib < c.dims.nb; ++ib)
        if (ia + 2 * ib != l.Nd()) {
          EXPECT_EQ(std::abs(eb.vectors(c.dims.index(ia, ib), s)), 0.0);
        }
  }
  // Columns are orthonormal.
  const Eigen::MatrixXcd G = eb.vectors.adjoint() * eb.vectors;
  EXPECT_LT((G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GoldenRule, ExchangeHybridizesTwoPhotonPair) {
  // |2,0> and |0,1> split by 2 sqrt(2) |g2| at exact resonance.
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  c.truncation_order = 4;
  c.dims = {8, 5};
  const Drive dr = c.undressed_drive();
  const Derivation d = derive(c, dr);
  const EigenBasis eb = diagonalize_K(d.swpt.K, c.dims);
  const int s20 = slot_of(eb.labels, {2, 0}), s01 = slot_of(eb.labels, {0, 1});
  EXPECT_NEAR(std::abs(eb.energies(s20) - eb.energies(s01)), 2.0 * std::sqrt(2.0) * g2_abs(c), 1e-9 * g2_abs(c));
}

TEST(GoldenRule, TruncationEdgeIsReported) {
  // A non-conserving hop spreads every eigenvector over the whole grid.
  const HP K = HP::term({1, 0, 0, 1}, {}, 1.0) + HP::term({0, 1, 1, 0}, {}, 1.0) + HP::term({1, 1, 0, 0}, {}, 0.01);
  EffectiveModel m{K, {}, BathSpectrum::zero_t(ghz(0.1))};
  EXPECT_THROW(golden_rule_rates(m, {4, 3}, 2), TruncationUnconverged);
}

TEST(Figures, TwoPhotonRateAndThresholds) {
  const double g2 = mhz(5.08), kb = ghz(0.1);
  const FiguresOfMerit f = figures_of_merit(g2, kb, 1e-4 * kb, std::sqrt(5.0));
  EXPECT_NEAR(f.kappa2, 4 * g2 * g2 / kb, 1e-15);
  EXPECT_NEAR(f.ratio, 1e-4 * kb / f.kappa2, 1e-15);
  EXPECT_TRUE(f.adiabaticity_ok);  // 8 |g2| |alpha| = 91 MHz < 100 MHz
  EXPECT_FALSE(figures_of_merit(mhz(20), kb, 0, 2.0).adiabaticity_ok);
  EXPECT_EQ(f.threshold_ok, f.ratio <= 5e-3);
}

TEST(Figures, ParityClassification) {
  CollapseChannel ch;
  ch.rate_weight[{0, 1, 0, 0}] = 1;
  ch.rate_weight[{0, 2, 1, 0}] = 1;
  ch.rate_weight[{1, 0, 0, 1}] = 1;
  const auto cls = classify_parity(ch);
  ASSERT_EQ(cls.size(), 3u);
  int breaking = 0;
  for (const auto& c : cls) breaking += c.parity_breaking;
  EXPECT_EQ(breaking, 2);
}
