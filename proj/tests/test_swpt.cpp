#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <catpump/config.hpp>
#include <catpump/swpt.hpp>
#include <catpump/sweeps.hpp>

using namespace catpump;
using HP = HarmonicPolynomial;

namespace {

// Off-resonant beam splitter g (a+ b e^{i D t} + h.c.), g tagged as lambda^2.
HP beam_splitter(double g) {
  return HP::term({1, 0, 0, 1}, {2, 0}, g, 2) + HP::term({0, 1, 1, 0}, {-2, 0}, g, 2);
}

// One-excitation eigenvalue shift of [[D, g], [g, 0]] relative to D.
double exact_shift(double g, double D) { return 0.5 * D * (std::sqrt(1.0 + 4.0 * g * g / (D * D)) - 1.0); }

double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double largest_prefactor(const Derivation& d, const Monomial& m) {
  double best = 0;
  for (const auto& ch : emission_channels(d.catalog)) {
    const auto it = ch.rate_weight.find(m);
    if (it != ch.rate_weight.end()) best = std::max(best, it->second);
  }
  return best;
}

}  // namespace

TEST(Swpt, VanVleckShiftMatchesExactSeries) {
  const double D = 1.0, g = 0.05;
  const Drive dr{D, 0.0};
  // lambda^4: g^2/D; lambda^8: adds -g^4/D^3; lambda^12: adds 2 g^6/D^5.
  const std::vector<std::pair<int, double>> cases{
      {4, g * g / D}, {8, g * g / D - std::pow(g, 4) / std::pow(D, 3)},
      {12, g * g / D - std::pow(g, 4) / std::pow(D, 3) + 2 * std::pow(g, 6) / std::pow(D, 5)}};
  for (const auto& [order, series] : cases) {
    const SwptResult r = swpt_generators(beam_splitter(g), dr, order, 1e-3);
    EXPECT_NEAR(r.K.coefficient({1, 1, 0, 0}).real(), series, 1e-15) << order;
    EXPECT_NEAR(r.K.coefficient({0, 0, 1, 1}).real(), -series, 1e-15) << order;
    EXPECT_NEAR(r.K.coefficient({1, 1, 0, 0}).imag(), 0.0, 1e-15);
  }
  const SwptResult r12 = swpt_generators(beam_splitter(g), dr, 12, 1e-3);
  EXPECT_NEAR(r12.K.coefficient({1, 1, 0, 0}).real(), exact_shift(g, D), 6.0 * std::pow(g, 8));
}

TEST(Swpt, EffectiveHamiltonianIsStaticAndHermitian) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  const Derivation d = derive(c);
  for (const auto& t : d.swpt.K.terms()) EXPECT_TRUE(t.freq.is_zero());
  EXPECT_LT((d.swpt.K - d.swpt.K.adjoint()).max_abs(), 1e-14);
  EXPECT_LT((d.swpt.dressed_sb - d.swpt.dressed_sb.adjoint()).max_abs(), 1e-14);
  EXPECT_EQ(d.swpt.iterations, plan_orders(6));
}

TEST(Swpt, ZeroPumpLeavesBareDetunings) {
  CircuitConfig c;
  c.eps_p = 0.0;
  const Drive dr{ghz(0.9), ghz(7.0)};
  const Derivation d = derive(c, dr);
  for (const auto& t : d.swpt.K.terms()) {
    const bool na = t.mon == Monomial{1, 1, 0, 0}, nb = t.mon == Monomial{0, 0, 1, 1};
    EXPECT_TRUE(na || nb) << t.mon.to_string();
  }
  EXPECT_NEAR(d.swpt.K.coefficient({1, 1, 0, 0}).real(), c.delta(dr), 1e-15);
  EXPECT_NEAR(d.swpt.K.coefficient({0, 0, 1, 1}).real(), c.Delta(dr), 1e-15);
}

TEST(Swpt, ZeroPumpCatalogIsBufferDecay) {
  CircuitConfig c;
  c.eps_p = 0.0;
  const Derivation d = derive(c, c.undressed_drive());
  const auto em = emission_channels(d.catalog);
  ASSERT_EQ(em.size(), 1u);
  ASSERT_EQ(em[0].rate_weight.size(), 1u);
  EXPECT_NEAR(em[0].rate_weight.at({0, 0, 0, 1}), 1.0, 1e-12);
  EXPECT_NEAR(em[0].omega, c.omega_b, 1e-12 * c.omega_b);
  // The conjugate absorption channel is listed too.
  ASSERT_EQ(d.catalog.size(), 2u);
  ASSERT_GE(em[0].conjugate, 0);
  EXPECT_NEAR(d.catalog[em[0].conjugate].omega, -c.omega_b, 1e-12 * c.omega_b);
}

TEST(Swpt, ShiftsEqualClosedFormAtSixthOrder) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  const Drive dr = match_frequencies(c).drive;
  const Derivation d = derive(c, dr);
  const double dp = delta_prime_closed_form(coupling_g(1, 1, c), coupling_g(3, 1, c), c.r(), dr);
  EXPECT_NEAR(d.couplings.delta_p, dp, 1e-12 * std::abs(dp));
  EXPECT_NEAR(d.couplings.Delta_p, c.r() * c.r() * dp, 1e-12 * std::abs(dp));
  EXPECT_NEAR(d.couplings.delta_p_imag, 0.0, 1e-15);
}

TEST(Swpt, ShiftAbsentBelowSixthOrder) {
  // delta' is a product of g11 (lambda^2) and g31 (lambda^4).
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  c.truncation_order = 5;
  const Derivation d = derive(c, match_frequencies(c).drive);
  EXPECT_EQ(d.couplings.delta_p, 0.0);
}

TEST(Swpt, ExchangeCouplingAtFourthOrder) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.3);
  c.truncation_order = 4;
  const Derivation d = derive(c, c.undressed_drive());
  // K contains -i g2 a^2 b+ with g2 = i 3 r g31.
  EXPECT_NEAR(std::abs(d.couplings.g2 - I * 3.0 * c.r() * coupling_g(3, 1, c)), 0.0, 1e-12 * g2_abs(c));
  EXPECT_NEAR(std::abs(d.couplings.g2), g2_abs(c), 1e-12 * g2_abs(c));
}

TEST(Swpt, HigherExchangeTermsAppearAtSixthOrder) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  const Derivation d = derive(c, match_frequencies(c).drive);
  EXPECT_GT(std::abs(d.couplings.g2a), 0.0);
  EXPECT_GT(std::abs(d.couplings.g2b), 0.0);
  EXPECT_LT(std::abs(d.couplings.g2a), std::abs(d.couplings.g2));
}

TEST(Swpt, CatAmplitudeFromDrive) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  c.cat_alpha_sq = 5.0;
  const Derivation d = derive(c, match_frequencies(c).drive);
  EXPECT_NEAR(std::abs(d.couplings.alpha_sq), 5.0, 0.05);
}

TEST(Swpt, RequiresOrderTags) {
  HP h = HP::term({1, 0, 0, 1}, {2, 0}, 0.1, 0, false);
  EXPECT_THROW(swpt_generators(h, Drive{1.0, 0.0}, 4), MissingOrderTag);
}

TEST(Swpt, NearResonantDenominatorThrows) {
  EXPECT_THROW(swpt_generators(beam_splitter(0.01), Drive{ghz(0.01), 0.0}, 4, ghz(0.1)), NearResonance);
}

TEST(Dressing, GradedSeriesMatchesRotation) {
  // X = -i (e + m) G with G = a+ b + a b+: e^X b e^-X = b cos(e+m) + i a sin(e+m).
  // e carries lambda^2 and m lambda^4; the dressed series keeps e^j m^l with 2j + 4l <= order.
  const double e = 0.07, m = 0.02;
  const HP G = HP::term({1, 0, 0, 1}, {}, 1.0) + HP::term({0, 1, 1, 0}, {}, 1.0);
  const std::vector<HP> S{(e * G).with_order(2), (m * G).with_order(4)};
  for (int order : {4, 8, 12}) {
    const HP out = dress_system_bath(HP::b(), S, order);
    cplx cb{}, ca{};
    for (int k = 0; 2 * k <= order; ++k) {
      double fact = 1;
      for (int i = 2; i <= k; ++i) fact *= i;
      const cplx ik = std::pow(cplx(0.0, 1.0), k);
      for (int l = 0; l <= k; ++l) {
        const int j = k - l;
        if (2 * j + 4 * l > order) continue;
        const double w = binom(k, l) * std::pow(e, j) * std::pow(m, l) / fact;
        // ad_X^k(b) alternates between b and i a with real (-1)^{k/2} weights.
        if (k % 2 == 0) cb += std::real(ik) * w;
        else ca += cplx(0.0, 1.0) * std::imag(ik) * w;
      }
    }
    EXPECT_NEAR(std::abs(out.coefficient({0, 0, 0, 1}) - cb), 0.0, 1e-15) << order;
    EXPECT_NEAR(std::abs(out.coefficient({0, 1, 0, 0}) - ca), 0.0, 1e-15) << order;
  }
  // Against the closed form only the omitted lambda^14 terms remain, led by e m^3 / 6 ~ 1e-7.
  const HP full = dress_system_bath(HP::b(), S, 12);
  EXPECT_NEAR(full.coefficient({0, 0, 0, 1}).real(), std::cos(e + m), 2e-7);
  EXPECT_NEAR(full.coefficient({0, 1, 0, 0}).imag(), std::sin(e + m), 2e-7);
}

TEST(Matching, UndressedAtZeroPump) {
  CircuitConfig c;
  c.eps_p = 0.0;
  const MatchResult m = match_frequencies(c);
  EXPECT_NEAR(to_ghz(m.drive.omega_d), 7.05, 1e-12);
  EXPECT_NEAR(to_ghz(m.drive.omega_p), 0.95, 1e-12);
}

TEST(Matching, ResidualsBelowOneKilohertz) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.2);
  const MatchResult m = match_frequencies(c);
  EXPECT_LT(std::abs(m.residual_a), mhz(1e-3));
  EXPECT_LT(std::abs(m.residual_b), mhz(1e-3));
  EXPECT_GT(m.iterations, 1);
  // 2 w~a - w~b = w_p and w_d = w~b.
  EXPECT_NEAR(2 * (c.omega_a + m.delta_p) - (c.omega_b + m.Delta_p), m.drive.omega_p, mhz(2e-3));
}

TEST(Catalog, MemoryChannelFingerprints) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  const Drive dr = match_frequencies(c).drive;
  const Derivation d = derive(c, dr);
  for (int k : {-3, 1, 5}) {
    const double target = 0.5 * dr.omega_d + 0.5 * k * dr.omega_p;
    bool found = false;
    for (const auto& ch : emission_channels(d.catalog))
      if (std::abs(ch.omega - target) < 1e-12 * target && ch.rate_weight.count(mon_a())) found = true;
    EXPECT_TRUE(found) << "a channel at w_d/2 + " << k << " w_p/2";
  }
}

TEST(Catalog, LowestChannelNearTwoHundredMegahertz) {
  const Preset p = preset("fig2");
  const Derivation d = derive(p.cfg);
  const double target = 0.5 * d.drive.omega_d - 3.5 * d.drive.omega_p;
  EXPECT_NEAR(to_ghz(target), 0.2, 1e-12);
  const auto em = emission_channels(d.catalog);
  ASSERT_FALSE(em.empty());
  EXPECT_NEAR(em.front().omega, target, 1e-12);
  EXPECT_TRUE(em.front().rate_weight.count(mon_adag_b()));
  EXPECT_TRUE(em.front().rate_weight.count(mon_a()));
}

TEST(Catalog, ConjugatePairsAndParity) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  const Derivation d = derive(c, match_frequencies(c).drive);
  for (std::size_t i = 0; i < d.catalog.size(); ++i) {
    const auto& ch = d.catalog[i];
    ASSERT_GE(ch.conjugate, 0);
    EXPECT_EQ(d.catalog[ch.conjugate].conjugate, int(i));
    EXPECT_NEAR(d.catalog[ch.conjugate].omega, -ch.omega, 1e-12 * std::max(1.0, std::abs(ch.omega)));
    // A single lattice frequency fixes the change of N_d for all its monomials.
    int dnd = 99;
    for (const auto& [mo, w] : ch.rate_weight) {
      if (dnd == 99) dnd = mo.delta_Nd();
      EXPECT_EQ(mo.delta_Nd(), dnd);
    }
  }
}

TEST(Catalog, PrefactorScalingWithPump) {
  const std::vector<double> fr{0.02, 0.04, 0.07, 0.1, 0.14, 0.2};
  std::vector<double> a, ab, adb;
  for (double f : fr) {
    CircuitConfig c;
    c.eps_p = eps_p_for_g2_fraction(f);
    const Derivation d = derive(c, match_frequencies(c).drive);
    a.push_back(largest_prefactor(d, mon_a()));
    ab.push_back(largest_prefactor(d, mon_ab()));
    adb.push_back(largest_prefactor(d, mon_adag_b()));
  }
  EXPECT_NEAR(slope(fr, a), 2.0, 0.1);
  EXPECT_NEAR(slope(fr, ab), 1.0, 0.1);
  EXPECT_NEAR(slope(fr, adb), 1.0, 0.1);
}
