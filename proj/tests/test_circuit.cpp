#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <catpump/circuit.hpp>
#include <catpump/normal_modes.hpp>

using namespace catpump;
using HP = HarmonicPolynomial;

namespace {

// (1/2pi) int sin(eps sin th) e^{-ik th} dth by the trapezoid rule (spectrally accurate).
cplx pump_harmonic(double eps, int k) {
  const int M = 4096;
  cplx s{};
  for (int i = 0; i < M; ++i) {
    const double th = two_pi * i / M;
    s += std::sin(eps * std::sin(th)) * std::exp(-I * double(k) * th);
  }
  return s / double(M);
}

Eigen::MatrixXd position(int n) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) X(i - 1, i) = X(i, i - 1) = std::sqrt(double(i));
  return X;
}

}  // namespace

TEST(Couplings, PrintedFormulaIsNegatedJacobiAngerCoefficient) {
  CircuitConfig c;
  c.eps_p = 0.7;
  const double dress = std::exp(-0.5 * (c.phi_a * c.phi_a + c.phi_b * c.phi_b));
  for (int n : {1, 3, 5})
    for (int k : {1, 3, 5}) {
      // -2 E_J sin(eps sin wt) sin(phi X): harmonic e^{ikwt} times the :X^n: weight of sin.
      double fact = 1;
      for (int i = 2; i <= n; ++i) fact *= i;
      const double sgn = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
      const cplx direct = -2.0 * c.E_J * pump_harmonic(c.eps_p, k) * dress * sgn * std::pow(c.phi_a, n) / fact;
      const cplx g = coupling_g(n, k, c);
      EXPECT_NEAR(std::abs(g + direct), 0.0, 1e-13 * c.E_J * std::pow(c.phi_a, n) / fact) << n << "," << k;
    }
}

TEST(Couplings, NormalOrderingDressingMatchesMatrixFunction) {
  // sin(phi x) = e^{-phi^2/2} sum_n odd (-1)^{(n-1)/2} phi^n :x^n:/n!
  const double phi = 0.35;
  const int dim = 70;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(position(dim));
  const Eigen::MatrixXd S =
      es.eigenvectors() * (phi * es.eigenvalues().array()).sin().matrix().asDiagonal() * es.eigenvectors().transpose();
  const HP X = HP::a() + HP::adag();
  HP series;
  double fact = 1;
  for (int n = 1; n <= 25; ++n) {
    fact *= n;
    if (n % 2 == 0) continue;
    const double sgn = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    series += (sgn * std::pow(phi, n) / fact * std::exp(-0.5 * phi * phi)) * detail::symbol_power(X, n);
  }
  const FockDims d{dim, 1};
  const Eigen::MatrixXcd M = to_matrix(series, d).begin()->second;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(std::abs(M(i, j) - S(i, j)), 0.0, 1e-12) << i << "," << j;
}

TEST(Couplings, G2ClosedFormAndExchangeWeight) {
  CircuitConfig c;
  c.eps_p = 0.4;
  const double ref = c.E_J * std::exp(-0.5 * (c.phi_a * c.phi_a + c.phi_b * c.phi_b)) * std::cyl_bessel_j(1, c.eps_p) *
                     c.phi_a * c.phi_a * c.phi_b;
  EXPECT_NEAR(g2_abs(c), ref, 1e-14 * ref);
  EXPECT_NEAR(std::abs(3.0 * c.r() * coupling_g(3, 1, c)), ref, 1e-14 * ref);
}

TEST(Couplings, G2MaximumAndLocation) {
  EXPECT_NEAR(bessel_j1_argmax(), 1.8411837813406593, 1e-10);
  const CircuitConfig c;
  EXPECT_NEAR(to_mhz(g2_max(c)), 50.8, 0.3);
  EXPECT_NEAR(bessel_j1_argmax() / pi, 0.6, 0.05);
}

TEST(Couplings, PumpForG2FractionInvertsBessel) {
  const double jmax = std::cyl_bessel_j(1, bessel_j1_argmax());
  for (double f : {0.02, 0.1, 0.4, 0.9}) {
    const double e = eps_p_for_g2_fraction(f);
    EXPECT_NEAR(std::cyl_bessel_j(1, e) / jmax, f, 1e-12);
    EXPECT_LT(e, bessel_j1_argmax());
  }
  EXPECT_THROW(eps_p_for_g2_fraction(1.5), ConfigError);
}

TEST(Couplings, OddIndicesOnly) {
  CircuitConfig c;
  EXPECT_THROW(coupling_g(2, 1, c), ConfigError);
  EXPECT_THROW(coupling_g(1, 0, c), ConfigError);
}

TEST(Hamiltonian, HermitianAndOrderTagged) {
  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  c.cat_alpha_sq = 5.0;
  c.u = 0.01;
  for (int order : {4, 6, 8}) {
    c.truncation_order = order;
    const HP H = build_interaction_hamiltonian(c);
    EXPECT_TRUE(H.tagged());
    EXPECT_LT((H - H.adjoint()).max_abs(), 1e-14);
    EXPECT_LE(H.max_order(), order);
    EXPECT_LE(H.max_degree(), order - 1);
  }
}

TEST(Hamiltonian, ExchangeTermCarriesG31) {
  CircuitConfig c;
  c.eps_p = 0.3;
  c.truncation_order = 4;
  const Drive dr = c.undressed_drive();
  const HP H = build_interaction_hamiltonian(c, dr);
  // a^2 b+ is static in the rotating frame: 3 r g31 e^{i wp t} e^{-i(wd+wp)t} e^{i wd t}.
  EXPECT_NEAR(std::abs(H.coefficient({0, 2, 1, 0}) - 3.0 * c.r() * coupling_g(3, 1, c)), 0.0, 1e-15);
}

TEST(Hamiltonian, UndressedDriveFrequencies) {
  const CircuitConfig c;
  const Drive d = c.undressed_drive();
  EXPECT_NEAR(to_ghz(d.omega_p), 0.95, 1e-12);
  EXPECT_NEAR(to_ghz(d.omega_d), 7.05, 1e-12);
  EXPECT_NEAR(c.delta(d), 0.0, 1e-12);
  EXPECT_NEAR(c.Delta(d), 0.0, 1e-12);
}

TEST(Hamiltonian, ValidationRejectsBadInput) {
  CircuitConfig c;
  c.phi_a = -0.1;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.dims = {2, 2};
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.phi_b = 0.7;
  const auto log = validate(c);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].kind, "ValidityGuard");
}

TEST(FluxCancel, AnalyticRatio) {
  CircuitConfig c;
  c.E_Leta_eff = ghz(62.4);
  c.E_Leps_eff = 0.0;
  EXPECT_NEAR(flux_cancel_ratio(c), -2.0 * 37.0 / 62.4, 1e-14);
  EXPECT_NEAR(flux_cancel_ratio(c), -1.186, 5e-4);
}

TEST(FluxCancel, ExactRatioNullsG11) {
  CircuitConfig c;
  c.E_Leta_eff = ghz(62.4);
  c.eps_p = eps_p_for_g2_fraction(0.1);
  c.eta_p = flux_cancel_ratio_exact(c) * c.eps_p;
  EXPECT_LT(std::abs(flux_cancel_g11(c)), 1e-14 * std::abs(coupling_g(1, 1, c)));
  // At small pump the exact and analytic ratios agree to O(eps^2).
  c.eps_p = 1e-4;
  EXPECT_NEAR(flux_cancel_ratio_exact(c) / std::exp(-0.5 * (c.phi_a * c.phi_a + c.phi_b * c.phi_b)),
              flux_cancel_ratio(c), 1e-8);
}

TEST(NormalModes, TransformDiagonalizesQuadraticForm) {
  const NormalModeData nm = normal_modes(RawCircuit{});
  const auto q = transformed_quadratic_form(nm);
  const double scale = std::max(nm.omega_a, nm.omega_b);
  EXPECT_NEAR(q[2], 0.0, 1e-12 * scale);
  EXPECT_NEAR(q[5], 0.0, 1e-12 * scale);
  EXPECT_NEAR(q[0], nm.omega_a / 4.0, 1e-12 * scale);
  EXPECT_NEAR(q[3], nm.omega_a / 4.0, 1e-12 * scale);
  EXPECT_NEAR(q[1], nm.omega_b / 4.0, 1e-12 * scale);
  EXPECT_NEAR(q[4], nm.omega_b / 4.0, 1e-12 * scale);
}

TEST(NormalModes, CanonicalPairsPreserved) {
  // [x_i, y_j] = 2i delta_ij requires u^T v = 1 for the mode matrices.
  const NormalModeData nm = normal_modes(RawCircuit{});
  EXPECT_NEAR(nm.u_0a * nm.v_0a + nm.u_Aa * nm.v_Aa, 1.0, 1e-12);
  EXPECT_NEAR(nm.u_0b * nm.v_0b + nm.u_Ab * nm.v_Ab, 1.0, 1e-12);
  EXPECT_NEAR(nm.u_0a * nm.v_0b + nm.u_Aa * nm.v_Ab, 0.0, 1e-12);
  EXPECT_NEAR(nm.u_0b * nm.v_0a + nm.u_Ab * nm.v_Aa, 0.0, 1e-12);
}

TEST(NormalModes, EigenfrequenciesOfCoupledOscillators) {
  // Independent route: eigenvalues of the 2x2 dynamical matrix of the bare pair.
  const NormalModeData nm = normal_modes(RawCircuit{});
  Eigen::Matrix2d D;
  D << nm.omega_0 * nm.omega_0, 2.0 * nm.E_g * std::sqrt(nm.omega_0 * nm.omega_A), 2.0 * nm.E_g * std::sqrt(nm.omega_0 * nm.omega_A),
      nm.omega_A * nm.omega_A;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(D);
  const double lo = std::sqrt(es.eigenvalues()(0)), hi = std::sqrt(es.eigenvalues()(1));
  EXPECT_NEAR(std::min(nm.omega_a, nm.omega_b), lo, 1e-10 * hi);
  EXPECT_NEAR(std::max(nm.omega_a, nm.omega_b), hi, 1e-10 * hi);
}

TEST(NormalModes, DisplacementSatisfiesConstraints) {
  const NormalModeData nm = normal_modes(RawCircuit{});
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  for (int t = 0; t < 10; ++t) {
    const double eps = U(rng), eta = U(rng), sig = -0.5 * pi + U(rng), del = U(rng);
    const double wp = ghz(0.95);
    const DisplacementSolution d = displacement_solution(nm, eps, eta, wp, sig, del);
    EXPECT_LT(constraint_residuals(nm, d, eps, eta, wp, sig, del).max(), 1e-10);
  }
}

TEST(NormalModes, FluxSetpointNullsStaticInductiveTerm) {
  const NormalModeData nm = normal_modes(RawCircuit{});
  const FluxSetpoints s = dc_flux_setpoints(nm);
  EXPECT_DOUBLE_EQ(s.phi_Sigma0, -0.5 * pi);
  EXPECT_NEAR(displacement_solution(nm, 0, 0, 0, s.phi_Sigma0, s.phi_Delta0).E_L0, 0.0, 1e-10);
}

TEST(NormalModes, SymmetricJunctionsDecoupleSigma) {
  const NormalModeData nm = normal_modes(RawCircuit{});
  EXPECT_DOUBLE_EQ(nm.p_Sigma, 0.0);
  RawCircuit r;
  r.C_J1 = 44.0;
  EXPECT_GT(std::abs(normal_modes(r).p_Sigma), 0.0);
}

TEST(NormalModes, InductiveDriveIsLinear) {
  const NormalModeData nm = normal_modes(RawCircuit{});
  const FluxSetpoints s = dc_flux_setpoints(nm);
  const double wp = ghz(0.95);
  const auto k = inductive_drive_coefficients(nm, wp);
  const cplx e = displacement_solution(nm, 0.13, -0.07, wp, s.phi_Sigma0, s.phi_Delta0).E_L_eff;
  EXPECT_NEAR(std::abs(e - (k.E_Leps * 0.13 + k.E_Leta * -0.07)), 0.0, 1e-10 * std::abs(e));
}

TEST(NormalModes, InvalidInputs) {
  RawCircuit r;
  r.C_0 = -1;
  EXPECT_THROW(normal_modes(r), ConfigError);
  WarningLog log;
  RawCircuit big;
  big.C_L = 10.0;
  normal_modes(big, &log);
  ASSERT_FALSE(log.empty());
  EXPECT_EQ(log[0].kind, "LargeInductanceCapacitance");
}

TEST(OrderEstimates, AsymmetryAndFluxTolerance) {
  const auto a = junction_asymmetry_order(0.01);
  EXPECT_EQ(a.induced_order, 2);
  EXPECT_EQ(a.leading_term_order, 6);
  const auto f = dc_flux_tolerance(0.1);
  EXPECT_EQ(f.induced_order, 3);
  EXPECT_NEAR(f.tolerance, 1e-3, 1e-15);
}
