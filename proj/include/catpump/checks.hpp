#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "floquet.hpp"
#include "lindblad.hpp"
#include "polynomial.hpp"
#include "swpt.hpp"

namespace catpump {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0, tolerance = 0;
};

namespace detail {

inline HarmonicPolynomial sample_poly(std::mt19937& rng, int max_deg, int nterms) {
  std::uniform_int_distribution<int> e(0, max_deg), fr(-2, 2);
  std::normal_distribution<double> g;
  HarmonicPolynomial f;
  for (int i = 0; i < nterms; ++i) {
    Monomial mo{e(rng), e(rng), e(rng), e(rng)};
    while (mo.degree() > max_deg) {
      if (mo.m) --mo.m;
      else if (mo.n) --mo.n;
      else if (mo.p) --mo.p;
      else --mo.q;
    }
    f += HarmonicPolynomial::term(mo, {fr(rng), fr(rng)}, {g(rng), g(rng)}, 0);
  }
  return f;
}

inline Eigen::MatrixXcd matrix_at(const HarmonicPolynomial& f, FockDims d, LatticeFrequency w) {
  const auto m = to_matrix(f, d);
  const auto it = m.find(w);
  return it == m.end() ? Eigen::MatrixXcd::Zero(d.size(), d.size()) : it->second;
}

// Relative error on the block at least `margin` away from the Fock edge.
inline double interior_error(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, FockDims d, int margin) {
  double err = 0, scale = 0;
  for (int i = 0; i < d.size(); ++i)
    for (int j = 0; j < d.size(); ++j) {
      if (i / d.nb + margin >= d.na || i % d.nb + margin >= d.nb) continue;
      if (j / d.nb + margin >= d.na || j % d.nb + margin >= d.nb) continue;
      err = std::max(err, std::abs(A(i, j) - B(i, j)));
      scale = std::max(scale, std::abs(B(i, j)));
    }
  return err / std::max(scale, 1e-300);
}

}  // namespace detail

// Fast invariant suite behind `catpump check`.
inline std::vector<CheckResult> run_property_suite() {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double value, double tol) { out.push_back({std::move(name), value <= tol, value, tol}); };
  std::mt19937 rng(12345);

  {
    const FockDims d{12, 12};
    double worst = 0;
    for (int trial = 0; trial < 4; ++trial) {
      const auto f = detail::sample_poly(rng, 3, 4), g = detail::sample_poly(rng, 3, 4);
      const auto fg = star_product(f, g);
      for (const auto& [w, M] : to_matrix(fg, d)) {
        Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(d.size(), d.size());
        for (const auto& [wf, F] : to_matrix(f, d))
          for (const auto& [wg, G] : to_matrix(g, d))
            if (wf + wg == w) ref += F * G;
        worst = std::max(worst, detail::interior_error(M, ref, d, 4));
      }
    }
    add("star product matches Fock matrix product", worst, 1e-12);
  }
  {
    const auto A = detail::sample_poly(rng, 2, 3), B = detail::sample_poly(rng, 2, 3), C = detail::sample_poly(rng, 2, 3);
    const auto J = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) + commutator(C, commutator(A, B));
    add("commutator Jacobi identity", J.max_abs(), 1e-10);
  }

  CircuitConfig c;
  c.eps_p = eps_p_for_g2_fraction(0.1);
  const MatchResult m = match_frequencies(c);
  const Derivation d = derive(c, m.drive);
  add("effective Hamiltonian is hermitian", (d.swpt.K - d.swpt.K.adjoint()).max_abs(), 1e-12);
  {
    double worst = 0;
    for (const auto& t : d.swpt.K.terms())
      if (t.mon.delta_Nd() != 0) worst = std::max(worst, std::abs(t.c));
    add("effective Hamiltonian conserves N_d", worst, 1e-14);
  }
  {
    // delta' comes from g11 g31 (lambda^6); g2 from g31 alone (lambda^4).
    const double dp = delta_prime_closed_form(coupling_g(1, 1, c), coupling_g(3, 1, c), c.r(), m.drive);
    add("delta' equals closed form at order 6", std::abs(d.couplings.delta_p - dp) / std::abs(dp), 1e-12);
    add("Delta' equals r^2 delta' at order 6",
        std::abs(d.couplings.Delta_p - c.r() * c.r() * dp) / std::abs(c.r() * c.r() * dp), 1e-12);
    CircuitConfig c4 = c;
    c4.truncation_order = 4;
    const Derivation d4 = derive(c4, m.drive);
    const double g2 = std::abs(3.0 * c4.r() * coupling_g(3, 1, c4));
    add("|g2| equals 3 r |g31| at order 4", std::abs(std::abs(d4.couplings.g2) - g2) / g2, 1e-12);
  }
  {
    CircuitConfig c0;
    const Derivation d0 = derive(c0, c0.undressed_drive());
    const auto em = emission_channels(d0.catalog);
    double dev = 1.0;
    if (em.size() == 1) {
      const auto& ch = em.front();
      const auto it = ch.rate_weight.find(Monomial{0, 0, 0, 1});
      dev = (ch.rate_weight.size() == 1 && it != ch.rate_weight.end()) ? std::abs(it->second - 1.0) : 1.0;
      dev = std::max(dev, std::abs(ch.omega - c0.omega_b) / c0.omega_b);
    }
    add("zero-pump catalog is the bare buffer decay", dev, 1e-12);
  }
  {
    CircuitConfig c0;
    c0.dims = {8, 5};
    FloquetOptions o;
    o.steps_per_period = 512;
    o.max_Nd = 4;
    const auto p = FloquetParams::from(c0, 0.0, c0.undressed_drive().omega_p, c0.omega_b);
    const FloquetSolution sol = floquet_solve(p, o);
    const RateMatrix rm = rate_matrix(sol, 0.0, BathSpectrum::zero_t(c0.kappa_b));
    double worst = 0;
    for (std::size_t i = 0; i < rm.labels.size(); ++i)
      for (std::size_t j = 0; j < rm.labels.size(); ++j) {
        if (i == j) continue;
        const bool decay = rm.labels[j].na == rm.labels[i].na && rm.labels[j].nb == rm.labels[i].nb - 1;
        const double ref = decay ? rm.labels[i].nb * c0.kappa_b : 0.0;
        worst = std::max(worst, std::abs(rm.gamma(i, j) - ref) / c0.kappa_b);
      }
    add("zero-pump Floquet rates equal n_b kappa_b", worst, 1e-10);
    add("Floquet propagator unitarity", sol.unitarity_defect, 1e-8);
  }
  {
    const double g = to_mhz(g2_max(CircuitConfig{}));
    add("g2 maximum near 50.8 MHz", std::abs(g - 50.8), 0.3);
  }
  return out;
}

}  // namespace catpump
