#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "errors.hpp"
#include "polynomial.hpp"
#include "units.hpp"

namespace catpump {

// All frequencies and energies are stored as angular frequencies in rad/ns.
struct CircuitConfig {
  double omega_a = ghz(4.0);
  double omega_b = ghz(7.05);
  double E_J = ghz(37.0);
  double E_L = ghz(62.4);
  double E_Leta_eff = ghz(62.4);
  double E_Leps_eff = 0.0;
  double phi_a = 0.11;
  double phi_b = 0.2;
  double eps_p = 0.0;
  double eta_p = 0.0;
  double eps_d = 0.0;
  // When >= 0, eps_d is derived as |g2| * cat_alpha_sq at build time.
  double cat_alpha_sq = -1.0;
  double u = 0.0;
  double kappa_b = ghz(0.1);
  double temperature = 0.0;
  int truncation_order = 6;
  FockDims dims{20, 11};
  std::optional<double> omega_p;
  std::optional<double> omega_d;
  double guard_factor = 10.0;

  double r() const { return phi_b / phi_a; }
  // Undressed resonance 2 omega_a = omega_b + omega_p, omega_d = omega_b.
  Drive undressed_drive() const { return {2.0 * omega_a - omega_b, omega_b}; }
  Drive drive() const {
    const Drive u0 = undressed_drive();
    return {omega_p.value_or(u0.omega_p), omega_d.value_or(u0.omega_d)};
  }
  double delta(const Drive& d) const { return omega_a - 0.5 * (d.omega_p + d.omega_d); }
  double Delta(const Drive& d) const { return omega_b - d.omega_d; }
};

inline WarningLog validate(const CircuitConfig& c) {
  WarningLog log;
  auto in_range = [&](double v, const char* name) {
    if (!(v >= 0.0 && v < pi)) throw ConfigError(std::string(name) + " must lie in [0, pi)");
    if (v > 0.5) warn(&log, "ValidityGuard", std::string(name) + " > 0.5, lambda expansion suspect", v);
  };
  if (!(c.phi_a > 0.0)) throw ConfigError("phi_a must be positive");
  if (!(c.phi_b > 0.0)) throw ConfigError("phi_b must be positive");
  in_range(c.phi_a, "phi_a");
  in_range(c.phi_b, "phi_b");
  in_range(c.eps_p, "eps_p");
  if (!(c.kappa_b > 0.0)) throw ConfigError("kappa_b must be positive");
  if (c.dims.na < 4 || c.dims.nb < 2) throw ConfigError("fock dims must be at least (4, 2)");
  if (c.truncation_order < 2 || c.truncation_order > 12)
    throw ConfigError("truncation_order outside supported range");
  return log;
}

inline double josephson_dressing(const CircuitConfig& c) {
  return std::exp(-0.5 * (c.phi_a * c.phi_a + c.phi_b * c.phi_b));
}

// Coefficient of e^{i k omega_p t} :(x_a + r x_b)^n: in the interaction Hamiltonian.
inline cplx coupling_g(int n, int k, const CircuitConfig& c) {
  if (n < 1 || k < 1 || n % 2 == 0 || k % 2 == 0)
    throw ConfigError("coupling_g requires odd positive n and k");
  const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return -2.0 * I * sign / fact * c.E_J * josephson_dressing(c) * std::cyl_bessel_j(k, c.eps_p) *
         std::pow(c.phi_a, n);
}

inline int coupling_order(int n, int k) { return n + k; }

// |g2| = |3 r g_{3,1}| = E_J J_1(eps_p) phi_a^2 phi_b e^{-(phi_a^2+phi_b^2)/2}
inline double g2_abs(const CircuitConfig& c) {
  return c.E_J * josephson_dressing(c) * std::abs(std::cyl_bessel_j(1, c.eps_p)) * c.phi_a *
         c.phi_a * c.phi_b;
}

// First maximum of J_1: root of J_1'(x) = J_0(x) - J_1(x)/x on (1, 2.5).
inline double bessel_j1_argmax() {
  auto dj = [](double x) { return std::cyl_bessel_j(0, x) - std::cyl_bessel_j(1, x) / x; };
  double lo = 1.0, hi = 2.5;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dj(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double g2_max(const CircuitConfig& c) {
  CircuitConfig t = c;
  t.eps_p = bessel_j1_argmax();
  return g2_abs(t);
}

// eps_p on the rising branch with |g2| = frac * g2max.
inline double eps_p_for_g2_fraction(double frac) {
  if (!(frac >= 0.0 && frac <= 1.0)) throw ConfigError("g2 fraction must lie in [0, 1]");
  const double xmax = bessel_j1_argmax();
  const double target = frac * std::cyl_bessel_j(1, xmax);
  double lo = 0.0, hi = xmax;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::cyl_bessel_j(1, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double effective_eps_d(const CircuitConfig& c) {
  return c.cat_alpha_sq >= 0.0 ? g2_abs(c) * c.cat_alpha_sq : c.eps_d;
}

namespace detail {

inline constexpr int kDriveOrder = 4;
inline constexpr int kDetuningOrder = 4;

inline LatticeFrequency rot_a() { return {-1, -1}; }
inline LatticeFrequency rot_b() { return {0, -2}; }

// Symbol of x_a(t) + r x_b(t) in the interaction picture.
inline HarmonicPolynomial quadrature_sum(double r) {
  using HP = HarmonicPolynomial;
  return HP::a(rot_a()) + HP::adag(-rot_a()) + r * (HP::b(rot_b()) + HP::bdag(-rot_b()));
}

// Commutative product of symbols; equals normal ordering of the operator power.
inline HarmonicPolynomial symbol_power(const HarmonicPolynomial& x, int n) {
  HarmonicPolynomial out = HarmonicPolynomial::constant(1.0);
  for (int i = 0; i < n; ++i) {
    std::unordered_map<std::uint64_t, cplx> acc;
    for (const auto& [ka, ca] : out.entries())
      for (const auto& [kb, cb] : x.entries()) {
        const Monomial A = key_mon(ka), B = key_mon(kb);
        acc[pack({A.m + B.m, A.n + B.n, A.p + B.p, A.q + B.q}, key_freq(ka) + key_freq(kb), 0)] +=
            ca * cb;
      }
    out = HarmonicPolynomial::from_map(acc, true);
  }
  return out;
}

inline HarmonicPolynomial g_ology(const CircuitConfig& c, bool flux_cancel) {
  HarmonicPolynomial H;
  const HarmonicPolynomial X = quadrature_sum(c.r());
  const int order = c.truncation_order;
  for (int n = 1; n + 1 <= order; n += 2) {
    const HarmonicPolynomial Xn = symbol_power(X, n);
    for (int k = 1; n + k <= order; k += 2) {
      cplx g = coupling_g(n, k, c);
      if (flux_cancel && n == 1 && k == 1) {
        // Josephson part keeps the e^{-phi^2/2} dressing; the inductive drive does not.
        const double EL_eff = c.E_Leps_eff * c.eps_p + c.E_Leta_eff * c.eta_p;
        g += EL_eff / (2.0 * I) * c.phi_a;
      }
      if (g == cplx{}) continue;
      const auto piece =
          star_product(g * Xn, HarmonicPolynomial::term({}, {2 * k, 0}, 1.0)).with_order(n + k);
      H += piece + piece.adjoint();
    }
  }
  return H;
}

}  // namespace detail

// Interaction-picture system Hamiltonian; a rotates at (omega_d+omega_p)/2, b at omega_d.
inline HarmonicPolynomial build_interaction_hamiltonian(const CircuitConfig& c, const Drive& dr,
                                                        bool flux_cancel = false) {
  using HP = HarmonicPolynomial;
  HP H;
  const double d = c.delta(dr), D = c.Delta(dr);
  if (d != 0.0) H += HP::term({1, 1, 0, 0}, {}, d, detail::kDetuningOrder);
  if (D != 0.0) H += HP::term({0, 0, 1, 1}, {}, D, detail::kDetuningOrder);

  const double eps_d = effective_eps_d(c);
  if (eps_d != 0.0) {
    const HP cosd = 0.5 * (HP::term({}, {0, 2}, 1.0) + HP::term({}, {0, -2}, 1.0));
    HP y = -I * (HP::b(detail::rot_b()) - HP::bdag(-detail::rot_b()));
    if (c.u != 0.0) y += -I * c.u * (HP::a(detail::rot_a()) - HP::adag(-detail::rot_a()));
    H += (eps_d * star_product(cosd, y)).with_order(detail::kDriveOrder);
  }
  H += detail::g_ology(c, flux_cancel);
  return H;
}

inline HarmonicPolynomial build_interaction_hamiltonian(const CircuitConfig& c) {
  return build_interaction_hamiltonian(c, c.drive(), false);
}

inline HarmonicPolynomial build_interaction_hamiltonian_flux_cancel(const CircuitConfig& c,
                                                                    const Drive& dr) {
  if (c.E_Leta_eff == 0.0) throw ConfigError("flux cancellation requires E_Leta_eff != 0");
  return build_interaction_hamiltonian(c, dr, true);
}

// g_{1,1} in the flux-cancel variant.
inline cplx flux_cancel_g11(const CircuitConfig& c) {
  const double EL_eff = c.E_Leps_eff * c.eps_p + c.E_Leta_eff * c.eta_p;
  return coupling_g(1, 1, c) + EL_eff / (2.0 * I) * c.phi_a;
}

// Small-eps_p cancellation ratio eta_p/eps_p = (-2 E_J - E_Leps)/E_Leta.
inline double flux_cancel_ratio(const CircuitConfig& c) {
  return (-2.0 * c.E_J - c.E_Leps_eff) / c.E_Leta_eff;
}

// Ratio at which g_{1,1} vanishes exactly at the configured eps_p.
inline double flux_cancel_ratio_exact(const CircuitConfig& c) {
  const double j1 = std::cyl_bessel_j(1, c.eps_p) / c.eps_p;
  return (-4.0 * c.E_J * josephson_dressing(c) * j1 - c.E_Leps_eff) / c.E_Leta_eff;
}

// y_b + u y_a in the interaction picture; untouched by lambda counting.
inline HarmonicPolynomial build_system_bath(const CircuitConfig& c) {
  using HP = HarmonicPolynomial;
  HP y = -I * (HP::b(detail::rot_b()) - HP::bdag(-detail::rot_b()));
  if (c.u != 0.0) y += -I * c.u * (HP::a(detail::rot_a()) - HP::adag(-detail::rot_a()));
  return y;
}

}  // namespace catpump
