#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "circuit.hpp"
#include "errors.hpp"
#include "units.hpp"

namespace catpump {

// Capacitances in fF, energies in GHz (h = 1) as read from config files.
struct RawCircuit {
  double C_0 = 60.0;
  double C_J1 = 40.0;
  double C_J3 = 40.0;
  double C_L = 0.5;
  double E_L0 = 40.0;
  double E_L = 62.4;
  double E_J1 = 37.0;
  double E_J3 = 37.0;
  // Ratio v_4a / v_4b of the gate charge coupling; becomes u.
  double gate_ratio = 0.0;
};

struct NormalModeData {
  double omega_0 = 0, omega_A = 0, E_g = 0;
  double phi_0 = 0, phi_ATS = 0;
  double omega_a = 0, omega_b = 0;
  double theta = 0;
  double s1 = 0, s2 = 0, s3 = 0;
  double u_0a = 0, u_0b = 0, u_Aa = 0, u_Ab = 0;
  double v_0a = 0, v_0b = 0, v_Aa = 0, v_Ab = 0;
  double phi_a = 0, phi_b = 0;
  double E_Sigma_a = 0, E_Sigma_b = 0, E_Delta_a = 0, E_Delta_b = 0;
  double p_Sigma = 0;
  double E_J = 0;
  double u = 0;
  double r() const { return phi_b / phi_a; }
};

struct DisplacementSolution {
  double x_a0 = 0, x_b0 = 0;
  cplx x_ap{}, x_bp{}, y_ap{}, y_bp{};
  double E_L0 = 0;
  cplx E_L_eff{};
};

namespace detail {

// e^2 / (2 h C) in GHz for C in fF.
inline double charging_energy_ghz(double C_fF) {
  constexpr double e = 1.602176634e-19, h = 6.62607015e-34;
  return e * e / (2.0 * h * C_fF * 1e-15) * 1e-9;
}

}  // namespace detail

inline NormalModeData normal_modes(const RawCircuit& raw, WarningLog* log = nullptr) {
  for (double v : {raw.C_0, raw.C_J1, raw.C_J3, raw.C_L, raw.E_L0, raw.E_L, raw.E_J1, raw.E_J3})
    if (!(v > 0.0)) throw ConfigError("raw circuit parameters must be positive");
  if (raw.C_L / std::min(raw.C_J1, raw.C_J3) > 0.05)
    warn(log, "LargeInductanceCapacitance", "C_L/C_J above 0.05, C_L -> 0 limit suspect",
         raw.C_L / std::min(raw.C_J1, raw.C_J3));

  NormalModeData nm;
  const double c = raw.C_J1 / raw.C_J3;
  const double EC0 = ghz(detail::charging_energy_ghz(raw.C_0));
  const double ECA = ghz(detail::charging_energy_ghz(raw.C_J1 + raw.C_J3));
  const double EL0 = ghz(raw.E_L0), EL = ghz(raw.E_L), ELA = EL0 + EL;

  nm.phi_0 = std::pow(2.0 * EC0 / EL0, 0.25);
  nm.phi_ATS = std::pow(2.0 * ECA / ELA, 0.25);
  nm.omega_0 = std::sqrt(8.0 * EC0 * EL0);
  nm.omega_A = std::sqrt(8.0 * ECA * ELA);
  nm.E_g = -nm.phi_0 * nm.phi_ATS * EL0;
  nm.E_J = ghz(0.5 * (raw.E_J1 + raw.E_J3));
  nm.p_Sigma = (c - 1.0) / (c + 1.0);
  nm.u = raw.gate_ratio;

  const double w0 = nm.omega_0, wA = nm.omega_A, Eg = nm.E_g;
  const double num = 4.0 * Eg * std::sqrt(w0 * wA), den = wA * wA - w0 * w0;
  if (std::abs(den) < 1e-12 * wA * wA) {
    if (Eg != 0.0) throw DegenerateModes("bare modes degenerate with nonzero coupling");
    nm.theta = 0.0;
  } else {
    nm.theta = 0.5 * std::atan(num / den);
  }
  const double th = nm.theta, ct = std::cos(th), st = std::sin(th), s2t = std::sin(2.0 * th);
  nm.omega_a = std::sqrt(w0 * w0 * ct * ct + wA * wA * st * st - 2.0 * Eg * std::sqrt(w0 * wA) * s2t);
  nm.omega_b = std::sqrt(wA * wA * ct * ct + w0 * w0 * st * st + 2.0 * Eg * std::sqrt(w0 * wA) * s2t);
  nm.s1 = std::pow(wA / w0, 0.25);
  nm.s2 = std::pow(nm.omega_a * nm.omega_a / (w0 * wA), 0.25);
  nm.s3 = std::pow(nm.omega_b * nm.omega_b / (w0 * wA), 0.25);

  const double s1 = nm.s1, s2 = nm.s2, s3 = nm.s3;
  nm.v_0a = s1 * s2 * ct;
  nm.v_0b = s1 * s3 * st;
  nm.v_Aa = -s2 * st / s1;
  nm.v_Ab = s3 * ct / s1;
  nm.u_0a = ct / (s1 * s2);
  nm.u_0b = st / (s1 * s3);
  nm.u_Aa = -s1 * st / s2;
  nm.u_Ab = s1 * ct / s3;

  const double ES0 = nm.phi_0 * 2.0 / (c + 1.0) * EL0;
  const double ESA = nm.phi_ATS * (-2.0 * EL0 / (c + 1.0) + EL * (c - 1.0) / (c + 1.0));
  const double EDA = -nm.phi_ATS * EL;
  nm.E_Sigma_a = ES0 * nm.u_0a + ESA * nm.u_Aa;
  nm.E_Sigma_b = ES0 * nm.u_0b + ESA * nm.u_Ab;
  nm.E_Delta_a = EDA * nm.u_Aa;
  nm.E_Delta_b = EDA * nm.u_Ab;
  nm.phi_a = nm.phi_ATS * nm.u_Aa;
  nm.phi_b = nm.phi_ATS * nm.u_Ab;
  return nm;
}

// Quadratic form of the bare Hamiltonian after substituting the u/v transform:
// returns (coefficient of x_a^2, x_b^2, x_a x_b, y_a^2, y_b^2, y_a y_b).
inline std::array<double, 6> transformed_quadratic_form(const NormalModeData& nm) {
  const double w0 = nm.omega_0 / 4.0, wA = nm.omega_A / 4.0;
  return {w0 * nm.u_0a * nm.u_0a + wA * nm.u_Aa * nm.u_Aa + nm.E_g * nm.u_0a * nm.u_Aa,
          w0 * nm.u_0b * nm.u_0b + wA * nm.u_Ab * nm.u_Ab + nm.E_g * nm.u_0b * nm.u_Ab,
          2.0 * (w0 * nm.u_0a * nm.u_0b + wA * nm.u_Aa * nm.u_Ab) +
              nm.E_g * (nm.u_0a * nm.u_Ab + nm.u_0b * nm.u_Aa),
          w0 * nm.v_0a * nm.v_0a + wA * nm.v_Aa * nm.v_Aa,
          w0 * nm.v_0b * nm.v_0b + wA * nm.v_Ab * nm.v_Ab,
          2.0 * (w0 * nm.v_0a * nm.v_0b + wA * nm.v_Aa * nm.v_Ab)};
}

// Displacement that cancels the pump in the cosine argument. The oscillating
// amplitudes are solved directly from the constraint system; see README for the
// sign convention.
inline DisplacementSolution displacement_solution(const NormalModeData& nm, double eps_p,
                                                  double eta_p, double omega_p,
                                                  double phi_Sigma0, double phi_Delta0,
                                                  double kappa_b = ghz(0.1)) {
  DisplacementSolution d;
  const double pa = nm.phi_a, pb = nm.phi_b, wa = nm.omega_a, wb = nm.omega_b, ps = nm.p_Sigma;
  const double static_den = wa * pb * pb + wb * pa * pa;
  d.x_a0 = (-wb * ps * pa * phi_Sigma0 - 0.5 * pi * wb * pa - 2.0 * nm.E_Delta_a * pb * pb * phi_Delta0 +
            2.0 * nm.E_Delta_b * pa * pb * phi_Delta0 - 2.0 * nm.E_Sigma_a * pb * pb * phi_Sigma0 +
            2.0 * nm.E_Sigma_b * pa * pb * phi_Sigma0) /
           static_den;
  d.x_b0 = (-wa * ps * pb * phi_Sigma0 - 0.5 * pi * wa * pb + 2.0 * nm.E_Delta_a * pa * pb * phi_Delta0 -
            2.0 * nm.E_Delta_b * pa * pa * phi_Delta0 + 2.0 * nm.E_Sigma_a * pa * pb * phi_Sigma0 -
            2.0 * nm.E_Sigma_b * pa * pa * phi_Sigma0) /
           static_den;

  const double Wa = wa - 4.0 * omega_p * omega_p / wa;
  const double Wb = wb - 4.0 * omega_p * omega_p / wb;
  const double den = Wa * pb * pb + Wb * pa * pa;
  if (std::abs(den) < 10.0 * kappa_b * std::max(pa * pa, pb * pb))
    throw ResonantDisplacement("pump displacement denominator near zero");
  const double Sa = nm.E_Sigma_a * eps_p + nm.E_Delta_a * eta_p;
  const double Sb = nm.E_Sigma_b * eps_p + nm.E_Delta_b * eta_p;
  d.x_ap = (2.0 * pa * pb * Sb - 2.0 * pb * pb * Sa - Wb * pa * ps * eps_p) / den;
  d.x_bp = (2.0 * pa * pb * Sa - 2.0 * pa * pa * Sb - Wa * pb * ps * eps_p) / den;
  d.y_ap = omega_p / wa * d.x_ap;
  d.y_bp = omega_p / wb * d.x_bp;

  d.E_L0 = (wa * d.x_a0 + 2.0 * nm.E_Delta_a * phi_Delta0 + 2.0 * nm.E_Sigma_a * phi_Sigma0) / (2.0 * pa);
  d.E_L_eff = (-wa * d.x_ap - 2.0 * nm.E_Delta_a * eta_p - 2.0 * nm.E_Sigma_a * eps_p +
               4.0 * d.y_ap * omega_p) /
              (2.0 * pa);
  return d;
}

// Residuals of the five displacement constraints: static and e^{i w_p t} parts.
struct ConstraintResiduals {
  double phase_static = 0, phase_osc = 0;
  double charge_a = 0, charge_b = 0;
  double inductive_static = 0, inductive_osc = 0;
  double max() const {
    return std::max({phase_static, phase_osc, charge_a, charge_b, inductive_static, inductive_osc});
  }
};

inline ConstraintResiduals constraint_residuals(const NormalModeData& nm, const DisplacementSolution& d,
                                                double eps_p, double eta_p, double omega_p,
                                                double phi_Sigma0, double phi_Delta0) {
  ConstraintResiduals r;
  const double pa = nm.phi_a, pb = nm.phi_b;
  r.phase_static = std::abs(d.x_a0 * pa + d.x_b0 * pb + nm.p_Sigma * phi_Sigma0 + 0.5 * pi);
  // x^disp carries x^p/(2i) at e^{i w_p t}, phi_Sigma carries eps_p/(2i).
  r.phase_osc = std::abs(d.x_ap * pa + d.x_bp * pb + nm.p_Sigma * eps_p);
  // d/dt of x^p e^{iwt}/(2i) is w x^p/2; must equal (omega/2) y^p.
  r.charge_a = std::abs(omega_p * d.x_ap - nm.omega_a * d.y_ap);
  r.charge_b = std::abs(omega_p * d.x_bp - nm.omega_b * d.y_bp);
  const double la = nm.E_Sigma_a * phi_Sigma0 + nm.E_Delta_a * phi_Delta0 + 0.5 * nm.omega_a * d.x_a0;
  const double lb = nm.E_Sigma_b * phi_Sigma0 + nm.E_Delta_b * phi_Delta0 + 0.5 * nm.omega_b * d.x_b0;
  r.inductive_static = std::abs(pb * la - pa * lb);
  // e^{iwt} coefficient times 2i; ydot contributes 2i * i w y^p.
  const cplx oa = nm.E_Sigma_a * eps_p + nm.E_Delta_a * eta_p + 0.5 * nm.omega_a * d.x_ap -
                  2.0 * omega_p * d.y_ap;
  const cplx ob = nm.E_Sigma_b * eps_p + nm.E_Delta_b * eta_p + 0.5 * nm.omega_b * d.x_bp -
                  2.0 * omega_p * d.y_bp;
  r.inductive_osc = std::abs(pb * oa - pa * ob);
  return r;
}

struct FluxSetpoints {
  double phi_Sigma0 = -0.5 * pi;
  double phi_Delta0 = 0.0;
};

// phi_Sigma0 = -pi/2; E_L0 is affine in phi_Delta0, so two evaluations fix the root.
inline FluxSetpoints dc_flux_setpoints(const NormalModeData& nm) {
  FluxSetpoints s;
  const double wp_dummy = 0.0;
  const double e0 = displacement_solution(nm, 0, 0, wp_dummy, s.phi_Sigma0, 0.0).E_L0;
  const double e1 = displacement_solution(nm, 0, 0, wp_dummy, s.phi_Sigma0, 1.0).E_L0;
  const double slope = e1 - e0;
  if (std::abs(slope) < 1e-14 * std::max(1.0, std::abs(e0)))
    throw NoSolution("E_L0 independent of phi_Delta0");
  s.phi_Delta0 = -e0 / slope;
  return s;
}

// E_L_eff = E_Leps * eps_p + E_Leta * eta_p.
struct InductiveDriveCoefficients {
  double E_Leps = 0, E_Leta = 0;
};

inline InductiveDriveCoefficients inductive_drive_coefficients(const NormalModeData& nm,
                                                               double omega_p) {
  const FluxSetpoints s = dc_flux_setpoints(nm);
  const cplx ce = displacement_solution(nm, 1.0, 0.0, omega_p, s.phi_Sigma0, s.phi_Delta0).E_L_eff;
  const cplx cn = displacement_solution(nm, 0.0, 1.0, omega_p, s.phi_Sigma0, s.phi_Delta0).E_L_eff;
  return {ce.real(), cn.real()};
}

// High-level config from the raw pipeline; mode signs chosen so phi_a, phi_b > 0.
inline CircuitConfig to_circuit_config(const NormalModeData& nm, double omega_p) {
  CircuitConfig c;
  c.omega_a = nm.omega_a;
  c.omega_b = nm.omega_b;
  c.E_J = nm.E_J;
  c.phi_a = std::abs(nm.phi_a);
  c.phi_b = std::abs(nm.phi_b);
  c.u = nm.u;
  const auto k = inductive_drive_coefficients(nm, omega_p);
  c.E_Leps_eff = k.E_Leps;
  c.E_Leta_eff = k.E_Leta;
  return c;
}

// Order-of-magnitude reporters for perturbations kept out of the symbolic model.
struct OrderEstimate {
  int induced_order = 0;
  int leading_term_order = 0;
  double tolerance = 0.0;
  std::string note;
};

inline int lambda_order_of(double ratio, double lambda) {
  return int(std::lround(std::log(ratio) / std::log(lambda)));
}

// Delta E_J sin(phi_Sigma) cos(phi x): with phi_Sigma0 = -pi/2 this is Delta E_J cos(eps)cos(phi x);
// the first pump-dependent operator term carries eps^2 phi^2.
inline OrderEstimate junction_asymmetry_order(double dEJ_over_EJ, double lambda = 0.1) {
  OrderEstimate e;
  e.induced_order = lambda_order_of(dEJ_over_EJ, lambda);
  e.leading_term_order = e.induced_order + 4;
  e.note = "asymmetry term cos(eps)cos(phi x); leading pump-dependent piece eps^2 phi^2";
  return e;
}

// A DC flux error delta enters as E_J lambda^3 delta; tolerable up to lambda^3 Phi_0.
inline OrderEstimate dc_flux_tolerance(double lambda = 0.1) {
  OrderEstimate e;
  e.induced_order = 3;
  e.leading_term_order = 3;
  e.tolerance = std::pow(lambda, 3);
  e.note = "tolerance in units of the flux quantum";
  return e;
}

}  // namespace catpump
