#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "circuit.hpp"
#include "errors.hpp"
#include "polynomial.hpp"

namespace catpump {

inline int plan_orders(int truncation_order) {
  if (truncation_order < 2) throw ConfigError("truncation order must be >= 2");
  return truncation_order - 2;
}

struct SwptOptions {
  int truncation_order = 6;
  int iterations = -1;  // -1: plan_orders(truncation_order)
  double kappa_b = ghz(0.1);
  double guard_factor = 10.0;
};

struct SwptResult {
  HarmonicPolynomial K;
  std::vector<HarmonicPolynomial> S;  // S[0] is S^(1)
  HarmonicPolynomial dressed_sb;
  int iterations = 0;
  int truncation_order = 0;
  Drive drive;
  WarningLog warnings;
};

namespace detail {

// X = S/i, so [S/i, A] = -i [S, A].
inline HarmonicPolynomial ad_X(const HarmonicPolynomial& S, const HarmonicPolynomial& A, int order) {
  return -I * commutator(S, A, order);
}

inline HarmonicPolynomial checked_integral(const HarmonicPolynomial& f, const Drive& dr,
                                           const SwptOptions& o, WarningLog* log) {
  const HarmonicPolynomial g = osc(f);
  for (const auto& [k, c] : g.entries()) {
    const double nu = std::abs(dr.nu(key_freq(k)));
    if (nu < o.kappa_b)
      throw NearResonance("denominator |nu|/2pi = " + std::to_string(to_ghz(nu)) + " GHz below kappa_b for " +
                          key_mon(k).to_string() + " at " + key_freq(k).to_string());
  }
  return -1.0 * integrate_osc(g, dr, o.guard_factor * o.kappa_b, log);
}

}  // namespace detail

// Graded recursion: Kk[n][k] holds K^(n)_[k]; H^(n) = [X^(n), H_s] + sum_{k>=2} Kk[n][k].
inline SwptResult swpt_generators(const HarmonicPolynomial& Hs, const Drive& dr, const SwptOptions& o) {
  if (!Hs.tagged()) throw MissingOrderTag("SWPT input must carry lambda tags");
  SwptResult res;
  res.truncation_order = o.truncation_order;
  res.iterations = o.iterations >= 0 ? o.iterations : plan_orders(o.truncation_order);
  res.drive = dr;
  const int ord = o.truncation_order;
  const int N = res.iterations;

  const HarmonicPolynomial H = lambda_truncate(Hs, ord);
  std::vector<std::vector<HarmonicPolynomial>> Kk(N + 1);
  Kk[0].resize(2);
  Kk[0][0] = H;
  res.K = time_average(H);
  if (N == 0) return res;

  res.S.push_back(detail::checked_integral(H, dr, o, &res.warnings));
  Kk[0][1] = -1.0 * osc(H);  // dS^(1)/dt

  for (int n = 1; n <= N; ++n) {
    Kk[n].resize(n + 2);
    const HarmonicPolynomial& Sn = res.S[n - 1];
    const HarmonicPolynomial first = detail::ad_X(Sn, H, ord);
    HarmonicPolynomial Hn = first;
    for (int k = 2; k <= n + 1; ++k) {
      HarmonicPolynomial acc;
      for (int m = 0; m <= n - 1; ++m) {
        if (k - 1 >= int(Kk[m].size())) continue;
        const HarmonicPolynomial& prev = Kk[m][k - 1];
        if (prev.empty()) continue;
        acc += detail::ad_X(res.S[n - m - 1], prev, ord);
      }
      Kk[n][k] = (1.0 / k) * acc;
      Hn += Kk[n][k];
    }
    res.K += time_average(Hn);
    if (n < N) {
      res.S.push_back(detail::checked_integral(Hn, dr, o, &res.warnings));
      Kk[n][1] = first - osc(Hn);
    } else {
      Kk[n][1] = first - osc(Hn);
    }
  }
  return res;
}

inline SwptResult swpt_generators(const HarmonicPolynomial& Hs, const Drive& dr, int truncation_order,
                                  double kappa_b = ghz(0.1)) {
  SwptOptions o;
  o.truncation_order = truncation_order;
  o.kappa_b = kappa_b;
  return swpt_generators(Hs, dr, o);
}

// e^X A e^-X with X = sum_n S^(n)/i, graded: D^(n)_[k] = (1/k) sum_m [X^(n-m), D^(m)_[k-1]].
inline HarmonicPolynomial dress_system_bath(const HarmonicPolynomial& Hsb,
                                            const std::vector<HarmonicPolynomial>& S, int order) {
  HarmonicPolynomial A = Hsb;
  A.set_tagged(true);
  if (S.empty()) return A;
  // D[n] maps k -> D^(n)_[k]
  std::vector<std::map<int, HarmonicPolynomial>> D;
  D.push_back({{0, A}});
  HarmonicPolynomial out = A;
  const int nS = int(S.size());
  // Every S^(j) carries lambda >= 2, so grade n contributes only for 2n <= order.
  for (int n = 1; 2 * n <= order; ++n) {
    std::map<int, HarmonicPolynomial> level;
    for (int k = 1; k <= n; ++k) {
      HarmonicPolynomial acc;
      for (int m = 0; m <= n - 1; ++m) {
        if (n - m > nS) continue;
        auto it = D[m].find(k - 1);
        if (it == D[m].end() || it->second.empty()) continue;
        acc += detail::ad_X(S[n - m - 1], it->second, order);
      }
      if (!acc.empty()) {
        level[k] = (1.0 / k) * acc;
        out += level[k];
      }
    }
    D.push_back(std::move(level));
  }
  return out;
}

struct EffectiveCouplings {
  cplx g2{}, g2a{}, g2b{};
  double delta_p = 0.0, Delta_p = 0.0;
  cplx alpha_sq{};
  double delta_p_imag = 0.0, Delta_p_imag = 0.0;
};

inline cplx require_coefficient(const HarmonicPolynomial& K, Monomial m) {
  bool found = false;
  for (const auto& t : K.terms())
    if (t.mon == m && t.freq.is_zero()) found = true;
  if (!found) throw MissingMonomial("monomial " + m.to_string() + " absent from K");
  return K.coefficient(m);
}

// K = (delta + delta') a+a + (Delta + Delta') b+b - i g2 a^2 b+ + g2a a+a a^2 b+ + g2b a^2 b+ b+b + h.c.
inline EffectiveCouplings effective_couplings(const HarmonicPolynomial& K, const CircuitConfig& c,
                                              const Drive& dr) {
  EffectiveCouplings e;
  e.g2 = I * require_coefficient(K, {0, 2, 1, 0});
  const cplx na = K.coefficient({1, 1, 0, 0}) - c.delta(dr);
  const cplx nb = K.coefficient({0, 0, 1, 1}) - c.Delta(dr);
  e.delta_p = na.real();
  e.Delta_p = nb.real();
  e.delta_p_imag = na.imag();
  e.Delta_p_imag = nb.imag();
  e.g2a = K.coefficient({1, 3, 1, 0});
  e.g2b = K.coefficient({0, 2, 2, 1});
  const double eps_d = effective_eps_d(c);
  if (std::abs(e.g2) > 0.0) e.alpha_sq = -I * eps_d / e.g2;
  return e;
}

// Closed-form second-order shift of a+a from g11 g31; Delta' = r^2 delta'.
inline double delta_prime_closed_form(cplx g11, cplx g31, double r, const Drive& dr) {
  const double wd = dr.omega_d, wp = dr.omega_p;
  const cplx v = 12.0 * g11 * g31 * (r * r / (wd + wp) + 2.0 / (wd + 3.0 * wp) + (r * r + 2.0) / (wd - wp));
  return v.real();
}

struct MatchResult {
  Drive drive;
  int iterations = 0;
  double residual_a = 0.0, residual_b = 0.0;
  double delta_p = 0.0, Delta_p = 0.0;
};

inline MatchResult match_frequencies(const CircuitConfig& c, bool flux_cancel = false,
                                     double tol = mhz(1e-3), int max_iter = 200) {
  const cplx g11 = flux_cancel ? flux_cancel_g11(c) : coupling_g(1, 1, c);
  const cplx g31 = coupling_g(3, 1, c);
  const double r = c.r();
  MatchResult m;
  Drive d = c.undressed_drive();
  for (int it = 1; it <= max_iter; ++it) {
    const double dp = delta_prime_closed_form(g11, g31, r, d);
    const double Dp = r * r * dp;
    Drive next{0.0, c.omega_b + Dp};
    next.omega_p = 2.0 * (c.omega_a + dp) - next.omega_d;
    const double change = std::max(std::abs(next.omega_p - d.omega_p), std::abs(next.omega_d - d.omega_d));
    d = next;
    m.iterations = it;
    if (change < tol) {
      m.drive = d;
      m.delta_p = delta_prime_closed_form(g11, g31, r, d);
      m.Delta_p = r * r * m.delta_p;
      m.residual_a = c.omega_a - 0.5 * (d.omega_d + d.omega_p) + m.delta_p;
      m.residual_b = c.omega_b - d.omega_d + m.Delta_p;
      return m;
    }
  }
  throw NoConvergence("frequency matching did not converge; last omega_p/2pi = " +
                      std::to_string(to_ghz(d.omega_p)) + " GHz");
}

struct CollapseChannel {
  LatticeFrequency nu;   // e^{i nu t} in the dressed coupling
  double omega = 0.0;    // emission frequency, -nu
  HarmonicPolynomial op; // time-independent, lambda orders summed
  std::map<Monomial, double> rate_weight;
  int conjugate = -1;
};

// Groups dressed_sb by lattice frequency; C(omega) multiplies e^{-i omega t}.
inline std::vector<CollapseChannel> collapse_catalog(const HarmonicPolynomial& dressed_sb, const Drive& dr,
                                                     double rel_cut = 0.0) {
  std::map<LatticeFrequency, std::map<Monomial, cplx>> groups;
  for (const auto& t : dressed_sb.terms()) {
    if (t.mon.is_identity()) continue;
    groups[t.freq][t.mon] += t.c;
  }
  const double top = dressed_sb.max_abs();
  std::vector<CollapseChannel> out;
  for (const auto& [f, mons] : groups) {
    CollapseChannel ch;
    ch.nu = f;
    ch.omega = -dr.nu(f);
    for (const auto& [mo, cf] : mons) {
      if (std::abs(cf) <= rel_cut * top || cf == cplx{}) continue;
      ch.op += HarmonicPolynomial::term(mo, {}, cf, 0, false);
      ch.rate_weight[mo] = std::abs(cf);
    }
    if (!ch.op.empty()) out.push_back(std::move(ch));
  }
  std::sort(out.begin(), out.end(), [](const CollapseChannel& a, const CollapseChannel& b) {
    return a.omega != b.omega ? a.omega < b.omega : a.nu < b.nu;
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j)
      if (out[j].nu == -out[i].nu) out[i].conjugate = int(j);
  return out;
}

// Channels with positive emission frequency; the rest are their conjugates or static.
inline std::vector<CollapseChannel> emission_channels(const std::vector<CollapseChannel>& catalog) {
  std::vector<CollapseChannel> out;
  for (const auto& ch : catalog)
    if (ch.omega > 0) out.push_back(ch);
  return out;
}

struct Derivation {
  CircuitConfig cfg;
  Drive drive;
  SwptResult swpt;
  EffectiveCouplings couplings;
  std::vector<CollapseChannel> catalog;
};

// Full pipeline at a fixed drive: H_s, SWPT, dressing, catalog.
inline Derivation derive(const CircuitConfig& c, const Drive& dr, bool flux_cancel = false) {
  Derivation d;
  d.cfg = c;
  d.drive = dr;
  const HarmonicPolynomial Hs = build_interaction_hamiltonian(c, dr, flux_cancel);
  SwptOptions o;
  o.truncation_order = c.truncation_order;
  o.kappa_b = c.kappa_b;
  o.guard_factor = c.guard_factor;
  d.swpt = swpt_generators(Hs, dr, o);
  d.swpt.dressed_sb = dress_system_bath(build_system_bath(c), d.swpt.S, c.truncation_order);
  try {
    d.couplings = effective_couplings(d.swpt.K, c, dr);
  } catch (const MissingMonomial&) {
    // No pump: the exchange term is absent and only detunings remain.
    d.couplings.delta_p = (d.swpt.K.coefficient({1, 1, 0, 0}) - c.delta(dr)).real();
    d.couplings.Delta_p = (d.swpt.K.coefficient({0, 0, 1, 1}) - c.Delta(dr)).real();
  }
  d.catalog = collapse_catalog(d.swpt.dressed_sb, dr);
  return d;
}

// Uses configured drive if both frequencies are set, else the matched one.
inline Derivation derive(const CircuitConfig& c, bool flux_cancel = false) {
  Drive dr;
  if (c.omega_p && c.omega_d)
    dr = c.drive();
  else
    dr = match_frequencies(c, flux_cancel).drive;
  return derive(c, dr, flux_cancel);
}

}  // namespace catpump
