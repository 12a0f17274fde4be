#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "circuit.hpp"
#include "errors.hpp"
#include "lindblad.hpp"
#include "polynomial.hpp"
#include "units.hpp"

namespace catpump {

// Fold into (-w_p/2, w_p/2].
inline double brillouin_fold(double w, double omega_p) {
  double r = std::remainder(w, omega_p);  // [-w_p/2, w_p/2]
  if (r <= -0.5 * omega_p) r += omega_p;
  return r;
}

struct FloquetOptions {
  int steps_per_period = 1024;  // multiple of 4 and of n_t
  int match_steps_per_period = 512;  // golden-section search only
  int n_t = 512;
  int max_Nd = 5;  // modes labeled up to this N_d are sampled
  bool use_symmetry = true;
  double unitarity_tol = 1e-8;
};

struct FloquetParams {
  double omega_a = 0, omega_b = 0, E_J = 0, phi_a = 0, phi_b = 0;
  double eps_p = 0, omega_p = 0, omega_d = 0, u = 0, kappa_b = 0;
  FockDims dims;

  static FloquetParams from(const CircuitConfig& c, double eps_p, double omega_p, double omega_d) {
    return {c.omega_a, c.omega_b, c.E_J, c.phi_a, c.phi_b, eps_p, omega_p, omega_d, c.u, c.kappa_b, c.dims};
  }
};

// H(t) = w_a N_a + w_b N_b - 2 E_J sin(eps_p sin w_p t) sin(phi_a x_a + phi_b x_b).
// H_0 is diagonal in Fock space, the pump term in the product eigenbasis of the
// truncated x_a, x_b; the propagator alternates between the two with a
// sixth-order symmetric composition.
class SplitPropagator {
 public:
  explicit SplitPropagator(const FloquetParams& p) : p_(p) {
    const int na = p.dims.na, nb = p.dims.nb;
    e0_.resize(p.dims.size());
    for (int ia = 0; ia < na; ++ia)
      for (int ib = 0; ib < nb; ++ib) e0_(p.dims.index(ia, ib)) = ia * p.omega_a + ib * p.omega_b;
    auto xdiag = [](int n, Eigen::MatrixXd& W, Eigen::VectorXd& xi) {
      Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, n);
      for (int i = 1; i < n; ++i) X(i - 1, i) = X(i, i - 1) = std::sqrt(double(i));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
      W = es.eigenvectors();
      xi = es.eigenvalues();
    };
    Eigen::VectorXd xa, xb;
    xdiag(na, Wa_, xa);
    xdiag(nb, Wb_, xb);
    v_.resize(p.dims.size());
    for (int ka = 0; ka < na; ++ka)
      for (int kb = 0; kb < nb; ++kb)
        v_(p.dims.index(ka, kb)) = -2.0 * p.E_J * std::sin(p.phi_a * xa(ka) + p.phi_b * xb(kb));
    Wa_c_ = Wa_.cast<cplx>();
    Wb_c_ = Wb_.cast<cplx>();
    WaT_c_ = Wa_c_.transpose();
    WbT_c_ = Wb_c_.transpose();
  }

  const FloquetParams& params() const { return p_; }
  double period() const { return two_pi / p_.omega_p; }
  double drive(double t) const { return std::sin(p_.eps_p * std::sin(p_.omega_p * t)); }

  // psi (N x M, Fock basis) <- U(t1, t0) psi.
  void propagate(Eigen::MatrixXcd& psi, double t0, double t1, int steps) const {
    if (steps <= 0) return;
    const double h = (t1 - t0) / steps;
    const auto& c = stages();
    const int m = int(c.size());
    double t = t0;
    for (int s = 0; s < steps; ++s) {
      // Strang stages A(c h/2) B(c h) A(c h/2) with adjacent half-steps merged.
      double a = 0.5 * c[0] * h;
      for (int k = 0; k < m; ++k) {
        apply_h0(psi, a);
        t += a;
        to_dvr(psi);
        apply_v(psi, c[k] * h * drive(t));
        from_dvr(psi);
        a = k + 1 < m ? 0.5 * (c[k] + c[k + 1]) * h : 0.5 * c[k] * h;
      }
      apply_h0(psi, a);
      t += a;
    }
  }

  // Yoshida's sixth-order symmetric composition of Strang steps.
  static const std::vector<double>& stages() {
    static const std::vector<double> w = [] {
      const double w1 = 0.784513610477560, w2 = 0.235573213359357, w3 = -1.17767998417887;
      const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
      return std::vector<double>{w3, w2, w1, w0, w1, w2, w3};
    }();
    return w;
  }

  Eigen::MatrixXcd evolve_identity(double t1, int steps) const {
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(p_.dims.size(), p_.dims.size());
    propagate(U, 0.0, t1, steps);
    return U;
  }

 private:
  static void apply_phase(Eigen::MatrixXcd& psi, const Eigen::VectorXd& diag, double dt) {
    const Eigen::ArrayXcd ph = (diag.array() * (-dt)).unaryExpr([](double x) { return std::polar(1.0, x); });
    psi.array().colwise() *= ph;
  }
  void apply_h0(Eigen::MatrixXcd& psi, double dt) const { apply_phase(psi, e0_, dt); }
  void apply_v(Eigen::MatrixXcd& psi, double phase) const { apply_phase(psi, v_, phase); }
  // Fock -> DVR is (W_a (x) W_b)^T; each column is an nb x na block X with X' = W_b^T X W_a.
  void transform(Eigen::MatrixXcd& psi, const Eigen::MatrixXcd& Lb, const Eigen::MatrixXcd& Ra) const {
    const int na = p_.dims.na, nb = p_.dims.nb, M = int(psi.cols());
    Eigen::Map<Eigen::MatrixXcd> wide(psi.data(), nb, Eigen::Index(na) * M);
    buf_.noalias() = Lb * wide;
    for (int c = 0; c < M; ++c) {
      Eigen::Map<Eigen::MatrixXcd> Xc(buf_.data() + Eigen::Index(c) * na * nb, nb, na);
      Eigen::Map<Eigen::MatrixXcd> Oc(psi.data() + Eigen::Index(c) * na * nb, nb, na);
      Oc.noalias() = Xc * Ra;
    }
  }
  void to_dvr(Eigen::MatrixXcd& psi) const { transform(psi, WbT_c_, Wa_c_); }
  void from_dvr(Eigen::MatrixXcd& psi) const { transform(psi, Wb_c_, WaT_c_); }

  FloquetParams p_;
  Eigen::VectorXd e0_, v_;
  Eigen::MatrixXd Wa_, Wb_;
  Eigen::MatrixXcd Wa_c_, Wb_c_, WaT_c_, WbT_c_;
  mutable Eigen::MatrixXcd buf_;
};

struct FloquetSolution {
  FloquetParams params;
  FloquetOptions options;
  Eigen::VectorXd quasi;    // folded, per mode
  Eigen::MatrixXcd modes0;  // columns: Floquet modes at t = 0
  std::vector<FockLabel> labels;
  std::vector<int> relevant;               // mode indices with label N_d <= max_Nd
  std::vector<Eigen::MatrixXcd> samples;   // per sample time: N x |relevant|
  double unitarity_defect = 0.0;
  double commutator_defect = 0.0;
  WarningLog warnings;

  int mode_of(FockLabel l) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) return int(i);
    return -1;
  }
  double period() const { return two_pi / params.omega_p; }
};

namespace detail {

inline Eigen::VectorXd parity_diagonal(FockDims d) {
  Eigen::VectorXd P(d.size());
  for (int ia = 0; ia < d.na; ++ia)
    for (int ib = 0; ib < d.nb; ++ib) P(d.index(ia, ib)) = ((ia + ib) % 2 == 0) ? 1.0 : -1.0;
  return P;
}

// Labels by greedy maximal |<n|phi_i>|^2.
inline std::vector<FockLabel> fock_labels(const Eigen::MatrixXcd& modes, FockDims d) {
  const Eigen::MatrixXd ov = modes.cwiseAbs2();  // rows Fock, cols modes
  const std::vector<int> row_of_col = greedy_assign(ov);
  std::vector<FockLabel> out(modes.cols());
  for (int j = 0; j < int(modes.cols()); ++j) out[j] = {row_of_col[j] / d.nb, row_of_col[j] % d.nb};
  return out;
}

// Truncated [c, c^dag] = 1 - N_c |N_c - 1><N_c - 1|; defect is N_c times the edge weight.
inline double ladder_commutator_defect(const Eigen::VectorXcd& v, FockDims d) {
  double wa = 0, wb = 0;
  for (int ia = 0; ia < d.na; ++ia)
    for (int ib = 0; ib < d.nb; ++ib) {
      const double w = std::norm(v(d.index(ia, ib)));
      if (ia == d.na - 1) wa += w;
      if (ib == d.nb - 1) wb += w;
    }
  return std::max(d.na * wa, d.nb * wb);
}

// Inside an exactly degenerate cluster the Schur vectors are arbitrary; rotate
// them to diagonalize the Fock index so that unpumped modes are pure Fock states.
inline void split_degenerate(Eigen::MatrixXcd& Q, const Eigen::VectorXcd& mu, double tol = 1e-8) {
  const int N = int(mu.size());
  std::vector<int> group(N, -1);
  int ng = 0;
  for (int i = 0; i < N; ++i) {
    if (group[i] >= 0) continue;
    std::vector<int> stack{i};
    group[i] = ng;
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      for (int j = 0; j < N; ++j)
        if (group[j] < 0 && std::abs(mu(j) - mu(k)) < tol) {
          group[j] = ng;
          stack.push_back(j);
        }
    }
    ++ng;
  }
  Eigen::VectorXd D = Eigen::VectorXd::LinSpaced(N, 0.0, N - 1.0);
  for (int g = 0; g < ng; ++g) {
    std::vector<int> idx;
    for (int i = 0; i < N; ++i)
      if (group[i] == g) idx.push_back(i);
    if (idx.size() < 2) continue;
    Eigen::MatrixXcd Qc(N, idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) Qc.col(c) = Q.col(idx[c]);
    const Eigen::MatrixXcd Hc = Qc.adjoint() * D.asDiagonal() * Qc;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (Hc + Hc.adjoint()));
    Qc = Qc * es.eigenvectors();
    for (std::size_t c = 0; c < idx.size(); ++c) Q.col(idx[c]) = Qc.col(c);
  }
}

}  // namespace detail

// One-period propagator; with symmetry U(T) = (P U(T/2))^2 and U(T/2) = U(T/4)^T U(T/4).
inline Eigen::MatrixXcd half_period_map(const SplitPropagator& prop, const FloquetOptions& o) {
  const double T = prop.period();
  const auto P = detail::parity_diagonal(prop.params().dims);
  Eigen::MatrixXcd Uh;
  if (o.use_symmetry) {
    const Eigen::MatrixXcd Uq = prop.evolve_identity(0.25 * T, o.steps_per_period / 4);
    Uh = Uq.transpose() * Uq;
  } else {
    Uh = prop.evolve_identity(0.5 * T, o.steps_per_period / 2);
  }
  return P.asDiagonal() * Uh;
}

inline FloquetSolution floquet_solve(const FloquetParams& p, const FloquetOptions& o = {},
                                     bool sample_modes = true) {
  if (o.steps_per_period % 4 != 0 || o.steps_per_period % o.n_t != 0)
    throw ConfigError("steps_per_period must be a multiple of 4 and of n_t");
  FloquetSolution sol;
  sol.params = p;
  sol.options = o;
  const SplitPropagator prop(p);
  const double T = prop.period();
  const int N = p.dims.size();

  const Eigen::MatrixXcd M = half_period_map(prop, o);
  sol.unitarity_defect = (M.adjoint() * M - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
  if (sol.unitarity_defect > o.unitarity_tol)
    throw PropagatorNonUnitary("unitarity defect " + std::to_string(sol.unitarity_defect));

  // M is normal, so its Schur form is diagonal with orthonormal Q.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(M);
  sol.modes0 = schur.matrixU();
  detail::split_degenerate(sol.modes0, schur.matrixT().diagonal());
  sol.quasi.resize(N);
  for (int i = 0; i < N; ++i) {
    const cplx mu = schur.matrixT()(i, i);
    sol.quasi(i) = brillouin_fold(-2.0 * std::arg(mu) / T, p.omega_p);
  }
  sol.labels = detail::fock_labels(sol.modes0, p.dims);
  for (int i = 0; i < N; ++i)
    if (sol.labels[i].Nd() <= o.max_Nd) sol.relevant.push_back(i);
  for (int i : sol.relevant)
    sol.commutator_defect =
        std::max(sol.commutator_defect, detail::ladder_commutator_defect(sol.modes0.col(i), p.dims));
  if (sol.commutator_defect > 1e-8)
    warn(&sol.warnings, "TruncationCommutator", "labeled modes reach the Fock edge", sol.commutator_defect);
  if (!sample_modes) return sol;

  const int R = int(sol.relevant.size());
  Eigen::MatrixXcd psi(N, R);
  for (int r = 0; r < R; ++r) psi.col(r) = sol.modes0.col(sol.relevant[r]);
  const int per = o.steps_per_period / o.n_t;
  const double dt = T / o.n_t;
  sol.samples.resize(o.n_t);
  for (int s = 0; s < o.n_t; ++s) {
    const double t = s * dt;
    Eigen::MatrixXcd phi = psi;
    for (int r = 0; r < R; ++r) phi.col(r) *= std::exp(I * sol.quasi(sol.relevant[r]) * t);
    sol.samples[s] = std::move(phi);
    prop.propagate(psi, t, t + dt, per);
  }
  // Periodicity of the sampled modes closes the loop.
  double drift = 0;
  for (int r = 0; r < R; ++r) {
    const cplx ph = std::exp(I * sol.quasi(sol.relevant[r]) * T);
    drift = std::max(drift, (ph * psi.col(r) - sol.modes0.col(sol.relevant[r])).norm());
  }
  if (drift > 1e-6) warn(&sol.warnings, "PeriodicityDrift", "sampled modes not periodic", drift);
  return sol;
}

// Lab-frame coupling y_b + u y_a with y = -i (c - c^dag).
inline Eigen::MatrixXcd coupling_matrix(FockDims d, double u) {
  HarmonicPolynomial y = -I * (HarmonicPolynomial::b() - HarmonicPolynomial::bdag());
  if (u != 0.0) y += -I * u * (HarmonicPolynomial::a() - HarmonicPolynomial::adag());
  return to_matrix(y, d).begin()->second;
}

struct RateMatrix {
  std::vector<int> modes;                  // indices into the solution
  std::vector<FockLabel> labels;
  Eigen::MatrixXd gamma;                   // gamma(i, j) = rate i -> j, rad/ns; diagonal kept
  std::vector<Eigen::MatrixXcd> y;         // y[k + K](i, j)
  std::vector<Eigen::MatrixXd> delta;      // Delta_ijk
  int K = 0;
  double kappa_b = 0;
  double tail_weight = 0;
  WarningLog warnings;

  cplx y_ijk(int i, int j, int k) const { return y[k + K](i, j); }
};

// y_ijk = (1/T) int dt e^{+i k w_p t} <phi_j(t)|y|phi_i(t)>, emission at Delta = eps_i - eps_j + k w_p.
inline RateMatrix rate_matrix(const FloquetSolution& sol, double u, const BathSpectrum& bath) {
  RateMatrix rm;
  rm.modes = sol.relevant;
  rm.kappa_b = bath.kappa_b;
  const int R = int(sol.relevant.size());
  for (int i : sol.relevant) rm.labels.push_back(sol.labels[i]);
  const int nt = int(sol.samples.size());
  if (nt == 0) throw ConfigError("rate_matrix needs sampled Floquet modes");
  const Eigen::MatrixXcd Y = coupling_matrix(sol.params.dims, u);

  std::vector<std::vector<cplx>> series(std::size_t(R) * R, std::vector<cplx>(nt));
  for (int s = 0; s < nt; ++s) {
    const Eigen::MatrixXcd A = sol.samples[s].adjoint() * (Y * sol.samples[s]);  // A(j, i) = <j|y|i>
    for (int i = 0; i < R; ++i)
      for (int j = 0; j < R; ++j) series[std::size_t(i) * R + j][s] = A(j, i);
  }
  rm.K = nt / 2 - 1;
  const int nk = 2 * rm.K + 1;
  rm.y.assign(nk, Eigen::MatrixXcd::Zero(R, R));
  rm.delta.assign(nk, Eigen::MatrixXd::Zero(R, R));
  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  double total = 0, tail = 0;
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) {
      fft.fwd(spec, series[std::size_t(i) * R + j]);
      for (int k = -rm.K; k <= rm.K; ++k) {
        // fwd uses e^{-2 pi i k s / n}; we need e^{+i k w_p t}.
        const cplx c = spec[(nt - k % nt) % nt] / double(nt);
        rm.y[k + rm.K](i, j) = c;
        const double w = std::norm(c);
        total += w;
        if (std::abs(k) > nt / 4) tail += w;
      }
    }
  rm.tail_weight = total > 0 ? tail / total : 0.0;
  if (rm.tail_weight > 1e-8)
    warn(&rm.warnings, "HarmonicTruncation", "spectral weight beyond |k| = n_t/4", rm.tail_weight);

  rm.gamma = Eigen::MatrixXd::Zero(R, R);
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) {
      const double ei = sol.quasi(sol.relevant[i]), ej = sol.quasi(sol.relevant[j]);
      double g = 0;
      for (int k = -rm.K; k <= rm.K; ++k) {
        const double D = ei - ej + k * sol.params.omega_p;
        rm.delta[k + rm.K](i, j) = D;
        const double w = std::norm(rm.y[k + rm.K](i, j));
        if (w > 0) g += w * bath(D);
      }
      rm.gamma(i, j) = g;
    }
  return rm;
}

struct TrackResult {
  std::vector<FockLabel> labels;  // for each mode of `next`
  double min_overlap = 1.0;
  bool ambiguous = false;
};

// Maximum-overlap continuation of labels at t = 0.
inline TrackResult track_states(const FloquetSolution& prev, const FloquetSolution& next, int max_Nd = 5,
                                double warn_below = 0.7) {
  const Eigen::MatrixXd ov = (prev.modes0.adjoint() * next.modes0).cwiseAbs2();  // rows prev, cols next
  const std::vector<int> row_of_col = detail::greedy_assign(ov);
  TrackResult tr;
  tr.labels.resize(next.modes0.cols());
  std::vector<char> seen(prev.modes0.cols(), 0);
  for (int j = 0; j < int(next.modes0.cols()); ++j) {
    const int i = row_of_col[j];
    if (i < 0 || seen[i]) throw TrackingAmbiguous("overlap assignment is not a permutation");
    seen[i] = 1;
    tr.labels[j] = prev.labels[i];
    if (prev.labels[i].Nd() <= max_Nd) tr.min_overlap = std::min(tr.min_overlap, ov(i, j));
  }
  tr.ambiguous = tr.min_overlap < warn_below;
  return tr;
}

// Relabel a solution in place (relevant set follows the labels).
inline void apply_labels(FloquetSolution& sol, const std::vector<FockLabel>& labels) {
  sol.labels = labels;
  sol.relevant.clear();
  for (int i = 0; i < int(labels.size()); ++i)
    if (labels[i].Nd() <= sol.options.max_Nd) sol.relevant.push_back(i);
}

// Unfolded energy of mode i relative to the vacuum-labeled mode, picked on the branch nearest `guess`.
inline double unfolded_gap(const FloquetSolution& sol, int i, double guess) {
  const int v = sol.mode_of({0, 0});
  const double d = sol.quasi(i) - sol.quasi(v);
  return guess + brillouin_fold(d - guess, sol.params.omega_p);
}

struct PairGap {
  int lo = -1, hi = -1;
  double gap = 0;
  double mean_energy = 0;
};

// The two modes with largest weight on span{|2,0>, |0,1>}; gap measured on the circle.
inline PairGap exchange_pair_gap(const FloquetSolution& sol, double omega_b_guess) {
  const FockDims d = sol.params.dims;
  const int s20 = d.index(2, 0), s01 = d.index(0, 1);
  std::vector<std::pair<double, int>> w;
  for (int i = 0; i < int(sol.modes0.cols()); ++i)
    w.push_back({std::norm(sol.modes0(s20, i)) + std::norm(sol.modes0(s01, i)), i});
  std::partial_sort(w.begin(), w.begin() + 2, w.end(), [](auto& a, auto& b) { return a.first > b.first; });
  PairGap pg;
  pg.lo = w[0].second;
  pg.hi = w[1].second;
  const double e1 = unfolded_gap(sol, pg.lo, omega_b_guess), e2 = unfolded_gap(sol, pg.hi, omega_b_guess);
  pg.gap = std::abs(brillouin_fold(e1 - e2, sol.params.omega_p));
  pg.mean_energy = 0.5 * (e1 + e2);
  return pg;
}

// Folded quasi-energy gap between the two modes carrying most weight on span{|A>, |B>}.
inline double folded_pair_gap(const FloquetSolution& sol, FockLabel A, FockLabel B) {
  const FockDims d = sol.params.dims;
  const int sa = d.index(A.na, A.nb), sb = d.index(B.na, B.nb);
  std::vector<std::pair<double, int>> w;
  for (int i = 0; i < int(sol.modes0.cols()); ++i)
    w.push_back({std::norm(sol.modes0(sa, i)) + std::norm(sol.modes0(sb, i)), i});
  std::partial_sort(w.begin(), w.begin() + 2, w.end(), [](auto& a, auto& b) { return a.first > b.first; });
  return std::abs(brillouin_fold(sol.quasi(w[0].second) - sol.quasi(w[1].second), sol.params.omega_p));
}

struct StarkMatch {
  double omega_p = 0, omega_d = 0;
  double gap = 0;
  int evaluations = 0;
};

// Golden-section search on w_p for the minimal |2,0>/|0,1> quasi-energy gap.
inline StarkMatch ac_stark_match(const CircuitConfig& c, double eps_p, double wp_guess, double wd_guess,
                                 double half_window, const FloquetOptions& o = {}, double tol = mhz(1e-2)) {
  StarkMatch sm;
  FloquetOptions os = o;
  os.steps_per_period = o.match_steps_per_period;
  auto gap_at = [&](double wp, PairGap* out) {
    ++sm.evaluations;
    const FloquetSolution s = floquet_solve(FloquetParams::from(c, eps_p, wp, wd_guess), os, false);
    const PairGap pg = exchange_pair_gap(s, wd_guess);
    if (out) *out = pg;
    return pg.gap;
  };
  double lo = wp_guess - half_window, hi = wp_guess + half_window;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = gap_at(x1, nullptr), f2 = gap_at(x2, nullptr);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = gap_at(x1, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = gap_at(x2, nullptr);
    }
  }
  const double wp = 0.5 * (lo + hi);
  const double edge = 0.02 * half_window;
  if (wp - (wp_guess - half_window) < edge || (wp_guess + half_window) - wp < edge)
    throw NoMinimum("quasi-energy gap minimum on the edge of the search window");
  PairGap pg;
  sm.gap = gap_at(wp, &pg);
  sm.omega_p = wp;
  sm.omega_d = pg.mean_energy;
  return sm;
}

struct BrillouinCrossing {
  bool found = false;
  double x = 0;         // sweep abscissa at the crossing
  int n = 0;            // w_a = w_b - n w_p
};

// Sign change of fold(w_a) - fold(w_b) that is not a zone-boundary wrap.
inline BrillouinCrossing detect_crossing(const std::vector<double>& x, const std::vector<double>& wa,
                                         const std::vector<double>& wb, const std::vector<double>& wp) {
  BrillouinCrossing bc;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double d0 = brillouin_fold(wa[i - 1] - wb[i - 1], wp[i - 1]);
    const double d1 = brillouin_fold(wa[i] - wb[i], wp[i]);
    if (d0 * d1 < 0 && std::abs(d0 - d1) < 0.5 * wp[i]) {
      bc.found = true;
      bc.x = x[i - 1] + (x[i] - x[i - 1]) * d0 / (d0 - d1);
      bc.n = int(std::lround((wb[i] - wa[i]) / wp[i]));
      return bc;
    }
  }
  return bc;
}

// Sector aggregates over relevant labeled modes.
inline double sector_rate(const RateMatrix& rm, int Nd_i, int Nd_f) {
  return sector_rate(rm.gamma, rm.labels, Nd_i, Nd_f);
}

inline std::map<std::pair<int, int>, double> sector_analysis(const RateMatrix& rm) {
  std::map<std::pair<int, int>, double> out;
  for (std::size_t i = 0; i < rm.labels.size(); ++i)
    for (std::size_t j = 0; j < rm.labels.size(); ++j)
      out[{rm.labels[i].Nd(), rm.labels[j].Nd()}] += rm.gamma(i, j);
  return out;
}

}  // namespace catpump
