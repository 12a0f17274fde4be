#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "polynomial.hpp"
#include "swpt.hpp"
#include "units.hpp"

namespace catpump {

struct BathSpectrum {
  enum class Kind { FlatZeroT, FlatThermal };
  Kind kind = Kind::FlatZeroT;
  double kappa_b = ghz(0.1);
  double temperature = 0.0;
  // Overrides the flat shape when set (filter studies).
  std::function<double(double)> custom;

  static BathSpectrum zero_t(double kb) { return {Kind::FlatZeroT, kb, 0.0, {}}; }
  static BathSpectrum thermal(double kb, double T) { return {Kind::FlatThermal, kb, T, {}}; }

  double occupation(double w) const {
    if (temperature <= 0.0) return 0.0;
    return 1.0 / std::expm1(std::abs(w) * kHbarOverKb / temperature);
  }

  // kappa(w) = e^{beta w} kappa(-w); emission side tends to kappa_b.
  double operator()(double w) const {
    if (custom) return custom(w);
    if (w == 0.0) return 0.0;
    if (kind == Kind::FlatZeroT || temperature <= 0.0) return w > 0.0 ? kappa_b : 0.0;
    const double n = occupation(w);
    return w > 0.0 ? kappa_b * (n + 1.0) : kappa_b * n;
  }
};

struct FockLabel {
  int na = 0, nb = 0;
  int Nd() const { return na + 2 * nb; }
  auto operator<=>(const FockLabel&) const = default;
  std::string to_string() const { return std::to_string(na) + "," + std::to_string(nb); }
};

struct EigenBasis {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;  // columns
  std::vector<FockLabel> labels;
  FockDims dims;
};

namespace detail {

// Greedy maximum-overlap assignment of columns of V (restricted to `basis` rows)
// to the Fock states listed in `basis`.
inline std::vector<int> greedy_assign(const Eigen::MatrixXd& overlap) {
  const int n = int(overlap.rows());
  std::vector<int> col_of_row(n, -1), row_of_col(n, -1);
  std::vector<std::pair<double, std::pair<int, int>>> pairs;
  pairs.reserve(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pairs.push_back({overlap(i, j), {i, j}});
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [v, ij] : pairs) {
    const auto [i, j] = ij;
    if (col_of_row[i] < 0 && row_of_col[j] < 0) {
      col_of_row[i] = j;
      row_of_col[j] = i;
    }
  }
  return row_of_col;
}

inline bool conserves_Nd(const HarmonicPolynomial& K) {
  for (const auto& t : K.terms())
    if (t.mon.delta_Nd() != 0) return false;
  return true;
}

}  // namespace detail

// Eigenvectors of K labeled by Fock state. When K conserves N_d, each sector
// is diagonalized separately so that degeneracies never mix sectors.
inline EigenBasis diagonalize_K(const HarmonicPolynomial& K, FockDims dims) {
  const auto mats = to_matrix(time_average(K), dims);
  const int N = dims.size();
  Eigen::MatrixXcd H = mats.empty() ? Eigen::MatrixXcd::Zero(N, N) : mats.begin()->second;
  H = 0.5 * (H + H.adjoint()).eval();

  EigenBasis eb;
  eb.dims = dims;
  eb.energies.resize(N);
  eb.vectors = Eigen::MatrixXcd::Zero(N, N);
  eb.labels.resize(N);

  std::map<int, std::vector<int>> sectors;
  if (detail::conserves_Nd(K)) {
    for (int ia = 0; ia < dims.na; ++ia)
      for (int ib = 0; ib < dims.nb; ++ib) sectors[ia + 2 * ib].push_back(dims.index(ia, ib));
  } else {
    for (int s = 0; s < N; ++s) sectors[0].push_back(s);
  }

  for (const auto& [nd, idx] : sectors) {
    const int m = int(idx.size());
    Eigen::MatrixXcd B(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) B(i, j) = H(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B);
    Eigen::MatrixXd ov = es.eigenvectors().cwiseAbs2();  // rows: Fock, cols: eigvec
    const std::vector<int> row_of_col = detail::greedy_assign(ov);
    // Slot each eigenvector at the position of its Fock label.
    for (int j = 0; j < m; ++j) {
      const int s = idx[row_of_col[j]];
      eb.energies(s) = es.eigenvalues()(j);
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
      for (int i = 0; i < m; ++i) v(idx[i]) = es.eigenvectors()(i, j);
      // Fix the phase so the labeled component is real positive.
      const cplx ph = v(s) / std::abs(v(s));
      if (std::abs(v(s)) > 0) v /= ph;
      eb.vectors.col(s) = v;
      eb.labels[s] = {s / dims.nb, s % dims.nb};
    }
  }
  return eb;
}

inline double edge_weight(const Eigen::VectorXcd& v, FockDims d) {
  double w = 0;
  for (int ia = 0; ia < d.na; ++ia)
    for (int ib = 0; ib < d.nb; ++ib)
      if (ia == d.na - 1 || ib == d.nb - 1) w += std::norm(v(d.index(ia, ib)));
  return w;
}

struct EffectiveModel {
  HarmonicPolynomial K;
  std::vector<CollapseChannel> channels;
  BathSpectrum spectrum;
};

// Gamma(i, j) is the rate i -> j in rad/ns; indices are Fock-label slots.
struct RateResult {
  Eigen::MatrixXd gamma;
  EigenBasis basis;
  double kappa_b = 0.0;
  std::vector<FockLabel> labels() const { return basis.labels; }
};

inline RateResult golden_rule_rates(const EffectiveModel& model, FockDims dims, int max_Nd = 6,
                                    double edge_tol = 1e-6) {
  RateResult rr;
  rr.kappa_b = model.spectrum.kappa_b;
  rr.basis = diagonalize_K(model.K, dims);
  const int N = dims.size();
  for (int s = 0; s < N; ++s)
    if (rr.basis.labels[s].Nd() <= max_Nd) {
      const double w = edge_weight(rr.basis.vectors.col(s), dims);
      if (w > edge_tol)
        throw TruncationUnconverged("state " + rr.basis.labels[s].to_string() +
                                    " has edge weight " + std::to_string(w));
    }
  rr.gamma = Eigen::MatrixXd::Zero(N, N);
  const Eigen::MatrixXcd& V = rr.basis.vectors;
  for (const auto& ch : model.channels) {
    const double k = model.spectrum(ch.omega);
    if (k == 0.0) continue;
    const auto mats = to_matrix(ch.op, dims);
    if (mats.empty()) continue;
    const Eigen::MatrixXcd A = V.adjoint() * mats.begin()->second * V;  // A(j, i) = <j|C|i>
    rr.gamma += k * A.cwiseAbs2().transpose();
  }
  rr.gamma.diagonal().setZero();
  return rr;
}

inline int slot_of(const std::vector<FockLabel>& labels, FockLabel l) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == l) return int(i);
  return -1;
}

// Sum of rates over all labeled pairs with the given dressed excitation numbers.
inline double sector_rate(const Eigen::MatrixXd& gamma, const std::vector<FockLabel>& labels, int Nd_i,
                          int Nd_f) {
  double s = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].Nd() == Nd_i)
      for (std::size_t j = 0; j < labels.size(); ++j)
        if (j != i && labels[j].Nd() == Nd_f) s += gamma(i, j);
  return s;
}

struct FiguresOfMerit {
  double kappa2 = 0, kappa1_eff = 0, ratio = 0;
  bool adiabaticity_ok = false, threshold_ok = false;
};

inline FiguresOfMerit figures_of_merit(double g2_abs, double kappa_b, double kappa1_eff, double alpha_abs,
                                       double threshold = 5e-3) {
  FiguresOfMerit f;
  f.kappa2 = 4.0 * g2_abs * g2_abs / kappa_b;
  f.kappa1_eff = kappa1_eff;
  f.ratio = f.kappa2 > 0 ? kappa1_eff / f.kappa2 : INFINITY;
  f.adiabaticity_ok = 8.0 * g2_abs * alpha_abs < kappa_b;
  f.threshold_ok = f.ratio <= threshold;
  return f;
}

struct ParityClass {
  Monomial mon;
  bool parity_breaking = false;
  int delta_Nd = 0;
};

inline std::vector<ParityClass> classify_parity(const CollapseChannel& ch) {
  std::vector<ParityClass> out;
  for (const auto& [mo, w] : ch.rate_weight) out.push_back({mo, mo.parity_breaking(), mo.delta_Nd()});
  return out;
}

inline EffectiveModel effective_model(const Derivation& d, const BathSpectrum& spec) {
  return {d.swpt.K, d.catalog, spec};
}

}  // namespace catpump
