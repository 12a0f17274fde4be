#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "floquet.hpp"
#include "units.hpp"

namespace catpump {

// Gamma^(i,j) = sum_n (Gamma_{j->n} + Gamma_{i->n})/2 - delta_ij Gamma_{i->i}, outgoing rates.
inline Eigen::MatrixXd linewidths(const RateMatrix& rm) {
  const Eigen::VectorXd out = rm.gamma.rowwise().sum();
  const int R = int(out.size());
  Eigen::MatrixXd G(R, R);
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) G(i, j) = 0.5 * (out(i) + out(j)) - (i == j ? rm.gamma(i, i) : 0.0);
  return G;
}

inline cplx two_pole(double w, double delta, double width) {
  return 1.0 / cplx(width, w - delta) - 1.0 / cplx(width, w + delta);
}

// Z_{i->j}(w) with unit prefactor; i, j index the rate matrix.
inline std::vector<cplx> partial_impedance(const RateMatrix& rm, const Eigen::MatrixXd& G, int i, int j,
                                           const std::vector<double>& grid) {
  std::vector<cplx> z(grid.size(), cplx{});
  for (int k = -rm.K; k <= rm.K; ++k) {
    const double w2 = std::norm(rm.y[k + rm.K](i, j));
    if (w2 == 0.0) continue;
    const double D = rm.delta[k + rm.K](i, j);
    for (std::size_t g = 0; g < grid.size(); ++g) z[g] += w2 * two_pole(grid[g], D, G(i, j));
  }
  return z;
}

inline std::vector<cplx> partial_impedance(const RateMatrix& rm, int i, int j, const std::vector<double>& grid) {
  return partial_impedance(rm, linewidths(rm), i, j, grid);
}

// Sum of partials over all labeled pairs between two dressed sectors.
inline std::vector<cplx> sector_impedance(const RateMatrix& rm, int Nd_i, int Nd_f, const std::vector<double>& grid) {
  const Eigen::MatrixXd G = linewidths(rm);
  std::vector<cplx> z(grid.size(), cplx{});
  for (std::size_t i = 0; i < rm.labels.size(); ++i) {
    if (rm.labels[i].Nd() != Nd_i) continue;
    for (std::size_t j = 0; j < rm.labels.size(); ++j) {
      if (j == i || rm.labels[j].Nd() != Nd_f) continue;
      const auto p = partial_impedance(rm, G, int(i), int(j), grid);
      for (std::size_t g = 0; g < grid.size(); ++g) z[g] += p[g];
    }
  }
  return z;
}

struct ImpedanceSpectrum {
  std::vector<double> omega;
  std::vector<cplx> Z;
  std::map<std::pair<int, int>, std::vector<cplx>> partials;
  int i0 = 0;
  Eigen::MatrixXd linewidths;
};

// Response from initial mode i0 summed over every final mode. With
// subtract_window > 0, transitions with |Delta - w_d| below it are dropped.
inline ImpedanceSpectrum total_impedance(const RateMatrix& rm, int i0, const std::vector<double>& grid,
                                         double omega_d = 0.0, double subtract_window = 0.0) {
  ImpedanceSpectrum sp;
  sp.omega = grid;
  sp.i0 = i0;
  sp.linewidths = linewidths(rm);
  sp.Z.assign(grid.size(), cplx{});
  const int R = int(rm.labels.size());
  for (int j = 0; j < R; ++j) {
    std::vector<cplx> z(grid.size(), cplx{});
    for (int k = -rm.K; k <= rm.K; ++k) {
      const double w2 = std::norm(rm.y[k + rm.K](i0, j));
      if (w2 == 0.0) continue;
      const double D = rm.delta[k + rm.K](i0, j);
      if (subtract_window > 0.0 && std::abs(std::abs(D) - omega_d) < subtract_window) continue;
      for (std::size_t g = 0; g < grid.size(); ++g) z[g] += w2 * two_pole(grid[g], D, sp.linewidths(i0, j));
    }
    for (std::size_t g = 0; g < grid.size(); ++g) sp.Z[g] += z[g];
    sp.partials[{i0, j}] = std::move(z);
  }
  return sp;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
  return g;
}

// Local maxima of |z| above rel * max|z|.
inline std::vector<double> peak_frequencies(const std::vector<double>& grid, const std::vector<cplx>& z,
                                            double rel = 1e-3) {
  double top = 0;
  for (const auto& v : z) top = std::max(top, std::abs(v));
  std::vector<double> out;
  for (std::size_t g = 1; g + 1 < z.size(); ++g) {
    const double a = std::abs(z[g]);
    if (a > rel * top && a >= std::abs(z[g - 1]) && a > std::abs(z[g + 1])) out.push_back(grid[g]);
  }
  return out;
}

}  // namespace catpump
