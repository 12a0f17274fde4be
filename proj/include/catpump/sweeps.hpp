#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "circuit.hpp"
#include "floquet.hpp"
#include "lindblad.hpp"
#include "swpt.hpp"

namespace catpump {

// Worker count from CATPUMP_WORKERS, else hardware concurrency.
inline int worker_count() {
  if (const char* s = std::getenv("CATPUMP_WORKERS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Results land in index order regardless of scheduling.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& f, int workers = worker_count()) {
  std::vector<R> out(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) out[i] = f(i);
  };
  const int w = std::max(1, std::min<int>(workers, int(n)));
  if (w == 1) {
    run();
    return out;
  }
  std::vector<std::thread> pool;
  for (int k = 0; k < w; ++k) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  return out;
}

inline std::vector<double> grid_range(double lo, double hi, double step) {
  std::vector<double> g;
  const int n = int(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) g.push_back(lo + i * step);
  return g;
}

// <lowest|m|...>: a^dag^i a^j b^dag^k b^l between |j,l> and |i,k> has |element|^2 = i! j! k! l!.
inline double lowest_matrix_element_sq(const Monomial& mo) {
  auto f = [](int k) { return std::tgamma(k + 1.0); };
  return f(mo.m) * f(mo.n) * f(mo.p) * f(mo.q);
}

// Golden-rule rate carried by one monomial summed over the catalog.
inline double monomial_rate(const std::vector<CollapseChannel>& catalog, const Monomial& m, const BathSpectrum& bath) {
  double r = 0;
  for (const auto& ch : catalog) {
    const auto it = ch.rate_weight.find(m);
    if (it == ch.rate_weight.end()) continue;
    r += bath(ch.omega) * it->second * it->second * lowest_matrix_element_sq(m);
  }
  return r;
}

inline Monomial mon_a() { return {0, 1, 0, 0}; }
inline Monomial mon_ab() { return {0, 1, 0, 1}; }
inline Monomial mon_adag_b() { return {1, 0, 0, 1}; }

// ---- flux-ratio cancellation ----

struct FluxSweepPoint {
  double ratio = 0;
  double rate_a = 0, rate_ab = 0, rate_adag_b = 0;  // units of kappa_b
  cplx g11{};
  bool failed = false;
  std::string reason;
};

struct FluxSweepResult {
  std::vector<FluxSweepPoint> points;
  double analytic_ratio = 0, exact_ratio = 0;
  int argmin_a = -1, argmin_ab = -1, argmin_adag_b = -1;
};

inline int argmin_of(const std::vector<FluxSweepPoint>& p, double FluxSweepPoint::*field) {
  int best = -1;
  for (int i = 0; i < int(p.size()); ++i)
    if (!p[i].failed && (best < 0 || p[i].*field < p[best].*field)) best = i;
  return best;
}

inline FluxSweepResult flux_ratio_sweep(const CircuitConfig& base, const std::vector<double>& ratios, int order = 8) {
  if (base.E_Leta_eff == 0.0) throw ConfigError("flux sweep requires E_Leta_eff != 0");
  FluxSweepResult res;
  res.analytic_ratio = flux_cancel_ratio(base);
  res.exact_ratio = flux_cancel_ratio_exact(base);
  const BathSpectrum bath =
      base.temperature > 0 ? BathSpectrum::thermal(base.kappa_b, base.temperature) : BathSpectrum::zero_t(base.kappa_b);
  res.points = parallel_map<FluxSweepPoint>(ratios.size(), [&](std::size_t i) {
    FluxSweepPoint pt;
    pt.ratio = ratios[i];
    CircuitConfig c = base;
    c.truncation_order = order;
    c.eta_p = ratios[i] * c.eps_p;
    pt.g11 = flux_cancel_g11(c);
    try {
      const Drive dr = (c.omega_p && c.omega_d) ? c.drive() : match_frequencies(c, true).drive;
      const Derivation d = derive(c, dr, true);
      pt.rate_a = monomial_rate(d.catalog, mon_a(), bath) / c.kappa_b;
      pt.rate_ab = monomial_rate(d.catalog, mon_ab(), bath) / c.kappa_b;
      pt.rate_adag_b = monomial_rate(d.catalog, mon_adag_b(), bath) / c.kappa_b;
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.reason = e.what();
    }
    return pt;
  });
  res.argmin_a = argmin_of(res.points, &FluxSweepPoint::rate_a);
  res.argmin_ab = argmin_of(res.points, &FluxSweepPoint::rate_ab);
  res.argmin_adag_b = argmin_of(res.points, &FluxSweepPoint::rate_adag_b);
  return res;
}

// ---- frequency-collision map ----

struct CollisionDot {
  double freq = 0;  // emission frequency, rad/ns
  Monomial dominant;
  bool parity_breaking = false;
  double rate = 0;  // units of kappa_b
  bool labeled = false;
};

struct CollisionColumn {
  double x = 0;  // omega_a / omega_b
  std::vector<CollisionDot> dots;
  bool dropped = false;
  std::string reason;
};

// Mean spacing between neighboring collapse frequencies whose rate is at least
// `rel` times the largest in the column.
inline double mean_neighbor_gap(const CollisionColumn& col, double rel = 1e-6) {
  double top = 0;
  for (const auto& d : col.dots) top = std::max(top, d.rate);
  std::vector<double> f;
  for (const auto& d : col.dots)
    if (d.rate >= rel * top) f.push_back(d.freq);
  if (f.size() < 2) return NAN;
  std::sort(f.begin(), f.end());
  return (f.back() - f.front()) / double(f.size() - 1);
}

inline std::vector<CollisionColumn> collision_map(const CircuitConfig& base, const std::vector<double>& xs,
                                                  double g2_frac = 0.1, int order = 7, double label_frac = 0.2) {
  const BathSpectrum bath =
      base.temperature > 0 ? BathSpectrum::thermal(base.kappa_b, base.temperature) : BathSpectrum::zero_t(base.kappa_b);
  return parallel_map<CollisionColumn>(xs.size(), [&](std::size_t i) {
    CollisionColumn col;
    col.x = xs[i];
    CircuitConfig c = base;
    c.truncation_order = order;
    c.omega_a = xs[i] * c.omega_b;
    c.omega_p.reset();
    c.omega_d.reset();
    c.eps_p = eps_p_for_g2_fraction(g2_frac);
    try {
      const Derivation d = derive(c, match_frequencies(c).drive);
      double top = 0;
      for (const auto& ch : d.catalog) {
        if (ch.omega <= 0) continue;
        CollisionDot dot;
        dot.freq = ch.omega;
        double best = -1;
        for (const auto& [m, w] : ch.rate_weight)
          if (w > best) {
            best = w;
            dot.dominant = m;
          }
        dot.parity_breaking = dot.dominant.parity_breaking();
        dot.rate = bath(ch.omega) * best * best * lowest_matrix_element_sq(dot.dominant) / c.kappa_b;
        top = std::max(top, dot.rate);
        col.dots.push_back(dot);
      }
      for (auto& dot : col.dots) dot.labeled = dot.rate >= label_frac * top;
    } catch (const std::exception& e) {
      col.dropped = true;
      col.reason = e.what();
      col.dots.clear();
    }
    return col;
  });
}

// ---- rates versus pump power ----

struct PumpPoint {
  double g2_frac = 0, eps_p = 0;
  Drive swpt_drive;
  double omega_p = 0, omega_d = 0;  // used by the Floquet solve
  double wa_dressed = 0, wb_dressed = 0;
  std::map<std::pair<int, int>, double> swpt, floquet;  // sector -> rate / kappa_b
  double min_overlap = 1.0;
  bool ambiguous = false;
  bool divergent = false;
  bool failed = false;
  std::string reason;
  WarningLog warnings;
  std::optional<RateMatrix> rates;  // Floquet rates with tracked labels
  Eigen::VectorXd quasi;
};

struct PumpSweepOptions {
  std::vector<std::pair<int, int>> sectors{{1, 0}, {2, 1}, {3, 0}};
  bool floquet = true;
  bool stark_match = true;
  FloquetOptions floquet_opts;
  double divergence_factor = 10.0;
  double divergence_reach = 0.075;  // abscissa distance of the baseline points
};

struct PumpSweep {
  std::vector<PumpPoint> points;
  BrillouinCrossing crossing;
};

namespace detail {

struct PumpWork {
  PumpPoint pt;
  std::optional<FloquetSolution> sol;  // samples dropped
  std::optional<RateMatrix> rates;
};

inline PumpWork pump_point(const CircuitConfig& base, double frac, const PumpSweepOptions& o) {
  PumpWork w;
  PumpPoint& pt = w.pt;
  pt.g2_frac = frac;
  CircuitConfig c = base;
  c.eps_p = frac > 0 ? eps_p_for_g2_fraction(frac) : 0.0;
  c.eps_d = 0.0;
  c.cat_alpha_sq = -1.0;
  pt.eps_p = c.eps_p;
  try {
    const MatchResult m = frac > 0 ? match_frequencies(c) : MatchResult{c.undressed_drive(), 0, 0, 0, 0, 0};
    pt.swpt_drive = m.drive;
    pt.wa_dressed = c.omega_a + m.delta_p;
    pt.wb_dressed = c.omega_b + m.Delta_p;
    // Near a pump-assisted resonance SWPT is invalid but the Floquet solve is not.
    try {
      const Derivation d = derive(c, m.drive);
      pt.wa_dressed = c.omega_a + d.couplings.delta_p;
      pt.wb_dressed = c.omega_b + d.couplings.Delta_p;
      const RateResult rr = golden_rule_rates(effective_model(d, BathSpectrum::zero_t(c.kappa_b)), c.dims);
      for (const auto& s : o.sectors)
        pt.swpt[s] = sector_rate(rr.gamma, rr.basis.labels, s.first, s.second) / c.kappa_b;
    } catch (const ValidityError& e) {
      warn(&pt.warnings, "SwptInvalid", e.what());
    }
    if (!o.floquet) return w;
    pt.omega_p = m.drive.omega_p;
    pt.omega_d = m.drive.omega_d;
    if (o.stark_match && frac > 0) {
      try {
        const double win = std::max(mhz(3.0), 0.5 * std::abs(m.delta_p));
        const StarkMatch sm = ac_stark_match(c, c.eps_p, m.drive.omega_p, m.drive.omega_d, win, o.floquet_opts);
        pt.omega_p = sm.omega_p;
        pt.omega_d = sm.omega_d;
      } catch (const NoMinimum& e) {
        warn(&pt.warnings, "NoMinimum", e.what());
      }
    }
    FloquetSolution sol = floquet_solve(FloquetParams::from(c, c.eps_p, pt.omega_p, pt.omega_d), o.floquet_opts);
    for (const auto& x : sol.warnings) pt.warnings.push_back(x);
    w.rates = rate_matrix(sol, c.u, BathSpectrum::zero_t(c.kappa_b));
    for (const auto& x : w.rates->warnings) pt.warnings.push_back(x);
    sol.samples.clear();
    w.sol = std::move(sol);
  } catch (const std::exception& e) {
    pt.failed = true;
    pt.reason = e.what();
  }
  return w;
}

}  // namespace detail

// Each point is solved independently; labels are then carried along the grid by
// maximum overlap so that sectors follow the tracked states.
inline PumpSweep rate_vs_pump(const CircuitConfig& base, const std::vector<double>& fracs,
                              const PumpSweepOptions& o = {}) {
  auto work = parallel_map<detail::PumpWork>(
      fracs.size(), [&](std::size_t i) { return detail::pump_point(base, fracs[i], o); });
  PumpSweep out;
  const FloquetSolution* prev = nullptr;
  for (auto& w : work) {
    if (w.sol && w.rates) {
      if (prev) {
        try {
          const TrackResult tr = track_states(*prev, *w.sol, w.sol->options.max_Nd);
          w.pt.min_overlap = tr.min_overlap;
          w.pt.ambiguous = tr.ambiguous;
          if (tr.ambiguous) warn(&w.pt.warnings, "TrackingAmbiguous", "best overlap below 0.7", tr.min_overlap);
          for (std::size_t r = 0; r < w.rates->modes.size(); ++r) w.rates->labels[r] = tr.labels[w.rates->modes[r]];
          w.sol->labels = tr.labels;
        } catch (const TrackingAmbiguous& e) {
          w.pt.ambiguous = true;
          warn(&w.pt.warnings, "TrackingAmbiguous", e.what());
        }
      }
      for (const auto& s : o.sectors) w.pt.floquet[s] = sector_rate(*w.rates, s.first, s.second) / base.kappa_b;
      w.pt.rates = std::move(w.rates);
      w.pt.quasi = w.sol->quasi;
      prev = &*w.sol;
    }
    out.points.push_back(w.pt);
  }

  // Divergence: the 1->0 rate exceeds the factor times the larger of the rates
  // at the nearest points at least `divergence_reach` away on either side.
  const auto key = std::make_pair(1, 0);
  auto rate_at = [&](std::size_t i) -> std::optional<double> {
    const auto& p = out.points[i];
    if (p.failed || !p.floquet.count(key)) return std::nullopt;
    return p.floquet.at(key);
  };
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    const auto ri = rate_at(i);
    if (!ri) continue;
    std::optional<double> lo, hi;
    for (std::size_t j = i; j-- > 0;)
      if (out.points[i].g2_frac - out.points[j].g2_frac >= o.divergence_reach - 1e-12 && (lo = rate_at(j))) break;
    for (std::size_t j = i + 1; j < out.points.size(); ++j)
      if (out.points[j].g2_frac - out.points[i].g2_frac >= o.divergence_reach - 1e-12 && (hi = rate_at(j))) break;
    if (lo && hi) out.points[i].divergent = *ri > o.divergence_factor * std::max(*lo, *hi);
  }

  std::vector<double> x, wa, wb, wp;
  for (const auto& p : out.points)
    if (!p.failed && p.g2_frac > 0) {
      x.push_back(p.g2_frac);
      wa.push_back(p.wa_dressed);
      wb.push_back(p.wb_dressed);
      wp.push_back(p.swpt_drive.omega_p);
    }
  out.crossing = detect_crossing(x, wa, wb, wp);
  return out;
}

// Pump amplitude in [lo, hi] where the Floquet modes carrying |1,0> and |0,1>
// come closest on the folded circle, with the Floquet point solved there.
struct ResonanceSearch {
  double g2_frac = 0;
  double gap = 0;
  int evaluations = 0;
  PumpPoint point;
};

inline ResonanceSearch locate_resonance(const CircuitConfig& base, double lo, double hi, const FloquetOptions& fo = {},
                                        double tol = 1e-4) {
  ResonanceSearch rs;
  FloquetOptions os = fo;
  os.steps_per_period = fo.match_steps_per_period;
  auto gap_at = [&](double x) {
    ++rs.evaluations;
    CircuitConfig c = base;
    c.eps_p = eps_p_for_g2_fraction(x);
    const Drive dr = match_frequencies(c).drive;
    const FloquetSolution s = floquet_solve(FloquetParams::from(c, c.eps_p, dr.omega_p, dr.omega_d), os, false);
    return folded_pair_gap(s, {1, 0}, {0, 1});
  };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = gap_at(x1), f2 = gap_at(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = gap_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = gap_at(x2);
    }
  }
  rs.g2_frac = 0.5 * (lo + hi);
  rs.gap = gap_at(rs.g2_frac);
  PumpSweepOptions po;
  po.stark_match = false;
  po.floquet_opts = fo;
  detail::PumpWork w = detail::pump_point(base, rs.g2_frac, po);
  if (w.rates)
    for (const auto& s : po.sectors) w.pt.floquet[s] = sector_rate(*w.rates, s.first, s.second) / base.kappa_b;
  w.pt.rates = std::move(w.rates);
  rs.point = std::move(w.pt);
  return rs;
}

}  // namespace catpump
