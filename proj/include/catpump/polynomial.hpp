#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <climits>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "errors.hpp"
#include "units.hpp"

namespace catpump {

// nu = (half_kp*omega_p + half_kd*omega_d)/2, kept as exact integers.
struct LatticeFrequency {
  int half_kp = 0;
  int half_kd = 0;

  constexpr bool is_zero() const { return half_kp == 0 && half_kd == 0; }
  constexpr double numeric(double omega_p, double omega_d) const {
    return 0.5 * (half_kp * omega_p + half_kd * omega_d);
  }
  constexpr LatticeFrequency operator+(LatticeFrequency o) const {
    return {half_kp + o.half_kp, half_kd + o.half_kd};
  }
  constexpr LatticeFrequency operator-() const { return {-half_kp, -half_kd}; }
  constexpr auto operator<=>(const LatticeFrequency&) const = default;

  std::string to_string() const {
    std::ostringstream os;
    os << "(" << half_kp << "*wp + " << half_kd << "*wd)/2";
    return os.str();
  }
};

// a^dag^m a^n b^dag^p b^q
struct Monomial {
  int m = 0, n = 0, p = 0, q = 0;

  constexpr Monomial dagger() const { return {n, m, q, p}; }
  constexpr bool parity_breaking() const { return ((m - n) % 2) != 0; }
  constexpr int delta_Nd() const { return (m - n) + 2 * (p - q); }
  constexpr int degree() const { return m + n + p + q; }
  constexpr bool is_identity() const { return degree() == 0; }
  constexpr auto operator<=>(const Monomial&) const = default;

  std::string to_string() const {
    if (is_identity()) return "1";
    std::string s;
    auto put = [&](const char* op, int k) {
      if (k == 0) return;
      if (!s.empty()) s += " ";
      s += op;
      if (k > 1) s += "^" + std::to_string(k);
    };
    put("a+", m);
    put("a", n);
    put("b+", p);
    put("b", q);
    return s;
  }
};

struct Drive {
  double omega_p = 0.0;
  double omega_d = 0.0;
  double nu(LatticeFrequency f) const { return f.numeric(omega_p, omega_d); }
};

struct Term {
  Monomial mon;
  LatticeFrequency freq;
  int order = 0;
  cplx c;
};

namespace detail {

inline constexpr int kFreqBias = 2048;

inline std::uint64_t pack(const Monomial& mo, LatticeFrequency f, int order) {
  assert(mo.m < 256 && mo.n < 256 && mo.p < 256 && mo.q < 256);
  assert(order >= 0 && order < 256);
  return (std::uint64_t(mo.m) << 56) | (std::uint64_t(mo.n) << 48) |
         (std::uint64_t(mo.p) << 40) | (std::uint64_t(mo.q) << 32) |
         (std::uint64_t(f.half_kp + kFreqBias) << 20) |
         (std::uint64_t(f.half_kd + kFreqBias) << 8) | std::uint64_t(order);
}

inline Monomial key_mon(std::uint64_t k) {
  return {int((k >> 56) & 0xff), int((k >> 48) & 0xff), int((k >> 40) & 0xff),
          int((k >> 32) & 0xff)};
}
inline LatticeFrequency key_freq(std::uint64_t k) {
  return {int((k >> 20) & 0xfff) - kFreqBias, int((k >> 8) & 0xfff) - kFreqBias};
}
inline int key_order(std::uint64_t k) { return int(k & 0xff); }

inline const std::array<double, 32>& factorials() {
  static const std::array<double, 32> f = [] {
    std::array<double, 32> t{};
    t[0] = 1.0;
    for (int i = 1; i < 32; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return f;
}

// Coefficient of the j-fold contraction between a^n (left) and a^dag^m (right).
inline double contraction(int n, int m, int j) {
  const auto& F = factorials();
  return F[n] / F[n - j] * F[m] / F[m - j] / F[j];
}

}  // namespace detail

inline double& default_prune_threshold() {
  static double t = 1e-16;
  return t;
}

class HarmonicPolynomial {
 public:
  using Entry = std::pair<std::uint64_t, cplx>;

  HarmonicPolynomial() = default;
  explicit HarmonicPolynomial(bool tagged) : tagged_(tagged) {}

  static HarmonicPolynomial term(Monomial mon, LatticeFrequency f, cplx c, int order = 0,
                                 bool tagged = true) {
    HarmonicPolynomial h(tagged);
    if (c != cplx{}) h.terms_.push_back({detail::pack(mon, f, order), c});
    return h;
  }
  static HarmonicPolynomial constant(cplx c, bool tagged = true) {
    return term({}, {}, c, 0, tagged);
  }

  // Ladder symbols carry their interaction-picture rotation when given.
  static HarmonicPolynomial a(LatticeFrequency f = {}) { return term({0, 1, 0, 0}, f, 1.0); }
  static HarmonicPolynomial adag(LatticeFrequency f = {}) { return term({1, 0, 0, 0}, f, 1.0); }
  static HarmonicPolynomial b(LatticeFrequency f = {}) { return term({0, 0, 0, 1}, f, 1.0); }
  static HarmonicPolynomial bdag(LatticeFrequency f = {}) { return term({0, 0, 1, 0}, f, 1.0); }

  bool tagged() const { return tagged_; }
  void set_tagged(bool t) { tagged_ = t; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Entry>& entries() const { return terms_; }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_)
      out.push_back({detail::key_mon(k), detail::key_freq(k), detail::key_order(k), c});
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& e : terms_) m = std::max(m, std::abs(e.second));
    return m;
  }

  int max_order() const {
    int o = 0;
    for (const auto& e : terms_) o = std::max(o, detail::key_order(e.first));
    return o;
  }

  int max_degree() const {
    int d = 0;
    for (const auto& e : terms_) d = std::max(d, detail::key_mon(e.first).degree());
    return d;
  }

  // Sum of coefficients over lambda orders for one (monomial, frequency).
  cplx coefficient(Monomial mon, LatticeFrequency f = {}) const {
    cplx s{};
    for (const auto& e : terms_)
      if (detail::key_mon(e.first) == mon && detail::key_freq(e.first) == f) s += e.second;
    return s;
  }

  HarmonicPolynomial& prune(double rel = default_prune_threshold()) {
    const double cut = rel * max_abs();
    std::erase_if(terms_, [&](const Entry& e) { return std::abs(e.second) <= cut; });
    return *this;
  }

  HarmonicPolynomial operator+(const HarmonicPolynomial& o) const { return merge(o, 1.0); }
  HarmonicPolynomial operator-(const HarmonicPolynomial& o) const { return merge(o, -1.0); }
  HarmonicPolynomial& operator+=(const HarmonicPolynomial& o) { return *this = merge(o, 1.0); }
  HarmonicPolynomial& operator-=(const HarmonicPolynomial& o) { return *this = merge(o, -1.0); }

  HarmonicPolynomial operator*(cplx s) const {
    HarmonicPolynomial r(tagged_);
    if (s == cplx{}) return r;
    r.terms_ = terms_;
    for (auto& e : r.terms_) e.second *= s;
    return r;
  }
  friend HarmonicPolynomial operator*(cplx s, const HarmonicPolynomial& p) { return p * s; }

  // Hermitian conjugate: mon -> mon^dag, nu -> -nu, c -> c*.
  HarmonicPolynomial adjoint() const {
    std::vector<Entry> v;
    v.reserve(terms_.size());
    for (const auto& [k, c] : terms_)
      v.push_back({detail::pack(detail::key_mon(k).dagger(), -detail::key_freq(k),
                                detail::key_order(k)),
                   std::conj(c)});
    return from_unsorted(std::move(v), tagged_);
  }

  bool hermitian(double rel_tol = 1e-12) const {
    const double tol = rel_tol * std::max(1.0, max_abs());
    const auto d = (*this - adjoint());
    return d.max_abs() <= tol;
  }

  // Filter by a predicate on Term.
  template <class Pred>
  HarmonicPolynomial filter(Pred&& pred) const {
    HarmonicPolynomial r(tagged_);
    for (const auto& [k, c] : terms_) {
      Term t{detail::key_mon(k), detail::key_freq(k), detail::key_order(k), c};
      if (pred(t)) r.terms_.push_back({k, c});
    }
    return r;
  }

  // Shift every lambda tag; used when tagging a freshly built block.
  HarmonicPolynomial with_order(int order) const {
    std::vector<Entry> v;
    v.reserve(terms_.size());
    for (const auto& [k, c] : terms_)
      v.push_back({detail::pack(detail::key_mon(k), detail::key_freq(k), order), c});
    return from_unsorted(std::move(v), true);
  }

  static HarmonicPolynomial from_unsorted(std::vector<Entry> v, bool tagged) {
    std::sort(v.begin(), v.end(), [](const Entry& x, const Entry& y) { return x.first < y.first; });
    HarmonicPolynomial r(tagged);
    for (auto& e : v) {
      if (!r.terms_.empty() && r.terms_.back().first == e.first)
        r.terms_.back().second += e.second;
      else
        r.terms_.push_back(e);
    }
    std::erase_if(r.terms_, [](const Entry& e) { return e.second == cplx{}; });
    return r;
  }

  static HarmonicPolynomial from_map(const std::unordered_map<std::uint64_t, cplx>& acc,
                                     bool tagged) {
    std::vector<Entry> v(acc.begin(), acc.end());
    auto r = from_unsorted(std::move(v), tagged);
    r.prune();
    return r;
  }

  bool operator==(const HarmonicPolynomial& o) const {
    return tagged_ == o.tagged_ && terms_ == o.terms_;
  }

 private:
  HarmonicPolynomial merge(const HarmonicPolynomial& o, double sign) const {
    HarmonicPolynomial r(tagged_ && o.tagged_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
        r.terms_.push_back(terms_[i++]);
      } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
        r.terms_.push_back({o.terms_[j].first, sign * o.terms_[j].second});
        ++j;
      } else {
        cplx c = terms_[i].second + sign * o.terms_[j].second;
        if (c != cplx{}) r.terms_.push_back({terms_[i].first, c});
        ++i;
        ++j;
      }
    }
    r.prune();
    return r;
  }

  std::vector<Entry> terms_;
  bool tagged_ = true;
};

namespace detail {

// Accumulates sign * (f star g) with contractions (j,k) >= skip_zero.
inline void star_accumulate(const HarmonicPolynomial& f, const HarmonicPolynomial& g, cplx sign,
                            bool skip_zero, int max_order,
                            std::unordered_map<std::uint64_t, cplx>& acc) {
  for (const auto& [kf, cf] : f.entries()) {
    const Monomial A = key_mon(kf);
    const LatticeFrequency fa = key_freq(kf);
    const int oa = key_order(kf);
    for (const auto& [kg, cg] : g.entries()) {
      const int o = oa + key_order(kg);
      if (o > max_order) continue;
      const Monomial B = key_mon(kg);
      const LatticeFrequency fr = fa + key_freq(kg);
      const cplx c0 = sign * cf * cg;
      const int jmax = std::min(A.n, B.m);
      const int kmax = std::min(A.q, B.p);
      for (int j = 0; j <= jmax; ++j) {
        const double wa = contraction(A.n, B.m, j);
        for (int k = 0; k <= kmax; ++k) {
          if (skip_zero && j == 0 && k == 0) continue;
          const double w = wa * contraction(A.q, B.p, k);
          const Monomial r{A.m + B.m - j, A.n + B.n - j, A.p + B.p - k, A.q + B.q - k};
          acc[pack(r, fr, o)] += c0 * w;
        }
      }
    }
  }
}

}  // namespace detail

// Normal-ordered symbol product: sum_{j,k} d_alpha^j d_beta^k f * d_alpha*^j d_beta*^k g / (j! k!).
inline HarmonicPolynomial star_product(const HarmonicPolynomial& f, const HarmonicPolynomial& g,
                                       int max_order = INT_MAX) {
  std::unordered_map<std::uint64_t, cplx> acc;
  acc.reserve(4 * (f.size() * g.size() + 1));
  detail::star_accumulate(f, g, 1.0, false, max_order, acc);
  return HarmonicPolynomial::from_map(acc, f.tagged() && g.tagged());
}

// The commuting (j=k=0) part cancels identically and is never formed.
inline HarmonicPolynomial commutator(const HarmonicPolynomial& f, const HarmonicPolynomial& g,
                                     int max_order = INT_MAX) {
  std::unordered_map<std::uint64_t, cplx> acc;
  acc.reserve(4 * (f.size() * g.size() + 1));
  detail::star_accumulate(f, g, 1.0, true, max_order, acc);
  detail::star_accumulate(g, f, -1.0, true, max_order, acc);
  return HarmonicPolynomial::from_map(acc, f.tagged() && g.tagged());
}

inline HarmonicPolynomial time_average(const HarmonicPolynomial& f) {
  return f.filter([](const Term& t) { return t.freq.is_zero(); });
}

inline HarmonicPolynomial osc(const HarmonicPolynomial& f) {
  return f.filter([](const Term& t) { return !t.freq.is_zero(); });
}

// d/dt of each term: multiply by i*nu.
inline HarmonicPolynomial time_derivative(const HarmonicPolynomial& f, const Drive& dr) {
  std::vector<HarmonicPolynomial::Entry> v;
  for (const auto& [k, c] : f.entries()) {
    const double nu = dr.nu(detail::key_freq(k));
    if (nu != 0.0) v.push_back({k, c * I * nu});
  }
  return HarmonicPolynomial::from_unsorted(std::move(v), f.tagged());
}

inline HarmonicPolynomial integrate_osc(const HarmonicPolynomial& f, const Drive& dr,
                                        double guard, WarningLog* log = nullptr) {
  std::vector<HarmonicPolynomial::Entry> v;
  v.reserve(f.size());
  for (const auto& [k, c] : f.entries()) {
    const LatticeFrequency fr = detail::key_freq(k);
    if (fr.is_zero())
      throw ZeroFrequencyTerm("resonant term " + detail::key_mon(k).to_string() +
                              " passed to integrate_osc");
    const double nu = dr.nu(fr);
    if (std::abs(nu) < guard)
      warn(log, "SmallDenominator",
           detail::key_mon(k).to_string() + " at " + fr.to_string() + ", |nu|/2pi [GHz]",
           std::abs(nu) / two_pi);
    v.push_back({k, c / (I * nu)});
  }
  return HarmonicPolynomial::from_unsorted(std::move(v), f.tagged());
}

inline HarmonicPolynomial lambda_truncate(const HarmonicPolynomial& f, int order) {
  if (!f.tagged()) throw MissingOrderTag("polynomial carries no lambda-order tags");
  return f.filter([order](const Term& t) { return t.order <= order; });
}

// Matrix element <i| a^dag^m a^n |j> on a single truncated mode.
inline double ladder_element(int m, int n, int i, int j) {
  if (j < n || i < m || i - m != j - n) return 0.0;
  double v = 1.0;
  for (int t = 0; t < n; ++t) v *= std::sqrt(double(j - t));
  for (int t = 0; t < m; ++t) v *= std::sqrt(double(i - t));
  return v;
}

struct FockDims {
  int na = 20;
  int nb = 11;
  int size() const { return na * nb; }
  int index(int ia, int ib) const { return ia * nb + ib; }
};

// One dense matrix per distinct frequency; basis index is ia*nb + ib.
inline std::map<LatticeFrequency, Eigen::MatrixXcd> to_matrix(const HarmonicPolynomial& f,
                                                              FockDims dims) {
  int need_a = 1, need_b = 1;
  for (const auto& e : f.entries()) {
    const Monomial mo = detail::key_mon(e.first);
    need_a = std::max({need_a, mo.m + 1, mo.n + 1});
    need_b = std::max({need_b, mo.p + 1, mo.q + 1});
  }
  if (dims.na < need_a || dims.nb < need_b)
    throw DimensionTooSmall("Fock dims (" + std::to_string(dims.na) + "," +
                            std::to_string(dims.nb) + ") below polynomial degree");
  std::map<LatticeFrequency, Eigen::MatrixXcd> out;
  const int N = dims.size();
  for (const auto& [k, c] : f.entries()) {
    const Monomial mo = detail::key_mon(k);
    auto [it, inserted] = out.try_emplace(detail::key_freq(k));
    if (inserted) it->second = Eigen::MatrixXcd::Zero(N, N);
    auto& M = it->second;
    for (int ja = mo.n; ja < dims.na; ++ja) {
      const int ia = ja - mo.n + mo.m;
      if (ia >= dims.na) continue;
      const double ea = ladder_element(mo.m, mo.n, ia, ja);
      for (int jb = mo.q; jb < dims.nb; ++jb) {
        const int ib = jb - mo.q + mo.p;
        if (ib >= dims.nb) continue;
        M(dims.index(ia, ib), dims.index(ja, jb)) += c * ea * ladder_element(mo.p, mo.q, ib, jb);
      }
    }
  }
  return out;
}

// sum_nu M(nu) e^{i nu t}
inline Eigen::MatrixXcd sample_matrix(const std::map<LatticeFrequency, Eigen::MatrixXcd>& mats,
                                      const Drive& dr, double t) {
  Eigen::MatrixXcd out;
  for (const auto& [f, M] : mats) {
    if (out.size() == 0) out = Eigen::MatrixXcd::Zero(M.rows(), M.cols());
    out += M * std::exp(I * dr.nu(f) * t);
  }
  return out;
}

inline std::string dump(const HarmonicPolynomial& f) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& t : f.terms())
    os << t.mon.m << ' ' << t.mon.n << ' ' << t.mon.p << ' ' << t.mon.q << ' ' << t.freq.half_kp
       << ' ' << t.freq.half_kd << ' ' << t.c.real() << ' ' << t.c.imag() << ' ' << t.order
       << '\n';
  return os.str();
}

inline HarmonicPolynomial parse_dump(const std::string& text, bool tagged = true) {
  std::istringstream is(text);
  std::vector<HarmonicPolynomial::Entry> v;
  Monomial mo;
  LatticeFrequency f;
  double re, im;
  int order;
  while (is >> mo.m >> mo.n >> mo.p >> mo.q >> f.half_kp >> f.half_kd >> re >> im >> order)
    v.push_back({detail::pack(mo, f, order), {re, im}});
  return HarmonicPolynomial::from_unsorted(std::move(v), tagged);
}

inline nlohmann::json to_json(const HarmonicPolynomial& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : f.terms())
    terms.push_back({t.mon.m, t.mon.n, t.mon.p, t.mon.q, t.freq.half_kp, t.freq.half_kd,
                     t.c.real(), t.c.imag(), t.order});
  return {{"tagged", f.tagged()},
          {"columns", {"m", "n", "p", "q", "half_kp", "half_kd", "re", "im", "order"}},
          {"terms", terms}};
}

inline HarmonicPolynomial from_json(const nlohmann::json& j) {
  std::vector<HarmonicPolynomial::Entry> v;
  for (const auto& t : j.at("terms"))
    v.push_back({detail::pack({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()},
                              {t[4].get<int>(), t[5].get<int>()}, t[8].get<int>()),
                 {t[6].get<double>(), t[7].get<double>()}});
  return HarmonicPolynomial::from_unsorted(std::move(v), j.value("tagged", true));
}

}  // namespace catpump
