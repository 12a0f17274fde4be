// catpump: derive effective models, Floquet rates and sweeps for a pumped cat-qubit circuit.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <catpump/checks.hpp>
#include <catpump/config.hpp>
#include <catpump/impedance.hpp>
#include <catpump/normal_modes.hpp>
#include <catpump/sweeps.hpp>

using namespace catpump;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string preset = "fig2";
  std::string config;
  int order = 0;
  std::optional<double> eps_p, g2_frac, u, temp_K, omega_p, omega_d;
  std::vector<int> dims;
  std::string out = ".";
};

void add_common(CLI::App* sub, Common& o) {
  sub->add_option("--preset", o.preset, "fig2 | fig3 | fig4 | fig5 | fig6 | fig11");
  sub->add_option("--config", o.config, "JSON config applied on top of the preset");
  sub->add_option("--order", o.order, "SWPT truncation order")->check(CLI::IsMember({4, 5, 6, 7, 8}));
  sub->add_option("--eps-p", o.eps_p, "pump amplitude (rad)");
  sub->add_option("--g2-frac", o.g2_frac, "pump amplitude as g2/g2max");
  sub->add_option("--dims", o.dims, "Fock truncation NA NB")->expected(2);
  sub->add_option("--u", o.u, "memory admixture of the drive/bath coupling");
  sub->add_option("--temp-K", o.temp_K, "bath temperature (K)");
  sub->add_option("--omega-p", o.omega_p, "pump frequency (GHz)");
  sub->add_option("--omega-d", o.omega_d, "drive frequency (GHz)");
  sub->add_option("--out", o.out, "output directory");
}

Preset resolve(const Common& o) {
  Preset p = preset(o.preset);
  if (!o.config.empty()) p.cfg = config_from_json(load_json_file(o.config), p.cfg);
  CircuitConfig& c = p.cfg;
  if (o.order) c.truncation_order = o.order;
  if (o.eps_p) c.eps_p = *o.eps_p;
  if (o.g2_frac) c.eps_p = *o.g2_frac > 0 ? eps_p_for_g2_fraction(*o.g2_frac) : 0.0;
  if (o.u) c.u = *o.u;
  if (o.temp_K) c.temperature = *o.temp_K;
  if (o.omega_p) c.omega_p = ghz(*o.omega_p);
  if (o.omega_d) c.omega_d = ghz(*o.omega_d);
  if (o.dims.size() == 2) c.dims = {o.dims[0], o.dims[1]};
  return p;
}

BathSpectrum bath_of(const CircuitConfig& c) {
  return c.temperature > 0 ? BathSpectrum::thermal(c.kappa_b, c.temperature) : BathSpectrum::zero_t(c.kappa_b);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

// lo:hi:n with n points inclusive.
std::vector<double> parse_span(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) v.push_back(std::stod(tok));
  if (v.size() != 3 || v[2] < 1) throw ConfigError("expected lo:hi:n, got '" + s + "'");
  return linear_grid(v[0], v[1], int(v[2]));
}

class Run {
 public:
  Run(std::string command, const Common& o) : command_(std::move(command)), out_(o.out) {
    fs::create_directories(out_);
    t0_ = std::chrono::steady_clock::now();
  }
  std::ofstream csv(const std::string& name, const std::string& header) {
    std::ofstream f(fs::path(out_) / name);
    f << header << "\n";
    files_.push_back(name);
    return f;
  }
  void write_json(const std::string& name, const json& j) {
    std::ofstream(fs::path(out_) / name) << j.dump(2) << "\n";
    files_.push_back(name);
  }
  void config(const CircuitConfig& c) {
    config_ = config_to_json(c);
    warnings(validate(c));
  }
  void warnings(const WarningLog& w) { warnings_.insert(warnings_.end(), w.begin(), w.end()); }
  void note(const std::string& k, json v) { extra_[k] = std::move(v); }
  int finish(int status, const std::string& error_kind = "", const std::string& error = "") {
    json m;
    m["command"] = command_;
    m["version"] = kVersion;
    m["compiler"] = __VERSION__;
    m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
    m["config"] = config_;
    m["config_hash"] = config_hash(config_);
    m["warnings"] = warnings_to_json(warnings_);
    m["files"] = files_;
    m["workers"] = worker_count();
    m["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    m["status"] = status;
    if (!error.empty()) m["error"] = {{"kind", error_kind}, {"message", error}};
    if (!extra_.empty()) m["results"] = extra_;
    std::ofstream(fs::path(out_) / "manifest.json") << m.dump(2) << "\n";
    return status;
  }

 private:
  std::string command_, out_;
  std::chrono::steady_clock::time_point t0_;
  json config_ = json::object(), extra_ = json::object();
  WarningLog warnings_;
  std::vector<std::string> files_;
};

json cplx_json(cplx z) { return {z.real(), z.imag()}; }

int cmd_derive(const Common& o, bool flux_cancel, Run& run) {
  const Preset p = resolve(o);
  run.config(p.cfg);
  const bool fc = flux_cancel || p.flux_cancel;
  const Drive dr = (p.cfg.omega_p && p.cfg.omega_d) ? p.cfg.drive() : match_frequencies(p.cfg, fc).drive;
  const Derivation d = derive(p.cfg, dr, fc);
  run.warnings(d.swpt.warnings);
  auto f = run.csv("catalog.csv", "freq_GHz,half_kp,half_kd,monomial,re,im,abs,parity_breaking,delta_Nd");
  for (const auto& ch : d.catalog)
    for (const auto& t : ch.op.terms())
      f << fmt(to_ghz(ch.omega)) << "," << ch.nu.half_kp << "," << ch.nu.half_kd << "," << t.mon.to_string() << ","
        << fmt(t.c.real()) << "," << fmt(t.c.imag()) << "," << fmt(std::abs(t.c)) << ","
        << (t.mon.parity_breaking() ? 1 : 0) << "," << t.mon.delta_Nd() << "\n";
  const auto& e = d.couplings;
  json j;
  j["omega_p_GHz"] = to_ghz(dr.omega_p);
  j["omega_d_GHz"] = to_ghz(dr.omega_d);
  j["g2_MHz"] = cplx_json(e.g2 / mhz(1.0));
  j["g2a_MHz"] = cplx_json(e.g2a / mhz(1.0));
  j["g2b_MHz"] = cplx_json(e.g2b / mhz(1.0));
  j["delta_p_MHz"] = to_mhz(e.delta_p);
  j["Delta_p_MHz"] = to_mhz(e.Delta_p);
  j["alpha_sq"] = cplx_json(e.alpha_sq);
  j["K"] = to_json(d.swpt.K);
  run.write_json("couplings.json", j);
  return 0;
}

int cmd_rates(const Common& o, int max_Nd, Run& run) {
  const Preset p = resolve(o);
  run.config(p.cfg);
  const Drive dr = (p.cfg.omega_p && p.cfg.omega_d) ? p.cfg.drive() : match_frequencies(p.cfg, p.flux_cancel).drive;
  const Derivation d = derive(p.cfg, dr, p.flux_cancel);
  run.warnings(d.swpt.warnings);
  const RateResult rr = golden_rule_rates(effective_model(d, bath_of(p.cfg)), p.cfg.dims, max_Nd);
  const auto& L = rr.basis.labels;
  auto f = run.csv("rates.csv", "i_label,f_label,Nd_i,Nd_f,rate_over_kappa_b");
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = 0; j < L.size(); ++j)
      if (i != j && L[i].Nd() <= max_Nd && L[j].Nd() <= max_Nd && rr.gamma(i, j) > 0)
        f << L[i].to_string() << "," << L[j].to_string() << "," << L[i].Nd() << "," << L[j].Nd() << ","
          << fmt(rr.gamma(i, j) / p.cfg.kappa_b) << "\n";
  auto s = run.csv("sectors.csv", "Nd_i,Nd_f,rate_over_kappa_b");
  for (int a = 0; a <= max_Nd; ++a)
    for (int b = 0; b <= max_Nd; ++b)
      if (a != b) s << a << "," << b << "," << fmt(sector_rate(rr.gamma, L, a, b) / p.cfg.kappa_b) << "\n";
  const double alpha = std::sqrt(std::abs(d.couplings.alpha_sq));
  const FiguresOfMerit fm =
      figures_of_merit(std::abs(d.couplings.g2), p.cfg.kappa_b, sector_rate(rr.gamma, L, 1, 0), alpha);
  run.note("kappa2_over_kappa_b", fm.kappa2 / p.cfg.kappa_b);
  run.note("kappa1_over_kappa2", fm.ratio);
  run.note("adiabaticity_ok", fm.adiabaticity_ok);
  run.note("threshold_ok", fm.threshold_ok);
  return 0;
}

void write_floquet_rates(std::ofstream& f, const PumpPoint& pt, double kappa_b) {
  if (!pt.rates) return;
  const auto& rm = *pt.rates;
  for (std::size_t i = 0; i < rm.labels.size(); ++i)
    for (std::size_t j = 0; j < rm.labels.size(); ++j)
      if (i != j)
        f << fmt(pt.eps_p) << "," << fmt(pt.g2_frac) << "," << fmt(to_ghz(pt.omega_p)) << "," << rm.labels[i].to_string()
          << "," << rm.labels[j].to_string() << "," << rm.labels[i].Nd() << "," << rm.labels[j].Nd() << ","
          << fmt(rm.gamma(i, j) / kappa_b) << "\n";
}

json transition_json(const PumpPoint& pt, double kappa_b) {
  json j;
  j["g2_over_g2max"] = pt.g2_frac;
  j["eps_p"] = pt.eps_p;
  j["omega_p_GHz"] = to_ghz(pt.omega_p);
  if (!pt.rates) return j;
  json labels = json::array(), rows = json::array();
  for (const auto& l : pt.rates->labels) labels.push_back(l.to_string());
  for (int i = 0; i < pt.rates->gamma.rows(); ++i) {
    json r = json::array();
    for (int k = 0; k < pt.rates->gamma.cols(); ++k) r.push_back(pt.rates->gamma(i, k) / kappa_b);
    rows.push_back(r);
  }
  j["labels"] = labels;
  j["gamma_over_kappa_b"] = rows;
  return j;
}

double g2_frac_of(const CircuitConfig& c) { return c.eps_p == 0 ? 0.0 : g2_abs(c) / g2_max(c); }

int cmd_floquet(const Common& o, const std::string& sweep, const PumpSweepOptions& po, Run& run) {
  const Preset p = resolve(o);
  run.config(p.cfg);
  const std::vector<double> fr = sweep.empty() ? std::vector<double>{g2_frac_of(p.cfg)} : parse_span(sweep);
  const PumpSweep ps = rate_vs_pump(p.cfg, fr, po);
  auto f = run.csv("floquet_rates.csv", "eps_p,g2_over_g2max,omega_p_GHz,i_label,f_label,Nd_i,Nd_f,rate_over_kappa_b");
  json tm = json::array();
  for (const auto& pt : ps.points) {
    run.warnings(pt.warnings);
    if (pt.failed) run.warnings({{"FailedPoint", pt.reason, pt.g2_frac}});
    write_floquet_rates(f, pt, p.cfg.kappa_b);
    tm.push_back(transition_json(pt, p.cfg.kappa_b));
  }
  run.write_json("transition_matrix.json", tm);
  return 0;
}

int cmd_sweep_pump(const Common& o, const std::string& sweep, const PumpSweepOptions& po, Run& run) {
  const Preset p = resolve(o);
  run.config(p.cfg);
  const PumpSweep ps = rate_vs_pump(p.cfg, parse_span(sweep), po);
  auto f = run.csv("pump_sweep.csv",
                   "g2_over_g2max,eps_p,omega_p_GHz,omega_d_GHz,Nd_i,Nd_f,swpt_rate_over_kappa_b,"
                   "floquet_rate_over_kappa_b,min_overlap,ambiguous,divergent,failed,reason");
  for (const auto& pt : ps.points) {
    run.warnings(pt.warnings);
    for (const auto& s : po.sectors) {
      const auto sw = pt.swpt.find(s), fl = pt.floquet.find(s);
      f << fmt(pt.g2_frac) << "," << fmt(pt.eps_p) << "," << fmt(to_ghz(pt.omega_p)) << "," << fmt(to_ghz(pt.omega_d))
        << "," << s.first << "," << s.second << "," << (sw != pt.swpt.end() ? fmt(sw->second) : "nan") << ","
        << (fl != pt.floquet.end() ? fmt(fl->second) : "nan") << "," << fmt(pt.min_overlap) << "," << pt.ambiguous
        << "," << pt.divergent << "," << pt.failed << ",\"" << pt.reason << "\"\n";
    }
  }
  run.note("crossing", {{"found", ps.crossing.found}, {"g2_over_g2max", ps.crossing.x}, {"n", ps.crossing.n}});
  return 0;
}

int cmd_impedance(const Common& o, double lo, double hi, int n, bool total, bool subtract, bool stark, Run& run) {
  const Preset p = resolve(o);
  run.config(p.cfg);
  PumpSweepOptions po;
  po.stark_match = stark;
  const PumpSweep ps = rate_vs_pump(p.cfg, {g2_frac_of(p.cfg)}, po);
  const PumpPoint& pt = ps.points.front();
  run.warnings(pt.warnings);
  if (pt.failed || !pt.rates) throw NumericalError("Floquet point failed: " + pt.reason);
  const RateMatrix& rm = *pt.rates;
  const std::vector<double> grid_ghz = linear_grid(lo, hi, n);
  std::vector<double> grid;
  for (double g : grid_ghz) grid.push_back(ghz(g));
  const std::string header = "probe_GHz,re_Z,im_Z,abs_Z,i_label,j_label";
  if (total) {
    int i0 = 0;
    for (std::size_t i = 0; i < rm.labels.size(); ++i)
      if (rm.labels[i] == FockLabel{0, 0}) i0 = int(i);
    const ImpedanceSpectrum sp = total_impedance(rm, i0, grid, pt.omega_d, subtract ? 0.5 * p.cfg.kappa_b : 0.0);
    auto f = run.csv("impedance_total.csv", header);
    for (std::size_t g = 0; g < grid.size(); ++g)
      f << fmt(grid_ghz[g]) << "," << fmt(sp.Z[g].real()) << "," << fmt(sp.Z[g].imag()) << "," << fmt(std::abs(sp.Z[g]))
        << "," << rm.labels[i0].to_string() << ",all\n";
    return 0;
  }
  auto f = run.csv("impedance.csv", header);
  const Eigen::MatrixXd G = linewidths(rm);
  for (const auto& s : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}, {3, 0}})
    for (std::size_t i = 0; i < rm.labels.size(); ++i)
      for (std::size_t j = 0; j < rm.labels.size(); ++j) {
        if (i == j || rm.labels[i].Nd() != s.first || rm.labels[j].Nd() != s.second) continue;
        const auto z = partial_impedance(rm, G, int(i), int(j), grid);
        for (std::size_t g = 0; g < grid.size(); ++g)
          f << fmt(grid_ghz[g]) << "," << fmt(z[g].real()) << "," << fmt(z[g].imag()) << "," << fmt(std::abs(z[g]))
            << "," << rm.labels[i].to_string() << "," << rm.labels[j].to_string() << "\n";
      }
  return 0;
}

int cmd_flux(const Common& o, double lo, double hi, double step, Run& run) {
  Common oo = o;
  if (oo.preset == "fig2") oo.preset = "fig4";
  const Preset p = resolve(oo);
  run.config(p.cfg);
  const FluxSweepResult r = flux_ratio_sweep(p.cfg, grid_range(lo, hi, step), o.order ? o.order : 8);
  auto f = run.csv("flux_sweep.csv", "ratio,rate_a,rate_ab,rate_adag_b,failed,reason");
  for (const auto& pt : r.points)
    f << fmt(pt.ratio) << "," << fmt(pt.rate_a) << "," << fmt(pt.rate_ab) << "," << fmt(pt.rate_adag_b) << ","
      << pt.failed << ",\"" << pt.reason << "\"\n";
  run.note("analytic_ratio", r.analytic_ratio);
  run.note("exact_ratio", r.exact_ratio);
  if (r.argmin_a >= 0) run.note("argmin_rate_a", r.points[r.argmin_a].ratio);
  return 0;
}

int cmd_collision(const Common& o, double lo, double hi, double step, Run& run) {
  Common oo = o;
  if (oo.preset == "fig2") oo.preset = "fig5";
  const Preset p = resolve(oo);
  run.config(p.cfg);
  const double frac = o.g2_frac.value_or(0.1);
  const auto cols = collision_map(p.cfg, grid_range(lo, hi, step), frac, o.order ? o.order : 7);
  auto f = run.csv("collision_map.csv", "omega_a_over_omega_b,freq_GHz,monomial,parity,rate,labeled_bool");
  auto dr = run.csv("dropped_points.csv", "omega_a_over_omega_b,reason");
  for (const auto& col : cols) {
    if (col.dropped) {
      dr << fmt(col.x) << ",\"" << col.reason << "\"\n";
      continue;
    }
    for (const auto& d : col.dots)
      f << fmt(col.x) << "," << fmt(to_ghz(d.freq)) << "," << d.dominant.to_string() << ","
        << (d.parity_breaking ? "breaking" : "conserving") << "," << fmt(d.rate) << "," << d.labeled << "\n";
  }
  return 0;
}

int cmd_circuit(const std::string& raw_path, double omega_p_ghz, Run& run) {
  const RawCircuit raw = raw_path.empty() ? RawCircuit{} : raw_circuit_from_json(load_json_file(raw_path));
  WarningLog log;
  const NormalModeData nm = normal_modes(raw, &log);
  run.warnings(log);
  const CircuitConfig c = to_circuit_config(nm, ghz(omega_p_ghz));
  run.config(c);
  const FluxSetpoints fsp = dc_flux_setpoints(nm);
  json j;
  j["omega_a_GHz"] = to_ghz(nm.omega_a);
  j["omega_b_GHz"] = to_ghz(nm.omega_b);
  j["phi_a"] = nm.phi_a;
  j["phi_b"] = nm.phi_b;
  j["theta"] = nm.theta;
  j["E_J_GHz"] = to_ghz(nm.E_J);
  j["u"] = nm.u;
  j["phi_Sigma0"] = fsp.phi_Sigma0;
  j["phi_Delta0"] = fsp.phi_Delta0;
  j["E_Leps_eff_GHz"] = to_ghz(c.E_Leps_eff);
  j["E_Leta_eff_GHz"] = to_ghz(c.E_Leta_eff);
  j["config"] = config_to_json(c);
  run.write_json("circuit.json", j);
  return 0;
}

int cmd_check(Run& run) {
  const auto res = run_property_suite();
  bool ok = true;
  json a = json::array();
  for (const auto& r : res) {
    std::printf("%-48s %s  value=%.3e tol=%.1e\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.value, r.tolerance);
    a.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"tolerance", r.tolerance}});
    ok = ok && r.passed;
  }
  run.note("checks", a);
  return ok ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catpump: pumped cat-qubit dissipation toolkit"};
  app.require_subcommand(1);
  Common o;

  auto* derive_c = app.add_subcommand("derive", "SWPT effective Hamiltonian and collapse catalog");
  bool flux_cancel = false;
  add_common(derive_c, o);
  derive_c->add_flag("--flux-cancel", flux_cancel, "include the inductive g11 correction");

  auto* rates_c = app.add_subcommand("rates", "golden-rule rates of the effective model");
  int max_Nd = 6;
  add_common(rates_c, o);
  rates_c->add_option("--max-Nd", max_Nd, "largest dressed excitation number reported");

  PumpSweepOptions po;
  bool no_stark = false;
  auto* floquet_c = app.add_subcommand("floquet", "Floquet-Markov rates at one pump point or a sweep");
  std::string sweep_g2;
  add_common(floquet_c, o);
  floquet_c->add_option("--sweep-g2", sweep_g2, "lo:hi:n in g2/g2max");
  floquet_c->add_flag("--no-stark-match", no_stark, "use the SWPT-matched pump frequency");
  floquet_c->add_option("--steps", po.floquet_opts.steps_per_period, "propagator steps per period");

  auto* pump_c = app.add_subcommand("sweep-pump", "rates versus pump power, both methods");
  std::string pump_span = "0.02:0.5:25";
  add_common(pump_c, o);
  pump_c->add_option("--sweep-g2", pump_span, "lo:hi:n in g2/g2max");
  pump_c->add_flag("--no-stark-match", no_stark, "use the SWPT-matched pump frequency");
  pump_c->add_flag("!--with-floquet", po.floquet, "skip the Floquet side");

  auto* imp_c = app.add_subcommand("impedance", "partial or total Kubo impedance");
  double f_lo = 0.0, f_hi = 10.0;
  int f_n = 5001;
  bool total = false, subtract = false;
  add_common(imp_c, o);
  imp_c->add_option("--from", f_lo, "probe start (GHz)");
  imp_c->add_option("--to", f_hi, "probe stop (GHz)");
  imp_c->add_option("--points", f_n, "probe points");
  imp_c->add_flag("--total", total, "total impedance from the vacuum-labeled mode");
  imp_c->add_flag("--subtract-wd", subtract, "drop transitions resonant with omega_d");
  imp_c->add_flag("--no-stark-match", no_stark, "use the SWPT-matched pump frequency");

  auto* flux_c = app.add_subcommand("sweep-flux-ratio", "a-rate versus eta_p/eps_p");
  double r_lo = -1.6, r_hi = -0.8, r_step = 0.05;
  add_common(flux_c, o);
  flux_c->add_option("--from", r_lo);
  flux_c->add_option("--to", r_hi);
  flux_c->add_option("--step", r_step);

  auto* col_c = app.add_subcommand("collision-map", "collapse channels versus omega_a/omega_b");
  double x_lo = 0.55, x_hi = 1.6, x_step = 0.01;
  add_common(col_c, o);
  col_c->add_option("--from", x_lo);
  col_c->add_option("--to", x_hi);
  col_c->add_option("--step", x_step);

  auto* circ_c = app.add_subcommand("circuit", "normal modes and couplings from raw circuit values");
  std::string raw_path;
  double circ_wp = 0.95;
  circ_c->add_option("--raw", raw_path, "raw circuit JSON (capacitances in fF, energies in GHz)");
  circ_c->add_option("--omega-p", circ_wp, "pump frequency (GHz)");
  circ_c->add_option("--out", o.out, "output directory");

  auto* check_c = app.add_subcommand("check", "run the invariant suite");
  check_c->add_option("--out", o.out, "output directory");

  CLI11_PARSE(app, argc, argv);
  po.stark_match = !no_stark;

  const std::string name = app.get_subcommands().front()->get_name();
  Run run(name, o);
  try {
    int rc = 0;
    if (name == "derive") rc = cmd_derive(o, flux_cancel, run);
    else if (name == "rates") rc = cmd_rates(o, max_Nd, run);
    else if (name == "floquet") rc = cmd_floquet(o, sweep_g2, po, run);
    else if (name == "sweep-pump") rc = cmd_sweep_pump(o, pump_span, po, run);
    else if (name == "impedance") rc = cmd_impedance(o, f_lo, f_hi, f_n, total, subtract, !no_stark, run);
    else if (name == "sweep-flux-ratio") rc = cmd_flux(o, r_lo, r_hi, r_step, run);
    else if (name == "collision-map") rc = cmd_collision(o, x_lo, x_hi, x_step, run);
    else if (name == "circuit") rc = cmd_circuit(raw_path, circ_wp, run);
    else if (name == "check") rc = cmd_check(run);
    return run.finish(rc);
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", "config"}, {"message", e.what()}}.dump() << "\n";
    return run.finish(2, "config", e.what());
  } catch (const ValidityError& e) {
    std::cerr << json{{"error", "validity"}, {"message", e.what()}}.dump() << "\n";
    return run.finish(4, "validity", e.what());
  } catch (const NumericalError& e) {
    std::cerr << json{{"error", "numerical"}, {"message", e.what()}}.dump() << "\n";
    return run.finish(3, "numerical", e.what());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return run.finish(1, "internal", e.what());
  }
}
