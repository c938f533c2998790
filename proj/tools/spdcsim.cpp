#include <chrono>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "spdc/io.hpp"
#include "spdc/pipeline.hpp"

using namespace spdc;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<double> energies;
  double eta_s = -1, eta_i = -1, eta_p = -1;
  double qint_s = -1, qint_i = -1, qint_p = -1;
  double pulse_ns = -1;
  int nk = -1;
  double span = -1;
  int fock_cutoff = -1;
  std::string supermodes;
  double dt = -1;
  int threads = -1;
  double energy = -1;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "configuration file (JSON)");
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--energies", a.energies, "pump energies in pJ")->delimiter(',');
  cmd->add_option("--energy", a.energy, "single pump energy in pJ");
  cmd->add_option("--eta-s", a.eta_s, "signal escape efficiency");
  cmd->add_option("--eta-i", a.eta_i, "idler escape efficiency");
  cmd->add_option("--eta-p", a.eta_p, "pump escape efficiency");
  cmd->add_option("--qint-s", a.qint_s, "signal intrinsic Q");
  cmd->add_option("--qint-i", a.qint_i, "idler intrinsic Q");
  cmd->add_option("--qint-p", a.qint_p, "pump intrinsic Q");
  cmd->add_option("--pulse-ns", a.pulse_ns, "pump pulse duration in ns");
  cmd->add_option("--nk", a.nk, "signal/idler grid points per channel");
  cmd->add_option("--span", a.span, "grid half-span in half-linewidths");
  cmd->add_option("--fock-cutoff", a.fock_cutoff, "Fock cutoff N");
  cmd->add_option("--supermodes", a.supermodes, "retained supermodes M,L");
  cmd->add_option("--dt", a.dt, "RK4 step in 1/Gamma_P");
  cmd->add_option("--threads", a.threads, "sweep worker threads");
}

SystemParams resolve(const CommonArgs& a) {
  SystemParams p = a.config_path.empty() ? SystemParams{} : params_from_json_file(a.config_path);
  if (a.energy >= 0) p.pump_energy_pj = a.energy;
  if (a.eta_s >= 0) p.signal.escape_efficiency = a.eta_s;
  if (a.eta_i >= 0) p.idler.escape_efficiency = a.eta_i;
  if (a.eta_p >= 0) p.pump.escape_efficiency = a.eta_p;
  if (a.qint_s > 0) p.signal.q_intrinsic = a.qint_s;
  if (a.qint_i > 0) p.idler.q_intrinsic = a.qint_i;
  if (a.qint_p > 0) p.pump.q_intrinsic = a.qint_p;
  if (a.pulse_ns > 0) p.pulse_duration_ns = a.pulse_ns;
  if (a.nk > 0) p.signal.grid_points = p.idler.grid_points = a.nk;
  if (a.span > 0) p.signal.grid_halfspan_linewidths = p.idler.grid_halfspan_linewidths = a.span;
  if (a.fock_cutoff > 0) p.fock_cutoff = a.fock_cutoff;
  if (!a.supermodes.empty()) {
    const auto comma = a.supermodes.find(',');
    if (comma == std::string::npos) throw ConfigError("--supermodes expects M,L");
    p.supermodes_signal = std::stoi(a.supermodes.substr(0, comma));
    p.supermodes_pump = std::stoi(a.supermodes.substr(comma + 1));
  }
  if (a.dt > 0) p.dt_inv_gamma_p = a.dt;
  if (a.threads > 0) p.threads = a.threads;
  p.validate();
  return p;
}

std::string out_path(const CommonArgs& a, const std::string& name) {
  fs::create_directories(a.out_dir);
  return (fs::path(a.out_dir) / name).string();
}

GridSpec grid_spec(const SystemParams& p) {
  GridSpec g;
  g.chi_points = p.chi_grid_points;
  g.chi_halfwidth = p.chi_grid_halfwidth;
  g.out_points = p.wigner_grid_points;
  g.out_halfwidth = p.wigner_grid_halfwidth;
  g.auto_widen = p.wigner_auto_widen;
  return g;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

int cmd_squeeze_sweep(const CommonArgs& a) {
  Timer timer;
  SystemParams p = resolve(a);
  std::vector<double> energies = a.energies;
  if (energies.empty()) energies = {p.pump_energy_pj};
  const auto pts = energy_sweep(p, energies, false, p.threads);
  const std::string csv = out_path(a, "squeeze_sweep.csv");
  write_sweep_csv(csv, pts);
  write_manifest(out_path(a, "squeeze_sweep.manifest.json"), p, {csv}, timer.seconds(),
                 "squeeze-sweep");
  for (const auto& pt : pts)
    std::cout << pt.energy_pj << " pJ: " << pt.squeezing_db << " dB / " << pt.antisqueezing_db
              << " dB" << (pt.ok ? "" : "  [" + pt.error + "]") << "\n";
  return 0;
}

int cmd_efficiency(const CommonArgs& a) {
  Timer timer;
  SystemParams p = resolve(a);
  std::vector<double> energies = a.energies;
  if (energies.empty()) energies = {p.pump_energy_pj};
  const auto pts = energy_sweep(p, energies, true, p.threads);
  const std::string csv = out_path(a, "efficiency.csv");
  write_sweep_csv(csv, pts);
  write_manifest(out_path(a, "efficiency.manifest.json"), p, {csv}, timer.seconds(), "efficiency");
  for (const auto& pt : pts)
    std::cout << pt.energy_pj << " pJ: N=" << pt.photon_number << " eff=" << pt.efficiency
              << " dyson=" << pt.dyson_norm << "\n";
  return 0;
}

int cmd_supermodes(const CommonArgs& a) {
  Timer timer;
  SystemParams p = resolve(a);
  const GaussianRunResult r = run_gaussian(p);
  const std::string csv = out_path(a, "supermodes.csv");
  write_spectra_csv(csv, r.joint_spectrum, r.pump_spectrum, r.integ.state.t);
  write_manifest(out_path(a, "supermodes.manifest.json"), p, {csv}, timer.seconds(), "supermodes");
  std::cout << "r1=" << r.joint_spectrum[0] << " D1=" << r.pump_spectrum[0]
            << " D2/D1=" << (r.pump_spectrum.size() > 1 && r.pump_spectrum[0] > 0
                                 ? r.pump_spectrum[1] / r.pump_spectrum[0]
                                 : 0.0)
            << "\n";
  return 0;
}

int cmd_nongauss(const CommonArgs& a) {
  Timer timer;
  SystemParams p = resolve(a);
  const NonGaussRunResult r = run_nongauss(p);
  const std::string pop_csv = out_path(a, "populations.csv");
  write_population_csv(pop_csv, r.ng.times, r.ng.populations, p.supermodes_signal,
                       p.supermodes_pump);
  const std::string ket_bin = out_path(a, "ket.bin");
  write_ket_binary(ket_bin, r.ng.ket);
  write_manifest(out_path(a, "nongauss.manifest.json"), p, {pop_csv, ket_bin}, timer.seconds(),
                 "nongauss");
  const int rows = static_cast<int>(r.ng.populations.rows());
  if (rows > 0)
    std::cout << "final populations: S1=" << r.ng.populations(rows - 1, 0)
              << " P1=" << r.ng.populations(rows - 1, 2 * p.supermodes_signal)
              << " norm drift=" << r.ng.max_norm_drift << "\n";
  return 0;
}

int cmd_wigner(const CommonArgs& a, double theta, double phi, bool scan, bool reduced) {
  Timer timer;
  SystemParams p = resolve(a);
  const NonGaussRunResult r = run_nongauss(p);
  std::vector<std::string> outputs;
  if (scan) {
    RVec thetas(13), phis(25);
    for (int i = 0; i < thetas.size(); ++i) thetas[i] = M_PI * i / (thetas.size() - 1);
    for (int i = 0; i < phis.size(); ++i) phis[i] = 2.0 * M_PI * i / (phis.size() - 1);
    GridSpec scan_spec = grid_spec(p);
    scan_spec.chi_points = 48;
    const AngleScanResult sc = angle_scan(r.ng.ket, thetas, phis, scan_spec);
    theta = sc.theta;
    phi = sc.phi;
    std::cout << "scan max negativity " << sc.negativity << " at theta=" << theta / M_PI
              << "pi phi=" << phi / M_PI << "pi\n";
  }
  const ModeCoefficients mc = hybrid_mode(theta, phi, *r.ng.ket.basis);
  const WignerGrid w = wigner(r.ng.ket, mc, grid_spec(p));
  const std::string wcsv = out_path(a, "wigner.csv");
  write_wigner_csv(wcsv, w);
  outputs.push_back(wcsv);
  std::cout << "negativity volume " << w.negativity_volume() << ", normalization "
            << w.normalization() << "\n";
  if (reduced) {
    const double eta = p.signal.escape_efficiency;
    const ReducedWignerResult rw =
        reduced_wigner_actual(r.ng.ket, r.joint_t1, eta, p.signal.grid_points, grid_spec(p));
    const std::string rcsv = out_path(a, "wigner_reduced.csv");
    write_wigner_csv(rcsv, rw.exact);
    outputs.push_back(rcsv);
    std::cout << "reduced negativity volume " << rw.exact.negativity_volume()
              << " (path difference " << rw.path_difference << ")\n";
  }
  write_manifest(out_path(a, "wigner.manifest.json"), p, outputs, timer.seconds(), "wigner");
  return 0;
}

int cmd_stretch(const CommonArgs& a) {
  Timer timer;
  SystemParams p = resolve(a);
  const StretchRunResult r = run_stretch(p);
  const std::string wcsv = out_path(a, "stretched_wigner.csv");
  write_wigner_csv(wcsv, r.wigner);
  write_manifest(out_path(a, "stretch.manifest.json"), p, {wcsv}, timer.seconds(), "stretch");
  std::cout << "stretched negativity " << r.wigner.negativity_volume() << ", effective squeezing "
            << effective_squeezing(r.wigner) << ", |C-target|=" << r.coeffs.c_target_residual
            << ", |D|max=" << r.coeffs.d_max << "\n";
  return 0;
}

int cmd_resolve_config(const CommonArgs& a) {
  SystemParams p = resolve(a);
  const std::string path = out_path(a, "resolved_config.json");
  std::ofstream out(path);
  out << params_to_json(p) << "\n";
  std::cout << params_to_json(p) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pump-depleted SPDC microring simulator"};
  app.require_subcommand(1);

  CommonArgs a;
  double theta = 0.67 * M_PI, phi = 2.12 * M_PI;
  bool scan = false, reduced = false;

  auto* sweep = app.add_subcommand("squeeze-sweep", "squeezing vs pump energy");
  add_common(sweep, a);
  auto* eff = app.add_subcommand("efficiency", "photon number, efficiency and Dyson norm");
  add_common(eff, a);
  auto* sm = app.add_subcommand("supermodes", "joint and pump singular-value spectra");
  add_common(sm, a);
  auto* ng = app.add_subcommand("nongauss", "residual-ket evolution and populations");
  add_common(ng, a);
  auto* wg = app.add_subcommand("wigner", "Wigner function of the hybrid mode");
  add_common(wg, a);
  wg->add_option("--theta", theta, "hybrid angle theta (rad)");
  wg->add_option("--phi", phi, "hybrid angle phi (rad)");
  wg->add_flag("--scan", scan, "scan angles for maximum negativity");
  wg->add_flag("--reduced", reduced, "also compute the actual-channel reduced Wigner");
  auto* st = app.add_subcommand("stretch", "inverse-unitary stretched Wigner function");
  add_common(st, a);
  auto* rc = app.add_subcommand("resolve-config", "echo the resolved configuration");
  add_common(rc, a);

  CLI11_PARSE(app, argc, argv);
  try {
    if (sweep->parsed()) return cmd_squeeze_sweep(a);
    if (eff->parsed()) return cmd_efficiency(a);
    if (sm->parsed()) return cmd_supermodes(a);
    if (ng->parsed()) return cmd_nongauss(a);
    if (wg->parsed()) return cmd_wigner(a, theta, phi, scan, reduced);
    if (st->parsed()) return cmd_stretch(a);
    if (rc->parsed()) return cmd_resolve_config(a);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
