#include "spdc/io.hpp"

#include <fstream>
#include <iomanip>

#include <json.hpp>

namespace spdc {

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << std::setprecision(12);
  return out;
}
}  // namespace

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& pts) {
  auto out = open_out(path);
  out << "energy_pJ,squeezing_dB,antisqueezing_dB,photon_number,efficiency,depletion,dyson_norm,status\n";
  for (const auto& p : pts) {
    out << p.energy_pj << ',' << p.squeezing_db << ',' << p.antisqueezing_db << ','
        << p.photon_number << ',' << p.efficiency << ',' << p.depletion << ',' << p.dyson_norm
        << ',' << (p.ok ? "ok" : p.error) << '\n';
  }
}

void write_timeseries_csv(const std::string& path, const std::vector<TimeSample>& series) {
  auto out = open_out(path);
  out << "t_inv_gamma_p,pump_photons,pair_number,depletion,identity_residual\n";
  for (const auto& s : series)
    out << s.t << ',' << s.n_pump << ',' << s.pair_number << ',' << s.depletion << ','
        << s.identity_residual << '\n';
}

void write_spectra_csv(const std::string& path, const RVec& r, const RVec& d, double t) {
  auto out = open_out(path);
  out << "index,value,kind,t_inv_gamma_p\n";
  for (int i = 0; i < r.size(); ++i) out << i + 1 << ',' << r[i] << ",r," << t << '\n';
  for (int i = 0; i < d.size(); ++i) out << i + 1 << ',' << d[i] << ",D," << t << '\n';
}

void write_population_csv(const std::string& path, const std::vector<double>& times,
                          const RMat& populations, int m_signal, int l_pump) {
  auto out = open_out(path);
  out << "t_inv_gamma_p";
  for (int u = 1; u <= m_signal; ++u) out << ",signal_" << u;
  for (int u = 1; u <= m_signal; ++u) out << ",idler_" << u;
  for (int u = 1; u <= l_pump; ++u) out << ",pump_" << u;
  out << '\n';
  for (size_t i = 0; i < times.size(); ++i) {
    out << times[i];
    for (int c = 0; c < populations.cols(); ++c) out << ',' << populations(static_cast<int>(i), c);
    out << '\n';
  }
}

void write_wigner_csv(const std::string& path, const WignerGrid& w) {
  auto out = open_out(path);
  out << "# chi_halfwidth=" << w.chi_halfwidth << " chi_points=" << w.chi_points
      << " boundary_chi_max=" << w.boundary_chi_max << '\n';
  out << "q,p,W\n";
  for (int i = 0; i < w.q.size(); ++i)
    for (int j = 0; j < w.p.size(); ++j) out << w.q[i] << ',' << w.p[j] << ',' << w.w(i, j) << '\n';
}

void write_ket_binary(const std::string& path, const FockKet& ket) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  const FockBasis& b = *ket.basis;
  const uint32_t header[5] = {0x53504443u, static_cast<uint32_t>(b.m_signal()),
                              static_cast<uint32_t>(b.l_pump()), static_cast<uint32_t>(b.cutoff()),
                              static_cast<uint32_t>(b.sector() ? 1 : 0)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  const uint64_t dim = static_cast<uint64_t>(b.dim());
  out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  // amplitudes in basis enumeration order (S modes, I modes, P modes,
  // row-major occupations)
  out.write(reinterpret_cast<const char*>(ket.c.data()), sizeof(cplx) * b.dim());
}

FockKet read_ket_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open ket file: " + path);
  uint32_t header[5];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (header[0] != 0x53504443u) throw ConfigError("bad ket file magic");
  auto basis = std::make_shared<FockBasis>(
      FockBasis::build(static_cast<int>(header[1]), static_cast<int>(header[2]),
                       static_cast<int>(header[3]), header[4] != 0));
  uint64_t dim = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  if (dim != static_cast<uint64_t>(basis->dim())) throw ConfigError("ket dimension mismatch");
  FockKet ket;
  ket.basis = basis;
  ket.c.resize(basis->dim());
  in.read(reinterpret_cast<char*>(ket.c.data()), sizeof(cplx) * basis->dim());
  if (!in) throw ConfigError("truncated ket file");
  return ket;
}

void write_matrix_csv(const std::string& path, const Mat& m) {
  auto out = open_out(path);
  out << "row,col,re,im\n";
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out << i << ',' << j << ',' << std::real(m(i, j)) << ',' << std::imag(m(i, j)) << '\n';
}

void write_manifest(const std::string& path, const SystemParams& params,
                    const std::vector<std::string>& outputs, double seconds,
                    const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["resolved_config"] = nlohmann::json::parse(params_to_json(params));
  j["outputs"] = outputs;
  j["elapsed_seconds"] = seconds;
  j["deterministic"] = true;  // no random inputs anywhere in the pipeline
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace spdc
