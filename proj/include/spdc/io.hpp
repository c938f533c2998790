#pragma once

#include <string>

#include "spdc/pipeline.hpp"

namespace spdc {

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& pts);
void write_timeseries_csv(const std::string& path, const std::vector<TimeSample>& series);
void write_spectra_csv(const std::string& path, const RVec& r, const RVec& d, double t);
void write_population_csv(const std::string& path, const std::vector<double>& times,
                          const RMat& populations, int m_signal, int l_pump);
void write_wigner_csv(const std::string& path, const WignerGrid& w);
void write_ket_binary(const std::string& path, const FockKet& ket);
FockKet read_ket_binary(const std::string& path);
void write_matrix_csv(const std::string& path, const Mat& m);

// Run manifest: resolved configuration, artifact inventory, timing,
// determinism attestation.
void write_manifest(const std::string& path, const SystemParams& params,
                    const std::vector<std::string>& outputs, double seconds,
                    const std::string& command);

}  // namespace spdc
