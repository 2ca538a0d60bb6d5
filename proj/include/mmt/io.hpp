#pragma once

#include <string>
#include <vector>

#include "mmt/collision.hpp"
#include "mmt/diagnostics.hpp"
#include "mmt/spectrum.hpp"

namespace mmt {

/// CSV with header omega,value,form,beta and 17 significant digits.
void write_spectrum_csv(const std::string& path, const SpectrumField& field, double beta);

struct LoadedSpectrum {
  SpectrumField field;
  double beta;
};

/// Reads a spectrum CSV; the nodes must form a log-uniform grid.
LoadedSpectrum read_spectrum_csv(const std::string& path, Extrapolation extrapolation = Extrapolation::constant);

/// Collision values in the spectrum layout (form column "C") plus `<stem>.json` metadata.
void write_collision(const std::string& csv_path, const CollisionResult& r, const ModelParams& params);

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);

/// File name for the snapshot at time t.
std::string snapshot_name(double t);

}  // namespace mmt
