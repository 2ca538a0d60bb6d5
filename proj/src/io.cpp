#include "mmt/io.hpp"

#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace mmt {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

}  // namespace

void write_spectrum_csv(const std::string& path, const SpectrumField& field, double beta) {
  auto f = open_out(path);
  f << "omega,value,form,beta\n";
  for (std::size_t j = 0; j < field.size(); ++j)
    f << fmt::format("{:.17g},{:.17g},{},{:.17g}\n", field.grid()[j], field.value(j), to_string(field.form()), beta);
}

LoadedSpectrum read_spectrum_csv(const std::string& path, Extrapolation extrapolation) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::string line;
  std::getline(f, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "omega,value,form,beta") throw std::runtime_error(path + ": expected header omega,value,form,beta");
  std::vector<double> omega, value;
  std::string form_tag;
  double beta = 0.0;
  int row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cols[4];
    for (auto& c : cols)
      if (!std::getline(ss, c, ',')) throw std::runtime_error(fmt::format("{}: row {} has fewer than 4 columns", path, row));
    if (!cols[3].empty() && cols[3].back() == '\r') cols[3].pop_back();
    try {
      omega.push_back(std::stod(cols[0]));
      value.push_back(std::stod(cols[1]));
      const double b = std::stod(cols[3]);
      if (omega.size() == 1) {
        form_tag = cols[2];
        beta = b;
      } else if (cols[2] != form_tag || b != beta) {
        throw std::runtime_error("form/beta columns change");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("{}: row {}: {}", path, row, e.what()));
    }
  }
  if (omega.size() < 8) throw std::runtime_error(path + ": need at least 8 rows");
  const FrequencyGrid grid(omega.front(), omega.back(), omega.size());
  for (std::size_t j = 0; j < omega.size(); ++j)
    if (std::abs(grid[j] - omega[j]) > 1e-12 * omega[j])
      throw std::runtime_error(fmt::format("{}: row {} is off the log-uniform grid", path, j + 2));
  return {SpectrumField(grid, std::move(value), parse_form(form_tag), extrapolation), beta};
}

void write_collision(const std::string& csv_path, const CollisionResult& r, const ModelParams& params) {
  {
    auto f = open_out(csv_path);
    f << "omega,value,form,beta\n";
    for (std::size_t j = 0; j < r.values.values.size(); ++j)
      f << fmt::format("{:.17g},{:.17g},C,{:.17g}\n", r.values.grid[j], r.values.values[j], params.beta);
  }
  nlohmann::ordered_json meta;
  meta["form"] = r.evaluator == Evaluator::sum_form ? "C(n)" : "C(N)";
  meta["evaluator"] = std::string(to_string(r.evaluator));
  meta["beta"] = params.beta;
  meta["epsilon"] = params.epsilon;
  meta["quad"] = {{"panels_per_decade", r.spec.panels_per_decade}, {"order", r.spec.order}, {"u_floor", r.spec.u_floor}};
  meta["u_lo"] = r.u_lo;
  meta["quad_nodes"] = r.quad_nodes;
  meta["extrapolated_fraction"] = r.extrapolated_fraction;
  std::filesystem::path side(csv_path);
  side.replace_extension(".json");
  auto f = open_out(side.string());
  f << meta.dump(2) << "\n";
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
  auto f = open_out(path);
  f << "t,dt,mass,energy,entropy,min_N,max_N,sup_DN,seminorm_beta,extrapolated_fraction\n";
  for (const auto& d : records)
    f << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", d.t, d.dt,
                     d.mass, d.energy, d.entropy, d.min_N, d.max_N, d.sup_DN, d.seminorm_beta, d.extrapolated_fraction);
}

std::string snapshot_name(double t) { return fmt::format("snap_t{:.6f}.csv", t); }

}  // namespace mmt
