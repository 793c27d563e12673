/// @file io.hpp
/// @brief Persistence: field snapshots (JSON header + little-endian f64
///        payload), CSV/JSON reports, experiment configs (TOML subset or
///        JSON, schema-validated), config hashing, atomic writes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nslab/grid.hpp"
#include "nslab/kernels.hpp"
#include "nslab/ledger.hpp"
#include "nslab/lorentz.hpp"
#include "nslab/picard.hpp"
#include "nslab/residuals.hpp"

namespace nslab {

using Json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes content to path atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);
void atomic_write(const std::string& path, const void* data, std::size_t size);

// ---- field snapshots: <name>.json + <name>.f64 ----------------------------

template <int C>
void write_snapshot(const std::string& path_base, const Field<C>& f,
                    const std::string& name);
template <int C>
void write_snapshot(const std::string& path_base, const SpaceTimeField<C>& f,
                    const std::string& name);
template <int C>
Field<C> read_snapshot_field(const std::string& path_base);
template <int C>
SpaceTimeField<C> read_snapshot_stack(const std::string& path_base);

/// Manifest for a localized state: lists the component snapshots.
void write_localized_manifest(const std::string& path,
                              const std::vector<std::string>& names);

// ---- reports ---------------------------------------------------------------

std::string rearrangement_csv(const RearrangementProfile& prof);
Json norm_report_json(const LorentzNormResult& r, const std::string& mask);
Json mixed_norm_report_json(const MixedNormResult& r, const std::string& mask);
Json decay_scan_json(const DecayScanReport& r);
std::string kernel_samples_csv(const std::vector<KernelSample>& samples);
std::string picard_trace_csv(const PicardTrace& t);
Json picard_verdict_json(const PicardTrace& t);
Json residual_report_json(const ResidualReport& r);
Json bootstrap_json(const BootstrapSchedule& s);
Json step1_json(const Step1Ledger& s);
Json serrin_json(const SerrinReport& s);
Json pressure_m_json(const PressureMReport& s);

// ---- experiment configs -----------------------------------------------------

struct ExperimentConfig {
  // grid
  double box_side = 8.0;
  int grid_n = 48;
  bool half_shift = true;
  // time
  double t0 = 0.0, t1 = 1.0;
  int time_steps = 64;
  // flow
  std::string flow = "serrin";  // serrin | landau | random
  double amplitude = 0.05;
  double landau_a = 2.0;
  std::uint64_t seed = 1;
  // picard
  int max_iters = 100;
  double rel_tolerance = 1e-10;
  double divergence_cap = 1e6;
  bool y_norm = false;
  // scan
  std::vector<double> scan_amplitudes;
  // output
  std::string out_dir;

  GridSpec grid() const;
  TimeGrid time() const;
};

/// Parses JSON or a TOML subset ([section], key = value, numbers/strings/
/// booleans/arrays) based on content, validates against the known schema
/// (unknown keys rejected with their path) and applies defaults.
ExperimentConfig load_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical JSON form of a config (defaults applied, keys sorted).
Json config_json(const ExperimentConfig& c);

/// FNV-1a 64 hash of the canonical form, as fixed-width hex.
std::string config_hash(const ExperimentConfig& c);

struct RunReport {
  std::string config_hash;
  std::string version;
  Json tasks = Json::array();
  Json timings_ms = Json::object();

  Json to_json() const;
};

std::string tool_version();

}  // namespace nslab
