#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "amrt/cli/run_config.hpp"

namespace amrt::cli {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

/// Command-line flags that override values from the config file.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> noise;
  std::optional<std::string> mode;
};

/// Loads the config file (or defaults), applies the overrides and validates.
RunConfig resolve_config(const Overrides& o);

/// Adds the resolved config as "config.<section>" entries.
void embed_config(io::Sections& s, const RunConfig& c);
/// Reads back a config embedded by embed_config.
RunConfig embedded_config(const io::Sections& s);

/// Output file names inside RunConfig::out_dir.
inline constexpr const char* kFieldsFile = "fields.amrt";
inline constexpr const char* kAttenuationFile = "attenuation.amrt";
inline constexpr const char* kSinogramFile = "sinogram.amrt";
inline constexpr const char* kReconFile = "recon_fields.amrt";
inline constexpr const char* kReportFile = "report.ini";
inline constexpr const char* kConfigFile = "config.ini";
inline constexpr const char* kConvergenceFile = "convergence.ini";

/// Writes fields.amrt, attenuation.amrt (zeros in non-attenuated mode) and config.ini.
void cmd_phantom(const RunConfig& c, std::ostream& log);
/// Reads a fields file (and an attenuation file in attenuated mode), writes sinogram.amrt.
void cmd_forward(const RunConfig& c, const std::string& fields_path, const std::string& attenuation_path,
                 std::ostream& log);
/// Reads a sinogram file (and an attenuation file in attenuated mode), writes recon_fields.amrt
/// and report.ini.
void cmd_reconstruct(const RunConfig& c, const std::string& sinogram_path, const std::string& attenuation_path,
                     std::ostream& log);

struct RoundTripResult {
  double rel_l2_f = 0.0;
  double rel_l2_F = 0.0;
  ReconstructionReport report;
};

/// Phantom, forward, noise, reconstruction and comparison in one pass; writes report.ini
/// and recon_fields.amrt when `write` is set.
RoundTripResult roundtrip(const RunConfig& c, bool write, std::ostream& log);
void cmd_roundtrip(const RunConfig& c, std::ostream& log);
/// Round trips over c.convergence_resolutions; writes convergence.ini with observed orders.
void cmd_convergence(const RunConfig& c, std::ostream& log);

/// Full command line; returns the process exit code. Messages go to `out` and `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amrt::cli
