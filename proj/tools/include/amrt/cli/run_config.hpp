#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "amrt/fields.hpp"
#include "amrt/geometry.hpp"
#include "amrt/io.hpp"

namespace amrt::cli {

enum class PhantomKind { random, gradient, zero, explicit_bumps };
enum class Mode { nonattenuated, attenuated };

const char* to_string(PhantomKind k);
const char* to_string(Mode m);
Mode parse_mode(const std::string& s);

struct PhantomConfig {
  PhantomKind kind = PhantomKind::random;
  std::uint64_t seed = 1;
  int bumps_per_component = 2;
  /// explicit_bumps: one list per component f1, f2, F11, F12, F22.
  std::array<std::vector<GaussianBump>, 5> bumps;
  /// gradient: bumps of the potential psi; empty means seeded random bumps.
  std::vector<GaussianBump> potential;
};

/// Used in attenuated mode only; an empty bump list gives a = 0.
struct AttenuationConfig {
  double support_radius = 0.85;
  std::vector<GaussianBump> bumps{{0.3, {0.1, -0.05}, 0.35}};  // non-negative amplitudes
};

struct RunConfig {
  Domain domain = Domain::disk(1.0);
  int resolution = 128;
  int n_boundary = 256;
  int n_angles = 256;
  int N = 32;
  double support_radius = 0.75;
  double h_ray = 1.0 / 128.0;
  PhantomConfig phantom;
  AttenuationConfig attenuation;
  Mode mode = Mode::nonattenuated;
  std::string out_dir = "amrt_out";
  double noise = 0.0;
  std::uint64_t noise_seed = 7;
  int threads = 0;  // 0: runtime default
  std::vector<int> convergence_resolutions{32, 64, 128};

  /// Throws ConfigError on violated invariants.
  void validate() const;

  PhantomSpec phantom_spec() const;
  ScalarSpec potential_spec() const;   // gradient phantoms
  ScalarSpec attenuation_spec() const;
  DomainGrid grid() const { return DomainGrid(domain, resolution); }
};

/// Reads the INI sections [domain] [grid] [sinogram] [reconstruction] [phantom]
/// [attenuation] [run] [convergence]; unknown keys are rejected.
RunConfig config_from_sections(const io::Sections& s);
RunConfig load_config(const std::string& path);
/// Fully resolved config, as embedded into every output file.
io::Sections config_sections(const RunConfig& c);

/// "amp cx cy width; amp cx cy width; ..."
std::vector<GaussianBump> parse_bumps(const std::string& text);
std::string format_bumps(const std::vector<GaussianBump>& bumps);

}  // namespace amrt::cli
