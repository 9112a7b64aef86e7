#include "amrt/cli/commands.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "amrt/errors.hpp"
#include "amrt/io.hpp"
#include "amrt/pipeline.hpp"

namespace amrt::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kConfigPrefix = "config.";

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string out_path(const RunConfig& c, const char* name) {
  fs::create_directories(c.out_dir);
  return (fs::path(c.out_dir) / name).string();
}

void check_domain(const Domain& found, const Domain& expected, const std::string& what) {
  if (found.kind() != expected.kind() || found.semi_a() != expected.semi_a() || found.semi_b() != expected.semi_b())
    throw ConfigError(what + " was written for a different domain");
}

TensorSampler phantom_sampler(const RunConfig& c) {
  if (c.phantom.kind == PhantomKind::gradient) return gradient_sampler(c.potential_spec());
  Phantom ph(c.phantom_spec());
  return [ph](Vec2 x) { return ph(x); };
}

Attenuation config_attenuation(const RunConfig& c) {
  if (c.mode != Mode::attenuated || c.attenuation.bumps.empty()) return Attenuation::none();
  return Attenuation::from_spec(c.attenuation_spec(), c.domain);
}

Attenuation file_attenuation(const RunConfig& c, const DomainGrid& grid, const std::string& path) {
  if (c.mode != Mode::attenuated) return Attenuation::none();
  if (path.empty()) throw ConfigError("attenuated mode requires an attenuation file (--attenuation)");
  const io::GridDocument doc = io::read_grid_file(path);
  check_domain(io::get_domain(doc.header), c.domain, path);
  return Attenuation::from_grid(grid, io::attenuation_from_document(doc, grid));
}

ReconstructionOptions recon_options(const RunConfig& c) {
  ReconstructionOptions o;
  o.N = c.N;
  return o;
}

Reconstruction reconstruct(const RunConfig& c, const MomentSinogram& ms, const Attenuation& att,
                           const DomainGrid& grid) {
  if (ms.layout.n_angles < 2 * c.N + 2) throw ConfigError("sinogram has fewer than 2N+2 angles");
  return c.mode == Mode::attenuated ? reconstruct_attenuated(ms, att, grid, recon_options(c))
                                    : reconstruct_nonattenuated(ms, grid, recon_options(c));
}

void write_report(const RunConfig& c, const ReconstructionReport& r, const char* name) {
  io::Sections s = io::report_sections(r);
  embed_config(s, c);
  io::write_text(out_path(c, name), io::format_ini(s));
}

void write_fields(const RunConfig& c, const FieldPair& fp, const DomainGrid& grid, const char* name) {
  io::GridDocument doc = io::fields_document(fp, grid);
  embed_config(doc.header, c);
  io::write_grid_file(out_path(c, name), doc);
}

}  // namespace

RunConfig resolve_config(const Overrides& o) {
  RunConfig c = o.config_path ? load_config(*o.config_path) : RunConfig{};
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.seed) c.phantom.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (o.noise) c.noise = *o.noise;
  if (o.mode) c.mode = parse_mode(*o.mode);
  c.validate();
  return c;
}

void embed_config(io::Sections& s, const RunConfig& c) {
  for (const auto& [sec, kv] : config_sections(c)) s[kConfigPrefix + sec] = kv;
}

RunConfig embedded_config(const io::Sections& s) {
  io::Sections cfg;
  const std::string prefix = kConfigPrefix;
  for (const auto& [sec, kv] : s)
    if (sec.rfind(prefix, 0) == 0) cfg[sec.substr(prefix.size())] = kv;
  if (cfg.empty()) throw ConfigError("file carries no embedded config");
  return config_from_sections(cfg);
}

void cmd_phantom(const RunConfig& c, std::ostream& log) {
  const DomainGrid grid = c.grid();
  const FieldPair fp = sample_fields(phantom_sampler(c), grid, c.support_radius);
  write_fields(c, fp, grid, kFieldsFile);
  const Attenuation att = config_attenuation(c);
  io::GridDocument adoc = io::attenuation_document(att.sample(grid), grid);
  embed_config(adoc.header, c);
  io::write_grid_file(out_path(c, kAttenuationFile), adoc);
  io::Sections cs = config_sections(c);
  io::write_text(out_path(c, kConfigFile), io::format_ini(cs));
  log << "phantom: wrote " << kFieldsFile << ", " << kAttenuationFile << ", " << kConfigFile << " to " << c.out_dir
      << "\n";
}

void cmd_forward(const RunConfig& c, const std::string& fields_path, const std::string& attenuation_path,
                 std::ostream& log) {
  if (fields_path.empty()) throw ConfigError("forward requires a fields file (--fields)");
  const DomainGrid grid = c.grid();
  const io::GridDocument fdoc = io::read_grid_file(fields_path);
  check_domain(io::get_domain(fdoc.header), c.domain, fields_path);
  const FieldPair fp = io::fields_from_document(fdoc, grid);
  const Attenuation att = file_attenuation(c, grid, attenuation_path);
  MomentSinogram ms = forward_all(fp, grid, att, c.n_boundary, c.n_angles);
  if (c.noise > 0.0) add_noise(ms, c.noise, c.noise_seed);
  io::GridDocument doc = io::sinogram_document(ms);
  doc.header["grid"]["field_sampling"] = "bilinear interpolation of the lattice fields";
  doc.header["grid"]["noise"] = fmt(c.noise);
  embed_config(doc.header, c);
  io::write_grid_file(out_path(c, kSinogramFile), doc);
  log << "forward: wrote " << kSinogramFile << " (" << ms.layout.n_boundary << " x " << ms.layout.n_angles
      << ", h_ray " << ms.h_ray << ")\n";
}

void cmd_reconstruct(const RunConfig& c, const std::string& sinogram_path, const std::string& attenuation_path,
                     std::ostream& log) {
  if (sinogram_path.empty()) throw ConfigError("reconstruct requires a sinogram file (--sinogram)");
  const DomainGrid grid = c.grid();
  const io::GridDocument sdoc = io::read_grid_file(sinogram_path);
  check_domain(io::get_domain(sdoc.header), c.domain, sinogram_path);
  const MomentSinogram ms = io::sinogram_from_document(sdoc);
  const Attenuation att = file_attenuation(c, grid, attenuation_path);
  Reconstruction r = reconstruct(c, ms, att, grid);
  const StabilityRatio sr = stability_ratio(r.fields, ms, grid, c.N);
  r.report.stability_lhs = sr.lhs;
  r.report.stability_rhs = sr.rhs;
  r.report.ratio = sr.ratio;
  r.report.rel_l2_f = std::numeric_limits<double>::quiet_NaN();
  r.report.rel_l2_F = std::numeric_limits<double>::quiet_NaN();
  write_fields(c, r.fields, grid, kReconFile);
  write_report(c, r.report, kReportFile);
  for (const auto& w : r.report.warnings) log << "warning: " << w << "\n";
  log << "reconstruct: wrote " << kReconFile << " and " << kReportFile << " to " << c.out_dir << "\n";
}

RoundTripResult roundtrip(const RunConfig& c, bool write, std::ostream& log) {
  const DomainGrid grid = c.grid();
  const TensorSampler field = phantom_sampler(c);
  const Attenuation att = config_attenuation(c);
  ForwardOptions fo;
  fo.n_boundary = c.n_boundary;
  fo.n_angles = c.n_angles;
  fo.h_ray = c.h_ray;
  MomentSinogram ms = forward_all(field, att, c.domain, fo);
  if (c.noise > 0.0) add_noise(ms, c.noise, c.noise_seed);
  Reconstruction r = reconstruct(c, ms, att, grid);
  const FieldPair truth = sample_fields(field, grid, c.support_radius);
  const auto [ef, eF] = relative_errors(r.fields, truth, grid, c.support_radius);
  const StabilityRatio sr = stability_ratio(truth, ms, grid, c.N);
  r.report.rel_l2_f = ef;
  r.report.rel_l2_F = eF;
  r.report.stability_lhs = sr.lhs;
  r.report.stability_rhs = sr.rhs;
  r.report.ratio = sr.ratio;
  if (write) {
    write_fields(c, r.fields, grid, kReconFile);
    write_report(c, r.report, kReportFile);
  }
  for (const auto& w : r.report.warnings) log << "warning: " << w << "\n";
  log << "roundtrip " << to_string(c.mode) << " at " << c.resolution << ": rel_l2_f " << ef << ", rel_l2_F " << eF
      << ", stability ratio " << sr.ratio << "\n";
  return {ef, eF, r.report};
}

void cmd_roundtrip(const RunConfig& c, std::ostream& log) { roundtrip(c, true, log); }

void cmd_convergence(const RunConfig& c, std::ostream& log) {
  io::Sections s;
  std::vector<RoundTripResult> results;
  for (int res : c.convergence_resolutions) {
    RunConfig rc = c;
    rc.resolution = res;
    results.push_back(roundtrip(rc, false, log));
    auto& sec = s["resolution." + std::to_string(res)];
    const auto& r = results.back();
    sec["rel_l2_f"] = fmt(r.rel_l2_f);
    sec["rel_l2_F"] = fmt(r.rel_l2_F);
    sec["stability_ratio"] = fmt(r.report.ratio);
    for (const auto& [k, v] : r.report.diagnostics) sec[k] = fmt(v);
  }
  auto& orders = s["orders"];
  for (std::size_t i = 0; i + 1 < results.size(); ++i) {
    const int r0 = c.convergence_resolutions[i], r1 = c.convergence_resolutions[i + 1];
    const double scale = std::log(static_cast<double>(r1) / r0);
    const std::string tag = std::to_string(r0) + "_" + std::to_string(r1);
    orders["f_" + tag] = fmt(std::log(results[i].rel_l2_f / results[i + 1].rel_l2_f) / scale);
    orders["F_" + tag] = fmt(std::log(results[i].rel_l2_F / results[i + 1].rel_l2_F) / scale);
  }
  embed_config(s, c);
  io::write_text(out_path(c, kConvergenceFile), io::format_ini(s));
  log << "convergence: wrote " << kConvergenceFile << " to " << c.out_dir << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attenuated moment ray transform reconstruction of vector and 2-tensor fields"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::string config_path, out_dir, mode;
  std::uint64_t seed = 0;
  int threads = 0;
  double noise = 0.0;
  auto* opt_config = app.add_option("--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
  auto* opt_out = app.add_option("--out", out_dir, "output directory");
  auto* opt_seed = app.add_option("--seed", seed, "phantom seed");
  auto* opt_threads = app.add_option("--threads", threads, "worker thread cap (0: runtime default)")
                          ->check(CLI::NonNegativeNumber);
  auto* opt_noise = app.add_option("--noise", noise, "relative Gaussian noise level added to the sinogram")
                        ->check(CLI::NonNegativeNumber);
  auto* opt_mode = app.add_option("--mode", mode, "reconstruction mode")
                       ->check(CLI::IsMember({"non-attenuated", "attenuated"}));

  std::string fields_path, attenuation_path, sinogram_path;
  auto* phantom = app.add_subcommand("phantom", "write phantom fields and attenuation grids");
  auto* forward = app.add_subcommand("forward", "compute the moment sinogram of a fields file");
  forward->add_option("--fields", fields_path, "fields grid file")->required();
  forward->add_option("--attenuation", attenuation_path, "attenuation grid file (attenuated mode)");
  auto* recon = app.add_subcommand("reconstruct", "reconstruct fields from a sinogram file");
  recon->add_option("--sinogram", sinogram_path, "sinogram grid file")->required();
  recon->add_option("--attenuation", attenuation_path, "attenuation grid file (attenuated mode)");
  auto* rt = app.add_subcommand("roundtrip", "phantom, forward, reconstruct and compare");
  auto* conv = app.add_subcommand("convergence", "round trips over several resolutions");

  std::vector<const char*> argv{"amrt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  if (*opt_config) o.config_path = config_path;
  if (*opt_out) o.out_dir = out_dir;
  if (*opt_seed) o.seed = seed;
  if (*opt_threads) o.threads = threads;
  if (*opt_noise) o.noise = noise;
  if (*opt_mode) o.mode = mode;

  try {
    const RunConfig c = resolve_config(o);
    if (c.threads > 0) omp_set_num_threads(c.threads);
    if (*phantom) cmd_phantom(c, out);
    if (*forward) cmd_forward(c, fields_path, attenuation_path, out);
    if (*recon) cmd_reconstruct(c, sinogram_path, attenuation_path, out);
    if (*rt) cmd_roundtrip(c, out);
    if (*conv) cmd_convergence(c, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const StageError& e) {
    err << "stage failure [" << e.stage() << "]: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace amrt::cli
