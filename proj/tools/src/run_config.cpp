#include "amrt/cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "amrt/errors.hpp"

namespace amrt::cli {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class Reader {
 public:
  explicit Reader(const io::Sections& s) : s_(s) {}

  bool has(const std::string& sec, const std::string& key) const {
    const auto it = s_.find(sec);
    return it != s_.end() && it->second.count(key) > 0;
  }
  std::string str(const std::string& sec, const std::string& key, const std::string& def) const {
    return has(sec, key) ? s_.at(sec).at(key) : def;
  }
  double num(const std::string& sec, const std::string& key, double def) const {
    if (!has(sec, key)) return def;
    const std::string& v = s_.at(sec).at(key);
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(sec + "." + key + " is not a number");
  }
  long long integer(const std::string& sec, const std::string& key, long long def) const {
    const double d = num(sec, key, static_cast<double>(def));
    if (d != std::floor(d)) throw ConfigError(sec + "." + key + " must be an integer");
    return static_cast<long long>(d);
  }

 private:
  const io::Sections& s_;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"domain", {"kind", "radius", "a", "b"}},
      {"grid", {"resolution", "support_radius"}},
      {"sinogram", {"n_boundary", "n_angles", "h_ray"}},
      {"reconstruction", {"N", "mode"}},
      {"phantom", {"kind", "seed", "bumps_per_component", "f1", "f2", "F11", "F12", "F22", "psi"}},
      {"attenuation", {"support_radius", "bumps"}},
      {"run", {"out_dir", "noise", "noise_seed", "threads"}},
      {"convergence", {"resolutions"}},
  };
  return keys;
}

PhantomKind parse_kind(const std::string& s) {
  if (s == "random") return PhantomKind::random;
  if (s == "gradient") return PhantomKind::gradient;
  if (s == "zero") return PhantomKind::zero;
  if (s == "explicit") return PhantomKind::explicit_bumps;
  throw ConfigError("phantom.kind must be random, gradient, zero or explicit");
}

const char* kComponentKeys[5] = {"f1", "f2", "F11", "F12", "F22"};

std::uint64_t non_negative(long long v, const char* what) {
  if (v < 0) throw ConfigError(std::string(what) + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

void check_resolution(int r, const char* what) {
  if (r < 8 || (r & (r - 1)) != 0) throw ConfigError(std::string(what) + " must be a power of two >= 8");
}

}  // namespace

const char* to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::random: return "random";
    case PhantomKind::gradient: return "gradient";
    case PhantomKind::zero: return "zero";
    case PhantomKind::explicit_bumps: return "explicit";
  }
  return "?";
}

const char* to_string(Mode m) { return m == Mode::attenuated ? "attenuated" : "non-attenuated"; }

Mode parse_mode(const std::string& s) {
  if (s == "non-attenuated" || s == "nonattenuated") return Mode::nonattenuated;
  if (s == "attenuated") return Mode::attenuated;
  throw ConfigError("mode must be non-attenuated or attenuated");
}

std::vector<GaussianBump> parse_bumps(const std::string& text) {
  std::vector<GaussianBump> out;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (item.substr(first, 4) == "none") continue;
    std::istringstream is(item);
    GaussianBump b;
    if (!(is >> b.amplitude >> b.center.x >> b.center.y >> b.width))
      throw ConfigError("bump entries are 'amplitude cx cy width' separated by ';'");
    std::string rest;
    if (is >> rest) throw ConfigError("bump entry has extra fields: " + item);
    out.push_back(b);
  }
  return out;
}

std::string format_bumps(const std::vector<GaussianBump>& bumps) {
  if (bumps.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    const auto& b = bumps[i];
    if (i) out += "; ";
    out += fmt(b.amplitude) + " " + fmt(b.center.x) + " " + fmt(b.center.y) + " " + fmt(b.width);
  }
  return out;
}

RunConfig config_from_sections(const io::Sections& s) {
  for (const auto& [sec, kv] : s) {
    const auto it = known_keys().find(sec);
    if (it == known_keys().end()) throw ConfigError("unknown config section [" + sec + "]");
    for (const auto& entry : kv)
      if (!it->second.count(entry.first)) throw ConfigError("unknown config key " + sec + "." + entry.first);
  }
  Reader r(s);
  RunConfig c;
  c.domain = io::get_domain(s);
  c.resolution = static_cast<int>(r.integer("grid", "resolution", c.resolution));
  c.support_radius = r.num("grid", "support_radius", c.support_radius);
  c.n_boundary = static_cast<int>(r.integer("sinogram", "n_boundary", c.n_boundary));
  c.n_angles = static_cast<int>(r.integer("sinogram", "n_angles", c.n_angles));
  c.h_ray = r.num("sinogram", "h_ray", c.h_ray);
  c.N = static_cast<int>(r.integer("reconstruction", "N", c.N));
  c.mode = parse_mode(r.str("reconstruction", "mode", to_string(c.mode)));
  c.phantom.kind = parse_kind(r.str("phantom", "kind", to_string(c.phantom.kind)));
  c.phantom.seed = non_negative(r.integer("phantom", "seed", static_cast<long long>(c.phantom.seed)), "phantom.seed");
  c.phantom.bumps_per_component =
      static_cast<int>(r.integer("phantom", "bumps_per_component", c.phantom.bumps_per_component));
  for (int k = 0; k < 5; ++k) c.phantom.bumps[k] = parse_bumps(r.str("phantom", kComponentKeys[k], ""));
  c.phantom.potential = parse_bumps(r.str("phantom", "psi", ""));
  c.attenuation.support_radius = r.num("attenuation", "support_radius", c.attenuation.support_radius);
  if (r.has("attenuation", "bumps")) c.attenuation.bumps = parse_bumps(r.str("attenuation", "bumps", ""));
  c.out_dir = r.str("run", "out_dir", c.out_dir);
  c.noise = r.num("run", "noise", c.noise);
  c.noise_seed = non_negative(r.integer("run", "noise_seed", static_cast<long long>(c.noise_seed)), "run.noise_seed");
  c.threads = static_cast<int>(r.integer("run", "threads", c.threads));
  if (r.has("convergence", "resolutions")) {
    c.convergence_resolutions.clear();
    std::stringstream ss(r.str("convergence", "resolutions", ""));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw ConfigError("");
        c.convergence_resolutions.push_back(v);
      } catch (const std::exception&) {
        throw ConfigError("convergence.resolutions must be a comma separated list of integers");
      }
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) { return config_from_sections(io::read_ini(path)); }

io::Sections config_sections(const RunConfig& c) {
  io::Sections s;
  io::put_domain(s, c.domain);
  s["grid"]["resolution"] = std::to_string(c.resolution);
  s["grid"]["support_radius"] = fmt(c.support_radius);
  s["sinogram"]["n_boundary"] = std::to_string(c.n_boundary);
  s["sinogram"]["n_angles"] = std::to_string(c.n_angles);
  s["sinogram"]["h_ray"] = fmt(c.h_ray);
  s["reconstruction"]["N"] = std::to_string(c.N);
  s["reconstruction"]["mode"] = to_string(c.mode);
  auto& ph = s["phantom"];
  ph["kind"] = to_string(c.phantom.kind);
  ph["seed"] = std::to_string(c.phantom.seed);
  ph["bumps_per_component"] = std::to_string(c.phantom.bumps_per_component);
  for (int k = 0; k < 5; ++k) ph[kComponentKeys[k]] = format_bumps(c.phantom.bumps[k]);
  ph["psi"] = format_bumps(c.phantom.potential);
  s["attenuation"]["support_radius"] = fmt(c.attenuation.support_radius);
  s["attenuation"]["bumps"] = format_bumps(c.attenuation.bumps);
  s["run"]["out_dir"] = c.out_dir;
  s["run"]["noise"] = fmt(c.noise);
  s["run"]["noise_seed"] = std::to_string(c.noise_seed);
  s["run"]["threads"] = std::to_string(c.threads);
  std::string res;
  for (std::size_t i = 0; i < c.convergence_resolutions.size(); ++i)
    res += (i ? "," : "") + std::to_string(c.convergence_resolutions[i]);
  s["convergence"]["resolutions"] = res;
  return s;
}

void RunConfig::validate() const {
  check_resolution(resolution, "grid.resolution");
  for (int r : convergence_resolutions) check_resolution(r, "convergence.resolutions");
  if (convergence_resolutions.size() < 2) throw ConfigError("convergence needs at least two resolutions");
  if (N < 3) throw ConfigError("reconstruction.N must be at least 3");
  if (n_angles < 2 * N + 2) throw ConfigError("sinogram.n_angles must be at least 2N+2");
  if (n_boundary < 16) throw ConfigError("sinogram.n_boundary must be at least 16");
  if (!(h_ray > 0.0)) throw ConfigError("sinogram.h_ray must be positive");
  if (!(noise >= 0.0)) throw ConfigError("run.noise must be non-negative");
  if (threads < 0) throw ConfigError("run.threads must be non-negative");
  if (phantom.bumps_per_component < 0) throw ConfigError("phantom.bumps_per_component must be non-negative");
  if (phantom.kind == PhantomKind::gradient)
    amrt::validate(potential_spec(), domain);
  else
    amrt::validate(phantom_spec(), domain);
  if (mode == Mode::attenuated) {
    const ScalarSpec a = attenuation_spec();
    amrt::validate(a, domain);
    for (const auto& b : a.bumps)
      if (b.amplitude < 0.0) throw ConfigError("attenuation amplitudes must be non-negative");
  }
}

PhantomSpec RunConfig::phantom_spec() const {
  PhantomSpec spec;
  spec.support_radius = support_radius;
  if (phantom.kind == PhantomKind::random) {
    RandomPhantomOptions o;
    o.support_radius = support_radius;
    o.bumps_per_component = phantom.bumps_per_component;
    spec = random_phantom_spec(phantom.seed, o);
  } else if (phantom.kind == PhantomKind::explicit_bumps) {
    spec.bumps = phantom.bumps;
  }
  return spec;
}

ScalarSpec RunConfig::potential_spec() const {
  if (!phantom.potential.empty()) return {support_radius, phantom.potential};
  RandomPhantomOptions o;
  o.support_radius = support_radius;
  o.bumps_per_component = std::max(phantom.bumps_per_component, 1);
  return random_scalar_spec(phantom.seed, o);
}

ScalarSpec RunConfig::attenuation_spec() const { return {attenuation.support_radius, attenuation.bumps}; }

}  // namespace amrt::cli
