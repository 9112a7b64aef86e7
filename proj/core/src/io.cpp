#include "amrt/io.hpp"

#include <bit>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstring>
#include <fstream>
#include <sstream>

#include "amrt/errors.hpp"

namespace amrt::io {

static_assert(std::endian::native == std::endian::little, "grid files assume a little-endian host");

namespace {

constexpr const char* kMagic = "AMRT-GRID 1";
constexpr const char* kDataMarker = "%%DATA";

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Sections parse_ini(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message());
  }
  Sections out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key outside a section: " + section);
    auto& dst = out[section];
    for (const auto& [key, value] : body) dst[key] = value.data();
  }
  return out;
}

Sections read_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str());
}

std::string format_ini(const Sections& s) {
  std::ostringstream os;
  for (const auto& [section, body] : s) {
    os << '[' << section << "]\n";
    for (const auto& [k, v] : body) os << k << " = " << v << '\n';
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

const NamedArray& GridDocument::array(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return a;
  throw ConfigError("grid file has no array '" + name + "'");
}

bool GridDocument::has_array(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return true;
  return false;
}

std::string GridDocument::value(const std::string& section, const std::string& key) const {
  const auto s = header.find(section);
  if (s == header.end()) throw ConfigError("grid file lacks section [" + section + "]");
  const auto k = s->second.find(key);
  if (k == s->second.end()) throw ConfigError("grid file lacks " + section + "." + key);
  return k->second;
}

void write_grid_file(const std::string& path, const GridDocument& doc) {
  Sections header = doc.header;
  std::string names;
  std::size_t offset = 0;
  for (const auto& a : doc.arrays) {
    if (a.data.size() != static_cast<std::size_t>(a.rows) * a.cols)
      throw ArgumentError("array '" + a.name + "' has inconsistent dimensions");
    names += (names.empty() ? "" : ",") + a.name;
    auto& sec = header["array." + a.name];
    sec["rows"] = std::to_string(a.rows);
    sec["cols"] = std::to_string(a.cols);
    sec["offset"] = std::to_string(offset);
    offset += a.data.size();
  }
  header["arrays"]["names"] = names;
  header["arrays"]["count"] = std::to_string(doc.arrays.size());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << kMagic << '\n' << format_ini(header) << kDataMarker << '\n';
  for (const auto& a : doc.arrays)
    out.write(reinterpret_cast<const char*>(a.data.data()), static_cast<std::streamsize>(a.data.size() * 8));
  if (!out) throw ConfigError("write failed: " + path);
}

GridDocument read_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != kMagic) throw ConfigError(path + " is not a grid file");
  std::string text;
  bool found = false;
  while (std::getline(in, line)) {
    if (line == kDataMarker) {
      found = true;
      break;
    }
    text += line + '\n';
  }
  if (!found) throw ConfigError(path + ": missing data marker");
  GridDocument doc;
  doc.header = parse_ini(text);
  const auto arrays_it = doc.header.find("arrays");
  if (arrays_it == doc.header.end()) throw ConfigError(path + ": missing [arrays]");
  const std::streampos data_start = in.tellg();
  std::stringstream names(arrays_it->second.at("names"));
  std::string name;
  while (std::getline(names, name, ',')) {
    if (name.empty()) continue;
    NamedArray a;
    a.name = name;
    const auto& sec = doc.header.at("array." + name);
    a.rows = std::stoi(sec.at("rows"));
    a.cols = std::stoi(sec.at("cols"));
    const std::size_t offset = std::stoull(sec.at("offset"));
    a.data.resize(static_cast<std::size_t>(a.rows) * a.cols);
    in.seekg(data_start + static_cast<std::streamoff>(offset * 8));
    in.read(reinterpret_cast<char*>(a.data.data()), static_cast<std::streamsize>(a.data.size() * 8));
    if (!in) throw ConfigError(path + ": truncated data for '" + name + "'");
    doc.arrays.push_back(std::move(a));
  }
  doc.header.erase("arrays");
  for (auto it = doc.header.begin(); it != doc.header.end();)
    it = it->first.rfind("array.", 0) == 0 ? doc.header.erase(it) : std::next(it);
  return doc;
}

void put_domain(Sections& s, const Domain& d) {
  auto& sec = s["domain"];
  sec["kind"] = d.kind() == Domain::Kind::disk ? "disk" : "ellipse";
  if (d.kind() == Domain::Kind::disk) {
    sec["radius"] = format_double(d.semi_a());
  } else {
    sec["a"] = format_double(d.semi_a());
    sec["b"] = format_double(d.semi_b());
  }
}

Domain get_domain(const Sections& s) {
  const auto it = s.find("domain");
  if (it == s.end()) return Domain::disk(1.0);
  const auto& sec = it->second;
  auto num = [&](const char* key, double def) {
    const auto k = sec.find(key);
    if (k == sec.end()) return def;
    try {
      return std::stod(k->second);
    } catch (const std::exception&) {
      throw ConfigError(std::string("domain.") + key + " is not a number");
    }
  };
  const std::string kind = sec.count("kind") ? sec.at("kind") : "disk";
  if (kind == "disk") {
    const double r = num("radius", 1.0);
    if (!(r > 0.0)) throw ConfigError("domain.radius must be positive");
    return Domain::disk(r);
  }
  if (kind == "ellipse") {
    const double a = num("a", 1.0), b = num("b", 1.0);
    if (!(a > 0.0 && b > 0.0)) throw ConfigError("ellipse semi-axes must be positive");
    return Domain::ellipse(a, b);
  }
  throw ConfigError("unknown domain kind '" + kind + "'");
}

namespace {

void put_lattice(Sections& s, const DomainGrid& grid, const char* kind) {
  put_domain(s, grid.domain());
  auto& g = s["grid"];
  g["kind"] = kind;
  g["resolution"] = std::to_string(grid.resolution());
  g["spacing"] = format_double(grid.spacing());
  g["origin"] = format_double(grid.origin());
}

void check_lattice(const GridDocument& doc, const DomainGrid& grid, const char* kind) {
  if (doc.value("grid", "kind") != kind) throw ConfigError(std::string("expected a ") + kind + " grid file");
  if (std::stoi(doc.value("grid", "resolution")) != grid.resolution())
    throw ConfigError("grid resolution does not match the configuration");
}

NamedArray lattice_array(const std::string& name, const RealGrid& v, const DomainGrid& grid) {
  return {name, grid.nodes_per_axis(), grid.nodes_per_axis(), v};
}

}  // namespace

GridDocument fields_document(const FieldPair& fp, const DomainGrid& grid) {
  GridDocument doc;
  put_lattice(doc.header, grid, "fields");
  doc.header["grid"]["support_radius"] = format_double(fp.support_radius);
  const char* names[5] = {"f1", "f2", "F11", "F12", "F22"};
  const auto arrays = fp.arrays();
  for (int c = 0; c < 5; ++c) doc.arrays.push_back(lattice_array(names[c], *arrays[c], grid));
  return doc;
}

FieldPair fields_from_document(const GridDocument& doc, const DomainGrid& grid) {
  check_lattice(doc, grid, "fields");
  FieldPair fp = FieldPair::zeros(grid.size(), std::stod(doc.value("grid", "support_radius")));
  const char* names[5] = {"f1", "f2", "F11", "F12", "F22"};
  auto arrays = fp.arrays();
  for (int c = 0; c < 5; ++c) {
    const NamedArray& a = doc.array(names[c]);
    if (a.data.size() != grid.size()) throw ConfigError("field array size mismatch");
    *arrays[c] = a.data;
  }
  return fp;
}

GridDocument attenuation_document(const RealGrid& a, const DomainGrid& grid) {
  GridDocument doc;
  put_lattice(doc.header, grid, "attenuation");
  doc.arrays.push_back(lattice_array("a", a, grid));
  return doc;
}

RealGrid attenuation_from_document(const GridDocument& doc, const DomainGrid& grid) {
  check_lattice(doc, grid, "attenuation");
  const NamedArray& a = doc.array("a");
  if (a.data.size() != grid.size()) throw ConfigError("attenuation array size mismatch");
  return a.data;
}

GridDocument sinogram_document(const MomentSinogram& ms) {
  GridDocument doc;
  put_domain(doc.header, ms.layout.domain);
  auto& g = doc.header["grid"];
  g["kind"] = "sinogram";
  g["n_boundary"] = std::to_string(ms.layout.n_boundary);
  g["n_angles"] = std::to_string(ms.layout.n_angles);
  g["h_ray"] = format_double(ms.h_ray);
  g["quadrature"] = "composite simpson, bilinear or analytic field sampling";
  const int nb = ms.layout.n_boundary, na = ms.layout.n_angles;
  for (int k = 0; k < 3; ++k) doc.arrays.push_back({"M" + std::to_string(k), nb, na, ms.layers[k]});
  doc.arrays.push_back({"outgoing", nb, na, std::vector<double>(ms.outgoing.begin(), ms.outgoing.end())});
  std::vector<double> theta(nb), phi(na);
  for (int i = 0; i < nb; ++i) theta[i] = ms.layout.theta(i);
  for (int j = 0; j < na; ++j) phi[j] = ms.layout.phi(j);
  doc.arrays.push_back({"theta", 1, nb, theta});
  doc.arrays.push_back({"phi", 1, na, phi});
  return doc;
}

MomentSinogram sinogram_from_document(const GridDocument& doc) {
  if (doc.value("grid", "kind") != "sinogram") throw ConfigError("expected a sinogram grid file");
  SinogramLayout layout{get_domain(doc.header), std::stoi(doc.value("grid", "n_boundary")),
                        std::stoi(doc.value("grid", "n_angles"))};
  MomentSinogram ms = MomentSinogram::zeros(layout);
  ms.h_ray = std::stod(doc.value("grid", "h_ray"));
  for (int k = 0; k < 3; ++k) {
    const std::string name = "M" + std::to_string(k);
    if (!doc.has_array(name)) {
      ms.layers[k].clear();
      continue;
    }
    const NamedArray& a = doc.array(name);
    if (a.data.size() != layout.size()) throw ConfigError("sinogram layer size mismatch");
    ms.layers[k] = a.data;
  }
  if (doc.has_array("outgoing")) {
    const NamedArray& o = doc.array("outgoing");
    if (o.data.size() != layout.size()) throw ConfigError("outgoing mask size mismatch");
    for (std::size_t i = 0; i < o.data.size(); ++i) ms.outgoing[i] = o.data[i] != 0.0 ? 1 : 0;
  }
  return ms;
}

Sections report_sections(const ReconstructionReport& r) {
  Sections s;
  auto& m = s["metrics"];
  m["mode"] = r.mode;
  m["rel_l2_f"] = format_double(r.rel_l2_f);
  m["rel_l2_F"] = format_double(r.rel_l2_F);
  auto& st = s["stability"];
  st["lhs"] = format_double(r.stability_lhs);
  st["rhs"] = format_double(r.stability_rhs);
  st["ratio"] = format_double(r.ratio);
  st["boundary_norm"] = "order-k periodic difference norms on Gamma stand in for the k+1/2 trace norms";
  for (const auto& [k, v] : r.diagnostics) s["diagnostics"][k] = format_double(v);
  for (const auto& [k, v] : r.stage_seconds) s["timing"][k] = format_double(v);
  for (std::size_t i = 0; i < r.warnings.size(); ++i) s["warnings"]["w" + std::to_string(i)] = r.warnings[i];
  return s;
}

}  // namespace amrt::io
