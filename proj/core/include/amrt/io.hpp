#pragma once

#include <map>
#include <string>
#include <vector>

#include "amrt/fields.hpp"
#include "amrt/forward.hpp"
#include "amrt/pipeline.hpp"

namespace amrt::io {

/// Flat key/value sections, as in an INI document.
using Sections = std::map<std::string, std::map<std::string, std::string>>;

struct NamedArray {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major
};

/// Header block (INI text after the magic line) followed by "%%DATA" and raw
/// little-endian float64 arrays.
struct GridDocument {
  Sections header;  // must not use the reserved sections "arrays" and "array.*"
  std::vector<NamedArray> arrays;

  const NamedArray& array(const std::string& name) const;
  bool has_array(const std::string& name) const;
  std::string value(const std::string& section, const std::string& key) const;  // throws ConfigError
};

void write_grid_file(const std::string& path, const GridDocument& doc);
GridDocument read_grid_file(const std::string& path);

Sections read_ini(const std::string& path);
Sections parse_ini(const std::string& text);
std::string format_ini(const Sections& s);
void write_text(const std::string& path, const std::string& text);

void put_domain(Sections& s, const Domain& d);
Domain get_domain(const Sections& s);

GridDocument fields_document(const FieldPair& fp, const DomainGrid& grid);
FieldPair fields_from_document(const GridDocument& doc, const DomainGrid& grid);

GridDocument attenuation_document(const RealGrid& a, const DomainGrid& grid);
RealGrid attenuation_from_document(const GridDocument& doc, const DomainGrid& grid);

GridDocument sinogram_document(const MomentSinogram& ms);
MomentSinogram sinogram_from_document(const GridDocument& doc);

Sections report_sections(const ReconstructionReport& r);

}  // namespace amrt::io
