#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "levylab/errors.hpp"
#include "levylab/lattice.hpp"

namespace levylab::io {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : os_(path) {
    if (!os_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

  void row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << num(cells[i]);
    os_ << '\n';
  }

 private:
  std::ofstream os_;
};

inline std::vector<std::string> axis_names(const std::string& prefix, int dim) {
  std::vector<std::string> h;
  for (int i = 0; i < dim; ++i) h.push_back(prefix + std::to_string(i + 1));
  return h;
}

inline std::vector<double> coords(const LatticePoint& p, int dim) {
  std::vector<double> v;
  for (int i = 0; i < dim; ++i) v.push_back(p[i]);
  return v;
}

/// Lattice field as CSV rows (k_1..k_n, value...).
inline void write_fields(const std::filesystem::path& path, const std::vector<std::string>& names,
                         const std::vector<const LatticeField*>& fields) {
  if (fields.empty()) return;
  const int dim = fields.front()->dim();
  auto header = axis_names("k", dim);
  header.insert(header.end(), names.begin(), names.end());
  CsvWriter w(path, header);
  int radius = 0;
  for (const auto* f : fields) radius = std::max(radius, f->radius());
  const LatticeField shape(dim, radius);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const LatticePoint k = shape.site(i);
    std::vector<double> r = coords(k, dim);
    for (const auto* f : fields) r.push_back((*f)(k));
    w.row(r);
  }
}

}  // namespace levylab::io
