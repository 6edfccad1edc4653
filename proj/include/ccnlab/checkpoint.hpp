#pragma once

// Flat binary checkpoint format:
//   header { magic "CCNF", version u32, kind u8, nx u32, ny u32,
//            Lx f64, Ly f64, t f64 }
// followed by row-major little-endian f64 pairs (complex fields) or plain
// f64 (real fields).  Plus an RFC-4180 CSV writer for diagnostics series.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "ccnlab/errors.hpp"
#include "ccnlab/spectral.hpp"

namespace ccnlab {

inline constexpr uint32_t kCheckpointVersion = 1;

namespace detail {
template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace detail

inline void write_checkpoint(const std::string& path, const Field2D& f,
                             double t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(errc::io, "cannot open checkpoint for writing: " + path);
  os.write("CCNF", 4);
  detail::put(os, kCheckpointVersion);
  const uint8_t kind = f.kind == FieldKind::rgl_psi ? 0 : 1;
  detail::put(os, kind);
  detail::put(os, static_cast<uint32_t>(f.grid.nx));
  detail::put(os, static_cast<uint32_t>(f.grid.ny));
  detail::put(os, f.grid.Lx);
  detail::put(os, f.grid.Ly);
  detail::put(os, t);
  for (const cplx& v : f.values) {
    detail::put(os, v.real());
    if (kind == 0) detail::put(os, v.imag());
  }
  if (!os) fail(errc::io, "short write on checkpoint: " + path);
}

inline Field2D read_checkpoint(const std::string& path, double* t_out = nullptr) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(errc::io, "cannot open checkpoint: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CCNF", 4) != 0)
    fail(errc::io, "bad checkpoint magic: " + path);
  uint32_t version = 0, nx = 0, ny = 0;
  uint8_t kind = 0;
  double Lx = 0, Ly = 0, t = 0;
  detail::get(is, version);
  detail::get(is, kind);
  detail::get(is, nx);
  detail::get(is, ny);
  detail::get(is, Lx);
  detail::get(is, Ly);
  detail::get(is, t);
  if (version != kCheckpointVersion)
    fail(errc::io, "unsupported checkpoint version");
  PeriodicGrid2D g;
  g.nx = static_cast<int>(nx);
  g.ny = static_cast<int>(ny);
  g.Lx = Lx;
  g.Ly = Ly;
  Field2D f =
      Field2D::zeros(g, kind == 0 ? FieldKind::rgl_psi : FieldKind::ccn_phi);
  for (cplx& v : f.values) {
    double re = 0, im = 0;
    detail::get(is, re);
    if (kind == 0) detail::get(is, im);
    v = cplx(re, im);
  }
  if (!is) fail(errc::io, "truncated checkpoint: " + path);
  if (t_out) *t_out = t;
  return f;
}

// 17 significant digits: enough for bit-exact cross-language reproduction.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal RFC-4180 writer; fields containing separators or quotes are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : os_(path) {
    if (!os_) fail(errc::io, "cannot open CSV for writing: " + path);
  }
  void row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << escape(fields[i]);
    }
    os_ << "\r\n";
  }
  void numeric_row(const std::vector<double>& vals) {
    std::vector<std::string> f;
    f.reserve(vals.size());
    for (double v : vals) f.push_back(fmt17(v));
    row(f);
  }

 private:
  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
    return out;
  }
  std::ofstream os_;
};

}  // namespace ccnlab
