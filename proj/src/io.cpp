#include "fhlab/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "fhlab/errors.hpp"

#ifndef FHLAB_VERSION
#define FHLAB_VERSION "unknown"
#endif

namespace fhlab {

static_assert(std::endian::native == std::endian::little, "batch format assumes a little-endian host");

std::string version_string() { return FHLAB_VERSION; }

std::string config_hash(const json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::string& version, const std::string& hash)
    : path_(path), ncol_(columns.size()), f_(std::fopen(path.c_str(), "w")) {
  if (!f_) throw std::runtime_error("cannot open " + path + " for writing");
  std::fprintf(f_, "# version=%s config_hash=%s\n", version.c_str(), hash.c_str());
  for (std::size_t i = 0; i < columns.size(); ++i)
    std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
  std::fputc('\n', f_);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncol_) throw std::runtime_error("CSV row width mismatch in " + path_);
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%s%s", i ? "," : "", format_double(values[i]).c_str());
  std::fputc('\n', f_);
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != ncol_) throw std::runtime_error("CSV row width mismatch in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) std::fprintf(f_, "%s%s", i ? "," : "", cells[i].c_str());
  std::fputc('\n', f_);
}

void write_spectrum_csv(const std::string& path, const Spectrum& s, const std::string& version,
                        const std::string& hash) {
  CsvWriter w(path, {"index", "re", "im"}, version, hash);
  for (std::size_t i = 0; i < s.points.size(); ++i)
    w.row({static_cast<double>(i), s.points[i].real(), s.points[i].imag()});
}

void write_kernel_norms_csv(const std::string& path, const PlanarKernel& k, const std::string& version,
                            const std::string& hash) {
  CsvWriter w(path, {"k", "log_h"}, version, hash);
  for (int i = 0; i < k.n; ++i) w.row({static_cast<double>(i), k.log_norms[i]});
}

void write_batch(const std::string& path, const std::vector<Spectrum>& batch, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::uint64_t n = batch.empty() ? 0 : static_cast<std::uint64_t>(batch.front().n);
  const std::uint64_t tag = batch.empty() ? 0 : static_cast<std::uint64_t>(batch.front().method);
  const std::uint64_t hdr[4] = {n, batch.size(), seed, tag};
  out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
  for (const auto& s : batch) {
    if (static_cast<std::uint64_t>(s.points.size()) != n) throw DomainError("batch spectra differ in size");
    out.write(reinterpret_cast<const char*>(s.points.data()),
              static_cast<std::streamsize>(s.points.size() * sizeof(std::complex<double>)));
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<Spectrum> read_batch(const std::string& path, std::uint64_t* seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t hdr[4];
  in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  if (!in) throw std::runtime_error("truncated batch header in " + path);
  if (seed) *seed = hdr[2];
  if (hdr[3] > 4) throw std::runtime_error("unknown method tag in " + path);
  const auto method = static_cast<SamplerMethod>(hdr[3]);
  std::vector<Spectrum> out(hdr[1]);
  for (auto& s : out) {
    s.n = static_cast<int>(hdr[0]);
    s.method = method;
    s.moduli_only = method == SamplerMethod::KostlanModuli;
    s.points.resize(hdr[0]);
    in.read(reinterpret_cast<char*>(s.points.data()),
            static_cast<std::streamsize>(hdr[0] * sizeof(std::complex<double>)));
    if (!in) throw std::runtime_error("truncated batch payload in " + path);
  }
  return out;
}

json to_json(const Droplet& d) {
  json j;
  if (d.shape == DropletShape::Disk) {
    j["shape"] = "disk";
    j["coefficients"] = {d.radius};
  } else {
    j["shape"] = "exterior_map";
    json c = json::array();
    for (const auto& x : d.laurent) c.push_back({x.real(), x.imag()});
    j["coefficients"] = c;
  }
  j["capacity_log"] = d.capacity_log;
  return j;
}

json to_json(const PotentialSpec& v) {
  json j;
  switch (v.kind) {
    case PotentialKind::Ginibre: j["kind"] = "ginibre"; break;
    case PotentialKind::RadialEven:
      j["kind"] = "radial_even";
      j["coefficients"] = v.coeffs;
      break;
    case PotentialKind::Custom: j["kind"] = "custom"; break;
  }
  return j;
}

}  // namespace fhlab
