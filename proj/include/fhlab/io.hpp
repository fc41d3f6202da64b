#pragma once

#include <json.hpp>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "fhlab/kernel.hpp"
#include "fhlab/potential.hpp"
#include "fhlab/sampler.hpp"

namespace fhlab {

using json = nlohmann::json;

std::string version_string();
// FNV-1a 64-bit over the canonical (sorted-key, compact) dump, as hex.
std::string config_hash(const json& config);
std::string format_double(double x);

// CSV with a leading "# version=... config_hash=..." line, then the header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::string& version, const std::string& hash);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);

 private:
  std::string path_;
  std::size_t ncol_;
  std::FILE* f_;
};

void write_spectrum_csv(const std::string& path, const Spectrum& s, const std::string& version,
                        const std::string& hash);
void write_kernel_norms_csv(const std::string& path, const PlanarKernel& k,
                            const std::string& version, const std::string& hash);

// Binary batch: four little-endian u64 (n, count, seed, method tag) then
// count * n pairs of little-endian f64 (re, im).
void write_batch(const std::string& path, const std::vector<Spectrum>& batch, std::uint64_t seed);
std::vector<Spectrum> read_batch(const std::string& path, std::uint64_t* seed = nullptr);

json to_json(const Droplet& d);
json to_json(const PotentialSpec& v);

}  // namespace fhlab
