#pragma once

// File formats shared by the CLI and the library: columnar CSV exports of
// path batches and histograms, and the flat key-value config format used
// for model parameters and calibration settings.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "adcir/mc.hpp"

namespace adcir {

// Header `path,step,t,r,s`.
void write_path_batch_csv(const PathBatch& batch, std::ostream& out,
                          const std::vector<std::string>& comment_lines = {});

// Header `bin_lo,bin_hi,mass`.
void write_histogram_csv(const Histogram1D& h, std::ostream& out,
                         const std::vector<std::string>& comment_lines = {});

// Header `r_lo,r_hi,s_lo,s_hi,mass`.
void write_histogram_csv(const Histogram2D& h, std::ostream& out,
                         const std::vector<std::string>& comment_lines = {});

// Flat `key = value` files; '#' starts a comment, blank lines are ignored.
using KeyValueMap = std::map<std::string, std::string>;
KeyValueMap read_key_value(std::istream& in);
KeyValueMap read_key_value_file(const std::string& path);

double kv_get_double(const KeyValueMap& kv, const std::string& key);
double kv_get_double(const KeyValueMap& kv, const std::string& key,
                     double fallback);
std::string kv_get_string(const KeyValueMap& kv, const std::string& key,
                          const std::string& fallback = "");

// FNV-1a over the resolved configuration text; recorded in output headers
// so identical runs are recognizable byte-for-byte.
std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace adcir
