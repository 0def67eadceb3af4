#include "adcir/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace adcir {

namespace {

void write_comments(std::ostream& out,
                    const std::vector<std::string>& comment_lines) {
  for (const std::string& c : comment_lines) out << "# " << c << "\n";
}

}  // namespace

void write_path_batch_csv(const PathBatch& batch, std::ostream& out,
                          const std::vector<std::string>& comment_lines) {
  write_comments(out, comment_lines);
  out << "path,step,t,r,s\n";
  out.precision(17);
  for (std::int64_t p = 0; p < batch.n_paths; ++p) {
    for (std::int64_t k = 0; k < batch.n_instants; ++k) {
      const StateVector x = batch.at(p, k);
      out << p << "," << k << "," << batch.times[static_cast<std::size_t>(k)]
          << "," << x.r << "," << x.s << "\n";
    }
  }
}

void write_histogram_csv(const Histogram1D& h, std::ostream& out,
                         const std::vector<std::string>& comment_lines) {
  write_comments(out, comment_lines);
  out << "bin_lo,bin_hi,mass\n";
  out.precision(17);
  for (std::size_t i = 0; i < h.mass.size(); ++i) {
    out << h.edges[i] << "," << h.edges[i + 1] << "," << h.mass[i] << "\n";
  }
}

void write_histogram_csv(const Histogram2D& h, std::ostream& out,
                         const std::vector<std::string>& comment_lines) {
  write_comments(out, comment_lines);
  out << "r_lo,r_hi,s_lo,s_hi,mass\n";
  out.precision(17);
  const std::size_t ns = h.s_edges.size() - 1;
  for (std::size_t i = 0; i + 1 < h.r_edges.size(); ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      out << h.r_edges[i] << "," << h.r_edges[i + 1] << "," << h.s_edges[j]
          << "," << h.s_edges[j + 1] << "," << h.mass[i * ns + j] << "\n";
    }
  }
}

KeyValueMap read_key_value(std::istream& in) {
  KeyValueMap kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    kv[key] = value;
  }
  return kv;
}

KeyValueMap read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return read_key_value(in);
}

double kv_get_double(const KeyValueMap& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("missing config key: " + key);
  return std::stod(it->second);
}

double kv_get_double(const KeyValueMap& kv, const std::string& key,
                     double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : std::stod(it->second);
}

std::string kv_get_string(const KeyValueMap& kv, const std::string& key,
                          const std::string& fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace adcir
