#ifndef HYPERALG_DATASET_HPP
#define HYPERALG_DATASET_HPP

#include <cctype>
#include <cstdint>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperalg/hypercube.hpp"
#include "hyperalg/rational.hpp"

// Cross-sectional binary-feature data: per-state counts D_i, total n, and the
// exact proportions N_i = D_i / n.

namespace hyperalg {

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Dataset {
 public:
  Dataset(int L, std::vector<std::uint64_t> counts) : L_(L), counts_(std::move(counts)) {
    check_dimension(L_);
    if (counts_.size() != (std::size_t{1} << L_))
      throw DatasetError("count vector must have 2^L entries");
    n_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    if (n_ == 0) throw DatasetError("dataset must contain at least one sample");
  }

  int dimension() const { return L_; }
  std::uint64_t total() const { return n_; }
  std::uint64_t count(NodeId i) const {
    check_node(i, L_);
    return counts_[i.bits];
  }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  /// N_i = D_i / n, exact; sums to 1.
  std::vector<Rational> proportions() const {
    std::vector<Rational> p(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      p[i] = Rational(static_cast<long>(counts_[i]), static_cast<long>(n_));
      p[i].canonicalize();
    }
    return p;
  }

  std::string digest() const {
    // FNV-1a over "L:counts"
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
      for (int k = 0; k < 8; ++k) {
        h ^= (v >> (8 * k)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    mix(static_cast<std::uint64_t>(L_));
    for (auto c : counts_) mix(c);
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
  }

 private:
  int L_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_;
};

/// One binary string per line; '#' starts a comment, blank lines ignored.
/// L is inferred from the first sample line.
inline Dataset load_samples(std::istream& in) {
  int L = 0;
  std::vector<std::uint64_t> counts;
  std::string line;
  std::size_t lineno = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
      ++start;
    line.erase(0, start);
    if (line.empty()) continue;
    if (L == 0) {
      L = static_cast<int>(line.size());
      if (L > kMaxDimension)
        throw DatasetError("line " + std::to_string(lineno) + ": string too long");
      counts.assign(std::size_t{1} << L, 0);
    }
    if (line.size() != static_cast<std::size_t>(L))
      throw DatasetError("line " + std::to_string(lineno) +
                         ": sample length differs from previous lines");
    NodeId n;
    try {
      n = parse_node(line);
    } catch (const std::invalid_argument&) {
      throw DatasetError("line " + std::to_string(lineno) +
                         ": samples must consist of '0'/'1' characters");
    }
    ++counts[n.bits];
    any = true;
  }
  if (!any) throw DatasetError("empty input: no sample lines found");
  return Dataset(L, std::move(counts));
}

inline Dataset load_samples(const std::vector<std::string>& lines) {
  std::ostringstream joined;
  for (const auto& l : lines) joined << l << '\n';
  std::istringstream in(joined.str());
  return load_samples(in);
}

/// Count-form input; unspecified states default to 0, duplicates rejected.
inline Dataset load_counts(const std::vector<std::pair<std::string, std::uint64_t>>& entries) {
  if (entries.empty()) throw DatasetError("no count entries given");
  int L = static_cast<int>(entries.front().first.size());
  check_dimension(L);
  std::vector<std::uint64_t> counts(std::size_t{1} << L, 0);
  std::vector<bool> seen(counts.size(), false);
  for (const auto& [state, c] : entries) {
    if (state.size() != static_cast<std::size_t>(L))
      throw DatasetError("state '" + state + "' has inconsistent length");
    NodeId n;
    try {
      n = parse_node(state);
    } catch (const std::invalid_argument&) {
      throw DatasetError("bad state string '" + state + "'");
    }
    if (seen[n.bits]) throw DatasetError("duplicate state '" + state + "'");
    seen[n.bits] = true;
    counts[n.bits] = c;
  }
  return Dataset(L, std::move(counts));
}

/// CSV with header `state,count`.
inline Dataset load_counts_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (lineno == 1 || (entries.empty() && line.find("state") != std::string::npos)) {
      if (line.find("state") != std::string::npos) continue;  // header
    }
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DatasetError("line " + std::to_string(lineno) + ": expected 'state,count'");
    std::string state = line.substr(0, comma);
    std::string rest = line.substr(comma + 1);
    auto strip = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    };
    strip(state);
    strip(rest);
    try {
      if (!rest.empty() && rest[0] == '-')
        throw DatasetError("line " + std::to_string(lineno) + ": negative count");
      std::size_t used = 0;
      std::uint64_t c = std::stoull(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(rest);
      entries.emplace_back(state, c);
    } catch (const DatasetError&) {
      throw;
    } catch (const std::exception&) {
      throw DatasetError("line " + std::to_string(lineno) + ": bad count '" + rest + "'");
    }
  }
  return load_counts(entries);
}

}  // namespace hyperalg

#endif  // HYPERALG_DATASET_HPP
