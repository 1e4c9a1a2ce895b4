#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nfold/instance.hpp"

namespace nfold {

/// Blank output symbol: distance 0 to every input symbol.
inline constexpr char kBlank = '_';

struct ClosestStringParams {
  std::size_t k = 3;              // number of strings
  std::size_t length = 500;       // L
  std::size_t alphabet_size = 4;  // |Sigma|, symbols 'a', 'b', ...
  Int ratio = 4;                  // r, alpha = floor(L / r)
  double distance_factor = 0.3;   // delta, d = floor(delta * L / r)
  std::uint64_t seed = 0;

  void validate() const;
  std::string alphabet() const;
  Int alpha() const;
  Int distance() const;
};

/// Configurations occurring in the input (k-tuples of symbol indices), in
/// lexicographic order, with their counts and input positions. Symbol index
/// |Sigma| is the blank.
struct ConfigurationTable {
  std::size_t k = 0;
  std::string alphabet;
  std::vector<std::vector<int>> configs;
  std::vector<Int> counts;
  std::vector<std::vector<std::size_t>> positions;

  std::size_t symbols_with_blank() const { return alphabet.size() + 1; }
  // D_C(i, sigma) = [C[i] != sigma], zero in the blank column.
  IntMatrix distance_matrix(std::size_t c) const;
};

ConfigurationTable build_configurations(const std::vector<std::string>& strings,
                                        const std::string& alphabet);

struct CsModel {
  NFoldInstance inst;
  IntVector start;
  ConfigurationTable table;
};

/// One brick per occurring configuration. Per brick the columns are the
/// concatenated D blocks (one column per configuration and symbol) followed
/// by k distance slacks that may be nonzero in brick 0 only. The start is
/// the all-blank string.
CsModel build_cs_model(const std::vector<std::string>& strings,
                       const std::string& alphabet, Int d);

struct CsInstance {
  CsModel model;
  std::vector<std::string> strings;
  std::string target;  // the hidden witness y
};

/// Random target y, k copies, then alpha changes per string at distinct
/// positions, each to a symbol different from the current one.
CsInstance gen_cs_instance(const ClosestStringParams& params);

/// Rebuilds the output string (blanks as kBlank) from per-configuration
/// symbol counts, filling each configuration's positions in input order, and
/// checks the Hamming distance bound against every input string.
std::string decode_cs(const ConfigurationTable& table,
                      const std::vector<std::string>& strings, Int d,
                      std::span<const Int> x);

/// Same, reading the strings and d from the instance metadata.
std::string decode_cs(const NFoldInstance& inst, std::span<const Int> x);

/// Hamming distance where the blank matches everything.
Int blank_distance(const std::string& a, const std::string& y);

}  // namespace nfold
