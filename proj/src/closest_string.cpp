#include "nfold/closest_string.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nfold/rng.hpp"

namespace nfold {

void ClosestStringParams::validate() const {
  if (k < 2) throw FormatError("closest string needs at least two strings");
  if (alphabet_size < 2 || alphabet_size > 26) {
    throw FormatError("alphabet size must lie in [2, 26]");
  }
  if (length == 0) throw FormatError("string length must be positive");
  if (ratio < 1) throw FormatError("distance ratio must be at least 1");
  if (!(distance_factor >= 0.0 && distance_factor <= 1.0)) {
    throw FormatError("distance factor must lie in [0, 1]");
  }
}

std::string ClosestStringParams::alphabet() const {
  std::string a;
  for (std::size_t i = 0; i < alphabet_size; ++i) {
    a.push_back(static_cast<char>('a' + i));
  }
  return a;
}

Int ClosestStringParams::alpha() const {
  return static_cast<Int>(length) / ratio;
}

Int ClosestStringParams::distance() const {
  // the epsilon keeps products like 0.3 * 10 from rounding down to 2
  return static_cast<Int>(std::floor(
      distance_factor * static_cast<double>(length) / static_cast<double>(ratio) +
      1e-9));
}

IntMatrix ConfigurationTable::distance_matrix(std::size_t c) const {
  IntMatrix d(k, symbols_with_blank());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t sym = 0; sym < alphabet.size(); ++sym) {
      d(i, sym) = configs[c][i] == static_cast<int>(sym) ? 0 : 1;
    }
  }
  return d;
}

ConfigurationTable build_configurations(const std::vector<std::string>& strings,
                                        const std::string& alphabet) {
  if (strings.size() < 2) throw FormatError("need at least two strings");
  if (alphabet.empty()) throw FormatError("empty alphabet");
  for (char ch : alphabet) {
    if (ch == kBlank) throw FormatError("alphabet must not contain the blank");
    if (std::count(alphabet.begin(), alphabet.end(), ch) != 1) {
      throw FormatError("alphabet has repeated symbols");
    }
  }
  const std::size_t len = strings[0].size();
  for (const std::string& s : strings) {
    if (s.size() != len) throw DimensionError("strings differ in length");
  }
  ConfigurationTable table;
  table.k = strings.size();
  table.alphabet = alphabet;
  std::map<std::vector<int>, std::vector<std::size_t>> classes;
  for (std::size_t pos = 0; pos < len; ++pos) {
    std::vector<int> cfg(table.k);
    for (std::size_t i = 0; i < table.k; ++i) {
      const auto at = alphabet.find(strings[i][pos]);
      if (at == std::string::npos) {
        throw FormatError(std::string("symbol '") + strings[i][pos] +
                          "' is not in the alphabet");
      }
      cfg[i] = static_cast<int>(at);
    }
    classes[cfg].push_back(pos);
  }
  for (auto& [cfg, positions] : classes) {
    table.configs.push_back(cfg);
    table.counts.push_back(static_cast<Int>(positions.size()));
    table.positions.push_back(std::move(positions));
  }
  return table;
}

CsModel build_cs_model(const std::vector<std::string>& strings,
                       const std::string& alphabet, Int d) {
  if (d < 0) throw FormatError("distance bound must be nonnegative");
  CsModel out;
  out.table = build_configurations(strings, alphabet);
  const ConfigurationTable& table = out.table;
  const std::size_t k = table.k;
  const std::size_t n = table.configs.size();
  const std::size_t q = table.symbols_with_blank();
  const std::size_t blank = alphabet.size();
  const std::size_t t = n * q + k;

  NFoldInstance inst;
  inst.e1 = IntMatrix(k, t);
  inst.e2 = IntMatrix(1, t);
  for (std::size_t c = 0; c < n; ++c) {
    const IntMatrix dc = table.distance_matrix(c);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t sym = 0; sym < q; ++sym) {
        inst.e1(i, c * q + sym) = dc(i, sym);
      }
    }
    for (std::size_t sym = 0; sym < q; ++sym) inst.e2(0, c * q + sym) = 1;
  }
  for (std::size_t i = 0; i < k; ++i) inst.e1(i, n * q + i) = 1;

  inst.bricks = n;
  inst.b.assign(k, d);
  inst.b.insert(inst.b.end(), table.counts.begin(), table.counts.end());
  inst.lower.assign(n * t, 0);
  inst.upper.assign(n * t, 0);
  inst.weights.assign(n * t, 0);
  out.start.assign(n * t, 0);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t sym = 0; sym < q; ++sym) {
      inst.upper[c * t + c * q + sym] = table.counts[c];
    }
    for (std::size_t cc = 0; cc < n; ++cc) inst.weights[c * t + cc * q + blank] = 1;
    out.start[c * t + c * q + blank] = table.counts[c];
  }
  for (std::size_t i = 0; i < k; ++i) {
    inst.upper[n * q + i] = d;
    out.start[n * q + i] = d;
  }

  inst.id = "cs_k" + std::to_string(k) + "_L" + std::to_string(strings[0].size()) +
            "_a" + std::to_string(alphabet.size()) + "_d" + std::to_string(d);
  inst.meta = {{"generator", "cs"},
               {"strings", strings},
               {"alphabet", alphabet},
               {"d", d},
               {"configurations", table.configs},
               {"counts", table.counts}};
  inst.start = out.start;
  inst.validate();
  if (!is_feasible(inst, out.start)) {
    throw NFoldError("closest string start point is infeasible");
  }
  out.inst = std::move(inst);
  return out;
}

CsInstance gen_cs_instance(const ClosestStringParams& params) {
  params.validate();
  Rng rng(params.seed);
  const std::string alphabet = params.alphabet();
  const auto sigma = static_cast<Int>(alphabet.size());
  CsInstance out;
  out.target.resize(params.length);
  for (char& ch : out.target) {
    ch = alphabet[static_cast<std::size_t>(rng.uniform_int(0, sigma - 1))];
  }
  const auto alpha = static_cast<std::size_t>(params.alpha());
  std::vector<std::size_t> pos(params.length);
  for (std::size_t i = 0; i < params.k; ++i) {
    std::string s = out.target;
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    for (std::size_t a = 0; a < alpha; ++a) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(
          static_cast<Int>(a), static_cast<Int>(params.length - 1)));
      std::swap(pos[a], pos[j]);
      const std::size_t p = pos[a];
      const auto cur = static_cast<Int>(alphabet.find(s[p]));
      Int repl = rng.uniform_int(0, sigma - 2);
      if (repl >= cur) ++repl;
      s[p] = alphabet[static_cast<std::size_t>(repl)];
    }
    out.strings.push_back(std::move(s));
  }
  const Int d = params.distance();
  out.model = build_cs_model(out.strings, alphabet, d);
  NFoldInstance& inst = out.model.inst;
  inst.id = "cs_k" + std::to_string(params.k) + "_L" +
            std::to_string(params.length) + "_a" +
            std::to_string(params.alphabet_size) + "_r" +
            std::to_string(params.ratio) + "_seed" + std::to_string(params.seed);
  inst.meta["k"] = params.k;
  inst.meta["L"] = params.length;
  inst.meta["ratio"] = params.ratio;
  inst.meta["distance_factor"] = params.distance_factor;
  inst.meta["alpha"] = params.alpha();
  inst.meta["seed"] = params.seed;
  inst.meta["target"] = out.target;
  return out;
}

Int blank_distance(const std::string& a, const std::string& y) {
  if (a.size() != y.size()) throw DimensionError("strings differ in length");
  Int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (y[i] != kBlank && y[i] != a[i]) ++d;
  }
  return d;
}

std::string decode_cs(const ConfigurationTable& table,
                      const std::vector<std::string>& strings, Int d,
                      std::span<const Int> x) {
  const std::size_t n = table.configs.size();
  const std::size_t q = table.symbols_with_blank();
  const std::size_t t = n * q + table.k;
  if (x.size() != n * t) throw DimensionError("solution has wrong length");
  std::string y(strings.at(0).size(), kBlank);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t next = 0;
    for (std::size_t sym = 0; sym < q; ++sym) {
      const Int cnt = x[c * t + c * q + sym];
      if (cnt < 0) throw NFoldError("negative symbol count");
      for (Int u = 0; u < cnt; ++u) {
        if (next >= table.positions[c].size()) {
          throw NFoldError("symbol counts exceed the configuration size");
        }
        y[table.positions[c][next++]] =
            sym < table.alphabet.size() ? table.alphabet[sym] : kBlank;
      }
    }
    if (next != table.positions[c].size()) {
      throw NFoldError("symbol counts do not cover the configuration");
    }
  }
  for (std::size_t i = 0; i < strings.size(); ++i) {
    const Int dist = blank_distance(strings[i], y);
    if (dist > d) {
      throw NFoldError("decoded string is at distance " + std::to_string(dist) +
                       " > " + std::to_string(d) + " from string " +
                       std::to_string(i));
    }
  }
  return y;
}

std::string decode_cs(const NFoldInstance& inst, std::span<const Int> x) {
  const auto& meta = inst.meta;
  if (!meta.contains("strings") || !meta.contains("alphabet") ||
      !meta.contains("d")) {
    throw FormatError("instance metadata lacks the closest string input");
  }
  const auto strings = meta.at("strings").get<std::vector<std::string>>();
  const auto alphabet = meta.at("alphabet").get<std::string>();
  const ConfigurationTable table = build_configurations(strings, alphabet);
  return decode_cs(table, strings, meta.at("d").get<Int>(), x);
}

}  // namespace nfold
