#include "nfold/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nfold {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {"r", "s", "t",  "N",  "E1", "E2",
                                          "b", "l", "u",  "w",  "x0", "id",
                                          "meta"};

std::size_t read_size(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field ") + key);
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FormatError(std::string("field ") + key +
                      " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

IntVector read_vector(const json& j, const char* key, std::size_t len) {
  if (!j.contains(key)) throw FormatError(std::string("missing field ") + key);
  const json& v = j.at(key);
  if (!v.is_array()) throw FormatError(std::string(key) + " must be an array");
  IntVector out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number_integer()) {
      throw FormatError(std::string(key) + " must contain integers only");
    }
    out.push_back(e.get<Int>());
  }
  if (out.size() != len) {
    throw FormatError(std::string(key) + " has length " +
                      std::to_string(out.size()) + ", expected " +
                      std::to_string(len));
  }
  return out;
}

IntMatrix read_matrix(const json& j, const char* key, std::size_t rows,
                      std::size_t cols) {
  if (!j.contains(key)) throw FormatError(std::string("missing field ") + key);
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != rows) {
    throw FormatError(std::string(key) + " must be an array of " +
                      std::to_string(rows) + " rows");
  }
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || row.size() != cols) {
      throw FormatError(std::string(key) + " row " + std::to_string(i) +
                        " must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number_integer()) {
        throw FormatError(std::string(key) + " must contain integers only");
      }
      m(i, c) = row[c].get<Int>();
    }
  }
  return m;
}

}  // namespace

json instance_to_json(const NFoldInstance& inst) {
  json j;
  j["r"] = inst.r();
  j["s"] = inst.s();
  j["t"] = inst.t();
  j["N"] = inst.bricks;
  j["E1"] = inst.e1.to_rows();
  j["E2"] = inst.e2.to_rows();
  j["b"] = inst.b;
  j["l"] = inst.lower;
  j["u"] = inst.upper;
  j["w"] = inst.weights;
  if (inst.start) j["x0"] = *inst.start;
  if (!inst.id.empty()) j["id"] = inst.id;
  if (!inst.meta.empty()) j["meta"] = inst.meta;
  return j;
}

NFoldInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("instance must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKnownKeys.contains(key)) {
      throw FormatError("unknown field \"" + key + "\"");
    }
  }
  NFoldInstance inst;
  const std::size_t r = read_size(j, "r");
  const std::size_t s = read_size(j, "s");
  const std::size_t t = read_size(j, "t");
  inst.bricks = read_size(j, "N");
  inst.e1 = read_matrix(j, "E1", r, t);
  inst.e2 = read_matrix(j, "E2", s, t);
  const std::size_t n = inst.bricks * t;
  inst.b = read_vector(j, "b", r + inst.bricks * s);
  inst.lower = read_vector(j, "l", n);
  inst.upper = read_vector(j, "u", n);
  inst.weights = read_vector(j, "w", n);
  if (j.contains("x0")) inst.start = read_vector(j, "x0", n);
  if (j.contains("id")) {
    if (!j.at("id").is_string()) throw FormatError("id must be a string");
    inst.id = j.at("id").get<std::string>();
  }
  if (j.contains("meta")) {
    if (!j.at("meta").is_object()) throw FormatError("meta must be an object");
    inst.meta = j.at("meta");
  }
  inst.validate();
  return inst;
}

std::string dump_instance(const NFoldInstance& inst) {
  return instance_to_json(inst).dump() + "\n";
}

NFoldInstance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

void write_instance(const NFoldInstance& inst,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NFoldError("cannot open " + path.string() + " for writing");
  out << dump_instance(inst);
  if (!out) throw NFoldError("failed writing " + path.string());
}

NFoldInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NFoldError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace nfold
