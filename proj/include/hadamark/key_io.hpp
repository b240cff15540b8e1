#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hadamark/codec.hpp"

namespace hadamark {

/// Serializes a key as a single-line UTF-8 JSON object with a fixed field
/// order, so identical keys produce byte-identical files. The permutation is
/// stored 1-based; null means identity.
inline void save_key(const WatermarkKey& key, const std::string& path) {
  key.validate();
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["m"] = key.m;
  j["n"] = key.n;
  j["order"] = key.order;
  j["block_side"] = key.block_side;
  j["b"] = key.params.b;
  j["coeff_a"] = {key.params.coeff_a.first, key.params.coeff_a.second};
  j["coeff_b"] = {key.params.coeff_b.first, key.params.coeff_b.second};
  if (key.perm.empty()) {
    j["perm"] = nullptr;
  } else {
    std::vector<std::int64_t> one_based(key.perm.size());
    for (std::size_t i = 0; i < key.perm.size(); ++i) one_based[i] = key.perm[i] + 1;
    j["perm"] = one_based;
  }
  if (key.rng_seed)
    j["rng_seed"] = *key.rng_seed;
  else
    j["rng_seed"] = nullptr;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << "\n";
  if (!out) throw std::runtime_error("I/O failure writing " + path);
}

inline WatermarkKey load_key(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": malformed key file: " + e.what());
  }
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"] != 1)
    throw std::runtime_error(path + ": unsupported key version");
  WatermarkKey key;
  try {
    key.m = j.at("m").get<int>();
    key.n = j.at("n").get<int>();
    key.order = j.at("order").get<int>();
    key.block_side = j.at("block_side").get<int>();
    key.params.b = j.at("b").get<double>();
    key.params.coeff_a = {j.at("coeff_a").at(0).get<int>(), j.at("coeff_a").at(1).get<int>()};
    key.params.coeff_b = {j.at("coeff_b").at(0).get<int>(), j.at("coeff_b").at(1).get<int>()};
    if (j.contains("perm") && !j["perm"].is_null()) {
      const auto& arr = j["perm"];
      key.perm.reserve(arr.size());
      for (const auto& v : arr) key.perm.push_back(v.get<std::int32_t>() - 1);
    }
    if (j.contains("rng_seed") && !j["rng_seed"].is_null())
      key.rng_seed = j["rng_seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": malformed key file: " + e.what());
  }
  key.validate();
  return key;
}

}  // namespace hadamark
