#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nfold/instance.hpp"

namespace nfold {

// Instance JSON: integer fields "r","s","t","N"; "E1" (r rows of t ints),
// "E2" (s rows of t ints); flat "b","l","u","w"; optional "x0", "id",
// "meta". Any other key is a FormatError.
nlohmann::json instance_to_json(const NFoldInstance& inst);
NFoldInstance instance_from_json(const nlohmann::json& j);

std::string dump_instance(const NFoldInstance& inst);
NFoldInstance parse_instance(const std::string& text);

void write_instance(const NFoldInstance& inst,
                    const std::filesystem::path& path);
NFoldInstance read_instance(const std::filesystem::path& path);

}  // namespace nfold
