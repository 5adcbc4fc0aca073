#pragma once

// Internal helpers shared by the harness translation units.

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "purifier/error.hpp"

namespace purifier::detail {

inline void write_json_file(const nlohmann::ordered_json& j,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw ConfigError("failed while writing '" + path.string() + "'");
    }
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() +
                          "' (run the producing command first?)");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("'" + path.string() +
                          "' is not valid JSON: " + e.what());
    }
}

}  // namespace purifier::detail
