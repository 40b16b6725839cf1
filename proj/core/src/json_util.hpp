#pragma once

// Internal helpers shared by the JSON-lines readers.

#include <optional>
#include <string>

#include "fallacy/error.hpp"
#include "json.hpp"

namespace fallacy::detail {

inline std::optional<std::string> optional_string(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(std::string("field \"") + key + "\" must be a string");
    return it->get<std::string>();
}

inline std::string required_string(const nlohmann::json& obj, const char* key) {
    auto value = optional_string(obj, key);
    if (!value) throw ParseError(std::string("missing required field \"") + key + "\"");
    return *value;
}

inline std::optional<std::size_t> optional_index(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
        throw ParseError(std::string("field \"") + key + "\" must be a non-negative integer");
    }
    return it->get<std::size_t>();
}

}  // namespace fallacy::detail
