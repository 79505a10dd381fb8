#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "lfholo/error.hpp"

namespace lfholo::detail {

using nlohmann::json;

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

inline double number(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(where + "." + key + ": expected a number");
    }
    return j.at(key).get<double>();
}

inline int integer(const json& j, const char* key, int fallback, const std::string& where) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_number_integer()) {
        throw ConfigError(where + "." + key + ": expected an integer");
    }
    return j.at(key).get<int>();
}

inline std::uint64_t unsigned_integer(const json& j, const char* key, std::uint64_t fallback, const std::string& where) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_number_unsigned()) {
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    }
    return j.at(key).get<std::uint64_t>();
}

inline bool boolean(const json& j, const char* key, bool fallback, const std::string& where) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_boolean()) {
        throw ConfigError(where + "." + key + ": expected a boolean");
    }
    return j.at(key).get<bool>();
}

inline std::string text(const json& j, const char* key, const std::string& fallback, const std::string& where) {
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_string()) {
        throw ConfigError(where + "." + key + ": expected a string");
    }
    return j.at(key).get<std::string>();
}

} // namespace lfholo::detail
