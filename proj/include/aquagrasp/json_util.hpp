#pragma once

#include <string>

#include <json.hpp>

#include "aquagrasp/errors.hpp"

namespace aqua {

using Json = nlohmann::json;

// Field accessors that name the offending key (and source file when known)
// instead of surfacing nlohmann's generic type errors.

inline const Json& require_key(const Json& j, const std::string& key, const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + ": expected an object while looking for key '" + key + "'");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(context + ": missing key '" + key + "'");
    return *it;
}

template <typename T>
T get_as(const Json& j, const std::string& key, const std::string& context) {
    const Json& v = require_key(j, key, context);
    try {
        return v.get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(context + ": key '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback, const std::string& context) {
    if (!j.is_object() || j.find(key) == j.end()) return fallback;
    return get_as<T>(j, key, context);
}

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace aqua
