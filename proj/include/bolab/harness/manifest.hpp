#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bolab {

inline constexpr const char* bolab_version = "0.1.0";

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string utc_stamp(std::time_t t) {
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof buf, "%04d%02d%02dT%02d%02d%02dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

} // namespace detail

// Identity card of one CLI run. The id couples the wall-clock start with a
// hash of the resolved configuration, so distinct runs never collide and
// identical configs are recognizable at a glance. Everything else a run
// writes is byte-deterministic for a fixed config and seed; the manifest
// itself carries the timing and is the one intentionally varying artifact.
struct RunManifest {
    std::string id;
    std::string subcommand;
    nlohmann::ordered_json config;
    std::vector<std::string> artifacts;
    std::string version = bolab_version;
    double duration_seconds = 0.0;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["id"] = id;
        j["subcommand"] = subcommand;
        j["config"] = config;
        j["artifacts"] = artifacts;
        j["version"] = version;
        j["duration_seconds"] = duration_seconds;
        return j;
    }
};

inline std::string config_hash_hex(const nlohmann::ordered_json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(config.dump())));
    return buf;
}

inline std::string make_run_id(const nlohmann::ordered_json& config,
                               std::time_t now = std::time(nullptr)) {
    return detail::utc_stamp(now) + "-" + config_hash_hex(config).substr(0, 8);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write on " + path);
}

} // namespace bolab
