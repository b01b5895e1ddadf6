#pragma once

#include "raas/randomizer.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>

namespace raas {

/// Service configuration, read from a JSON file:
///
///   {
///     "weights": {"cbf": 0.9, "stereotype": 0.049, "most_popular": 0.049, "random": 0.002},
///     "rerank_probability": 0.5,
///     "stereotype_list": "stereotypes.txt",
///     "readership_stub": "readership.jsonl",
///     "cache_ttl_hours": 720,
///     "seed": 42,
///     "threads": 32,
///     "provider_in_flight": 8
///   }
///
/// Every key is optional. Relative paths resolve against the config file's directory.
struct ServiceConfig {
    RandomizerConfig randomizer;
    std::optional<std::filesystem::path> stereotype_list;
    std::optional<std::filesystem::path> readership_stub;
    std::chrono::milliseconds cache_ttl = std::chrono::hours(24 * 30);
    std::optional<std::uint64_t> seed;
    int threads = 0;  // 0: derived from the hardware
    int provider_in_flight = 8;

    /// Throws ValidationError for bad weights or bounds.
    void validate() const;

    static ServiceConfig load(const std::filesystem::path& path);
    static ServiceConfig from_json_text(const std::string& text, const std::filesystem::path& base_dir = {});
};

}  // namespace raas
