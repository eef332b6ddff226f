#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace iqrip {

inline constexpr const char* kToolName = "iqrip";
inline constexpr const char* kToolVersion = "1.0.0";

/// FNV-1a 64-bit hashes, used to fingerprint input files in run manifests.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t value);

/// Reproducibility record written next to every command's output. Two runs
/// whose manifests match except for wall_clock_seconds produce byte-identical
/// output files.
struct RunManifest {
    std::vector<std::string> command;  ///< argv as invoked
    nlohmann::ordered_json config;     ///< fully resolved parameter values
    std::vector<std::pair<std::string, std::string>> inputs;  ///< path, fnv1a64 hex
    std::vector<std::string> outputs;  ///< files written by the run
    double wall_clock_seconds = 0.0;

    std::string to_json() const;
    /// Writes to_json() to `path`.
    void write(const std::string& path) const;
};

}  // namespace iqrip
