#include "iqrip/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "iqrip/common.hpp"

namespace iqrip {

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        hash ^= static_cast<std::uint64_t>(bytes[i]);
        hash *= 1099511628211ull;
    }
    return hash;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for hashing: " + path);
    std::uint64_t hash = 14695981039346656037ull;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]));
            hash *= 1099511628211ull;
        }
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char out[19];
    std::snprintf(out, sizeof(out), "0x%016llx",
                  static_cast<unsigned long long>(value));
    return std::string(out);
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    nlohmann::ordered_json jin = nlohmann::ordered_json::array();
    for (const auto& [path, hash] : inputs) {
        nlohmann::ordered_json entry;
        entry["path"] = path;
        entry["fnv1a64"] = hash;
        jin.push_back(std::move(entry));
    }
    j["inputs"] = std::move(jin);
    j["outputs"] = outputs;
    j["wall_clock_seconds"] = wall_clock_seconds;
    return j.dump(2);
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open manifest for writing: " + path);
    out << to_json() << '\n';
    if (!out) throw DataError("failed writing manifest: " + path);
}

}  // namespace iqrip
