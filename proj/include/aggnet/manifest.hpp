#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aggnet {

inline constexpr const char* kToolName = "aggnet";
inline constexpr const char* kToolVersion = "0.1.0";

uint64_t fnv1a64_file(const std::string& path);
std::string hex64(uint64_t v);

// Provenance sidecar: the exact command, the effective config, the seed, and
// a digest per output file. Re-running the recorded command with the float
// backend reproduces the outputs byte for byte.
struct RunManifest {
    std::vector<std::string> command;
    std::string config_json; // effective config, JSON text
    uint64_t seed = 0;
    std::vector<std::string> outputs;

    void write(const std::string& path) const;
};

} // namespace aggnet
