#include "aggnet/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "aggnet/errors.hpp"

namespace aggnet {

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open file for digest: " + path);
    uint64_t h = 1469598103934665603ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        std::streamsize got = in.gcount();
        for (std::streamsize k = 0; k < got; ++k) {
            h ^= uint64_t(uint8_t(buf[k]));
            h *= 1099511628211ULL;
        }
        if (!in)
            break;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["seed"] = seed;
    if (!config_json.empty()) {
        nlohmann::json cfg = nlohmann::json::parse(config_json, nullptr, false);
        doc["config"] = cfg.is_discarded() ? nlohmann::json(config_json) : cfg;
    }
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& p : outputs) {
        nlohmann::json o;
        o["path"] = p;
        std::ifstream probe(p, std::ios::binary | std::ios::ate);
        if (!probe)
            throw InputError("manifest: missing output file " + p);
        o["bytes"] = (long long)probe.tellg();
        o["fnv1a64"] = hex64(fnv1a64_file(p));
        outs.push_back(o);
    }
    doc["outputs"] = outs;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot open manifest file: " + path);
    out << doc.dump(2) << '\n';
    if (!out)
        throw InputError("manifest write failed");
}

} // namespace aggnet
