#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gd {

// Provenance record written next to every command's artifacts. Timestamps
// are the only fields that vary between identical runs.
struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config;  // resolved key-values
    std::vector<std::string> artifacts;                       // paths relative to out dir
    std::string start_time;  // ISO 8601 UTC
    std::string end_time;
};

std::string iso8601_utc_now();

// Serialized as versioned JSON; written to a temp file and renamed so a
// crash never leaves a half-written manifest.
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace gd
