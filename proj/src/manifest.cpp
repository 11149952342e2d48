#include "gdnn/manifest.hpp"

#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <fstream>

#include "gdnn/errors.hpp"
#include "gdnn/version.hpp"

namespace gd {

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_buf{};
    gmtime_r(&now, &tm_buf);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_buf);
    return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["library_version"] = kVersion;
    j["command"] = m.command;
    j["seed"] = m.seed;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : m.config) cfg[k] = v;
    j["config"] = cfg;
    j["artifacts"] = m.artifacts;
    j["start_time"] = m.start_time;
    j["end_time"] = m.end_time;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp + " for writing");
        out << j.dump(2) << "\n";
        if (!out) throw DataError("write failed on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw DataError("cannot move " + tmp + " to " + path);
    }
}

}  // namespace gd
