#include "climalens/report.hpp"

#include <ctime>

#include <json.hpp>

#include "climalens/csvio.hpp"
#include "climalens/hashing.hpp"

namespace climalens::report {

namespace {

std::string utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json hash_map(const std::vector<std::string>& files) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& f : files) out[f] = sha256_file(f);
    return out;
}

}  // namespace

void write_manifest(const std::string& path, const std::string& config_hash,
                    const std::vector<std::string>& input_files,
                    const std::vector<std::string>& output_files) {
    nlohmann::json manifest = {{"version", kVersion},
                               {"timestamp", utc_now()},
                               {"config_hash", config_hash},
                               {"inputs", hash_map(input_files)},
                               {"outputs", hash_map(output_files)}};
    write_file(path, manifest.dump(2) + "\n");
}

}  // namespace climalens::report
