#pragma once

#include <string>
#include <vector>

namespace climalens::report {

inline constexpr const char* kVersion = "climalens 0.1.0";

// Writes a JSON manifest with the software version, a UTC timestamp, the
// config hash, and the sha256 of every named input and output file. Runs
// on identical inputs differ only in the timestamp field.
void write_manifest(const std::string& path, const std::string& config_hash,
                    const std::vector<std::string>& input_files,
                    const std::vector<std::string>& output_files);

}  // namespace climalens::report
