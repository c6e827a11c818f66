#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hamflow {

/// Shortest-faithful decimal form used by every CSV writer (17 significant
/// digits survive a round-trip).
std::string format_g17(double v);

void ensure_dir(const std::filesystem::path& dir);

/// Writes a CSV with one header line; every cell already formatted.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

/// FNV-1a 64-bit, used for config fingerprints in run manifests.
std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

}  // namespace hamflow
