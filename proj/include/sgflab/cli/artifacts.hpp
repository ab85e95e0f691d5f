#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sgflab::cli {

/// A file produced by a study, held in memory until the run succeeds.
struct Artifact {
  std::string name;
  std::string content;
};

std::string sha256_hex(std::string_view data);

/// Writes each artifact through a temporary file and rename, then
/// manifest.json (`manifest` plus the artifact list with hashes). Returns the
/// manifest as written.
nlohmann::json write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts,
                               nlohmann::json manifest);

/// Recomputes the hashes listed in dir/manifest.json; returns the names that
/// do not match.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace sgflab::cli
