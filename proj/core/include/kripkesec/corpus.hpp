#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/oracle.hpp"

namespace kripkesec {

// One manifest entry: a named program with its policy, or a generator seed.
struct ManifestEntry {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::string source;
  Policy policy;
};

// Manifest format: a JSON array of objects with either "seed" or "name",
// "program" (path relative to the manifest, or "inline" source text under
// "source") and "policy" (path, or an inline policy object).
std::vector<ManifestEntry> parse_manifest(std::string_view json_text, const std::filesystem::path& base);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& file);

// Parses, binds, or generates. Throws on bad input.
CorpusMember realize(const ManifestEntry& e, const GenBounds& bounds = {});

std::string read_file(const std::filesystem::path& file);  // throws Error

}  // namespace kripkesec
