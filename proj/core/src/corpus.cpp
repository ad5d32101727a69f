#include "kripkesec/corpus.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kripkesec/errors.hpp"

namespace kripkesec {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ManifestEntry> parse_manifest(std::string_view json_text, const std::filesystem::path& base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
  if (!j.is_array()) throw Error("manifest: expected a JSON array");
  std::vector<ManifestEntry> out;
  for (const auto& item : j) {
    if (!item.is_object()) throw Error("manifest: entries must be objects");
    ManifestEntry e;
    if (item.contains("seed")) {
      e.seed = item["seed"].get<std::uint64_t>();
      e.name = "seed " + std::to_string(*e.seed);
      out.push_back(std::move(e));
      continue;
    }
    if (!item.contains("name")) throw Error("manifest: entry without name or seed");
    e.name = item["name"].get<std::string>();
    if (item.contains("source")) {
      e.source = item["source"].get<std::string>();
    } else if (item.contains("program")) {
      e.source = read_file(base / item["program"].get<std::string>());
    } else {
      throw Error("manifest: '" + e.name + "' has no program");
    }
    if (!item.contains("policy")) throw Error("manifest: '" + e.name + "' has no policy");
    const auto& pol = item["policy"];
    e.policy = parse_policy(pol.is_string() ? read_file(base / pol.get<std::string>()) : pol.dump());
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& file) {
  return parse_manifest(read_file(file), file.parent_path());
}

CorpusMember realize(const ManifestEntry& e, const GenBounds& bounds) {
  if (e.seed) {
    Generated g = gen_program(*e.seed, bounds);
    return {e.name, g.source, std::move(g.program), std::move(g.ctx)};
  }
  Program p = parse_program(e.source);
  SecurityContext ctx = bind_policy(e.policy, p);
  return {e.name, e.source, std::move(p), std::move(ctx)};
}

}  // namespace kripkesec
