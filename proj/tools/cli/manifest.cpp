#include "manifest.hpp"

#include <chrono>
#include <fstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

namespace priorplug::cli {

std::string canonical_dump(const nlohmann::json& j) {
  // nlohmann::json stores objects in std::map, so dump() is already key-sorted.
  return j.dump();
}

std::string config_hash(const nlohmann::json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_dump(j)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now);
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"tool_version", m.tool_version}, {"subcommand", m.subcommand},
          {"config_hash", m.config_hash},   {"master_seed", m.master_seed},
          {"started", m.started},           {"finished", m.finished},
          {"outputs", m.outputs}};
}

OutputDir::OutputDir(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
  if (!dir_) return;
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  if (ec) throw WriteError(fmt::format("cannot create output directory {}: {}", dir_->string(), ec.message()));
}

void OutputDir::write(const std::string& name, const std::string& content) {
  if (!dir_) return;
  const auto path = *dir_ / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  f.close();
  if (!f) throw WriteError(fmt::format("cannot write {}", path.string()));
  written_.push_back(name);
}

void OutputDir::write_manifest(RunManifest manifest) {
  if (!dir_) return;
  manifest.outputs = written_;
  manifest.outputs.push_back("manifest.json");
  const auto path = *dir_ / "manifest.json";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << to_json(manifest).dump(2) << '\n';
  f.close();
  if (!f) throw WriteError(fmt::format("cannot write {}", path.string()));
}

}  // namespace priorplug::cli
