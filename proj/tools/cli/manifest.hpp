#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace priorplug::cli {

/// Keys sorted, no whitespace: equal configs hash equally whatever their key order.
std::string canonical_dump(const nlohmann::json& j);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

std::string utc_timestamp();

struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const RunManifest& m);

class WriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects the files of one run. Without a directory nothing is written.
class OutputDir {
 public:
  explicit OutputDir(std::optional<std::filesystem::path> dir);

  bool enabled() const noexcept { return dir_.has_value(); }
  void write(const std::string& name, const std::string& content);
  const std::vector<std::string>& written() const noexcept { return written_; }
  void write_manifest(RunManifest manifest);

 private:
  std::optional<std::filesystem::path> dir_;
  std::vector<std::string> written_;
};

}  // namespace priorplug::cli
