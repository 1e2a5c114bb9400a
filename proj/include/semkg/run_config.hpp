#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semkg/pipeline.hpp"
#include "semkg/stream_sampler.hpp"

namespace semkg {

/// Settings for `run`/`export`, read from a flat `key = value` file and
/// overridden by command-line flags of the same name.
struct RunConfig {
  std::size_t window = 30;
  std::optional<std::size_t> hop;
  double fps = kDefaultFps;
  std::string ontology;
  std::string frames;
  std::string frames_dir;
  std::string annotations;
  std::string captioner;
  double timeout = 10.0;
  std::size_t depth = kDefaultQueryDepth;
  FailurePolicy policy = FailurePolicy::Skip;
  std::string dot;
  std::string events;
  std::string snapshots;
  std::string attention_dir;
  bool concurrent = false;

  /// Every accepted key, in the spelling used by files and flags.
  static const std::vector<std::string_view>& keys();

  /// Throws ConfigError for an unknown key or an unparsable value.
  void set(std::string_view key, std::string_view value);

  /// Throws ConfigError when required settings are missing or conflict.
  void validate() const;

  /// `key = value` lines, `#` comments. Throws ConfigError naming the line.
  /// Relative paths inside the file are resolved against its directory.
  static RunConfig load(const std::filesystem::path& path);

  CaptionerBinding binding() const;
  std::vector<Frame> read_frames() const;
};

}  // namespace semkg
