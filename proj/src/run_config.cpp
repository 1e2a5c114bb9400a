#include "semkg/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "semkg/error.hpp"

namespace semkg {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t to_size(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

double to_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(std::string(value), &used);
    if (used == value.size()) return out;
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(value) + "'");
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(value) + "'");
}

bool is_path_key(std::string_view key) {
  static constexpr std::string_view kPathKeys[] = {
      "ontology", "frames", "frames-dir", "annotations", "dot", "events", "snapshots",
      "attention-dir"};
  return std::find(std::begin(kPathKeys), std::end(kPathKeys), key) != std::end(kPathKeys);
}

}  // namespace

const std::vector<std::string_view>& RunConfig::keys() {
  static const std::vector<std::string_view> k = {
      "window", "hop",    "fps", "ontology", "frames", "frames-dir", "annotations", "captioner",
      "timeout", "depth", "policy", "dot", "events", "snapshots", "attention-dir", "concurrent"};
  return k;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "window") {
    window = to_size(key, value);
  } else if (key == "hop") {
    hop = to_size(key, value);
  } else if (key == "fps") {
    fps = to_double(key, value);
  } else if (key == "ontology") {
    ontology = value;
  } else if (key == "frames") {
    frames = value;
  } else if (key == "frames-dir") {
    frames_dir = value;
  } else if (key == "annotations") {
    annotations = value;
  } else if (key == "captioner") {
    captioner = value;
  } else if (key == "timeout") {
    timeout = to_double(key, value);
  } else if (key == "depth") {
    depth = to_size(key, value);
  } else if (key == "policy") {
    if (value == "skip") {
      policy = FailurePolicy::Skip;
    } else if (value == "halt") {
      policy = FailurePolicy::Halt;
    } else {
      throw ConfigError("policy: expected skip or halt, got '" + std::string(value) + "'");
    }
  } else if (key == "dot") {
    dot = value;
  } else if (key == "events") {
    events = value;
  } else if (key == "snapshots") {
    snapshots = value;
  } else if (key == "attention-dir") {
    attention_dir = value;
  } else if (key == "concurrent") {
    concurrent = to_bool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  if (window < 2) throw ConfigError("window must be at least 2");
  if (hop && (*hop < 1 || *hop > window)) throw ConfigError("hop must lie in [1, window]");
  if (!(fps > 0.0)) throw ConfigError("fps must be positive");
  if (ontology.empty()) throw ConfigError("no ontology given");
  if (frames.empty() == frames_dir.empty()) {
    throw ConfigError("give exactly one of frames (manifest) or frames-dir");
  }
  if (annotations.empty() == captioner.empty()) {
    throw ConfigError("give exactly one of annotations (replay) or captioner (external)");
  }
  if (!(timeout > 0.0)) throw ConfigError("timeout must be positive");
  if (depth < 1) throw ConfigError("depth must be at least 1");
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  RunConfig config;
  const auto base = path.parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (is_path_key(key) && !value.empty() && std::filesystem::path(value).is_relative()) {
      value = (base / value).lexically_normal().string();
    }
    try {
      config.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

CaptionerBinding RunConfig::binding() const {
  if (!captioner.empty()) return {CaptionerBinding::Variant::External, captioner, timeout};
  return {CaptionerBinding::Variant::Replay, annotations, timeout};
}

std::vector<Frame> RunConfig::read_frames() const {
  return frames.empty() ? read_frame_directory(frames_dir, fps) : read_frame_manifest(frames, fps);
}

}  // namespace semkg
