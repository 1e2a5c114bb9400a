#include "semkg/stream_sampler.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "semkg/error.hpp"

namespace semkg {

StreamSampler::StreamSampler(std::size_t window, std::optional<std::size_t> hop)
    : window_(window), hop_(hop.value_or(window / 2)) {
  if (window_ < 2) {
    throw ConfigError("window length must be at least 2, got " + std::to_string(window_));
  }
  if (hop_ < 1 || hop_ > window_) {
    throw ConfigError("hop must lie in [1, " + std::to_string(window_) + "], got " +
                      std::to_string(hop_));
  }
}

std::optional<Clip> StreamSampler::push(Frame frame) {
  if (last_index_ && frame.index != *last_index_ + 1) {
    const std::uint64_t expected = *last_index_ + 1;
    const std::uint64_t got = frame.index;
    reset();
    last_index_ = frame.index;
    queue_.push_back(std::move(frame));
    throw StreamGapError(expected, got);
  }
  last_index_ = frame.index;
  queue_.push_back(std::move(frame));
  if (queue_.size() > window_) queue_.pop_front();

  if (!filled_) {
    if (queue_.size() < window_) return std::nullopt;
    filled_ = true;
    since_emit_ = 0;
    ++emitted_;
    return make_clip();
  }
  if (++since_emit_ < hop_) return std::nullopt;
  since_emit_ = 0;
  ++emitted_;
  return make_clip();
}

std::vector<Frame> StreamSampler::pending_frames() const {
  const std::size_t n = filled_ ? since_emit_ : queue_.size();
  return {queue_.end() - static_cast<std::ptrdiff_t>(n), queue_.end()};
}

void StreamSampler::reset() {
  queue_.clear();
  since_emit_ = 0;
  filled_ = false;
  last_index_.reset();
}

Clip StreamSampler::make_clip() const {
  Clip clip;
  clip.frames.assign(queue_.begin(), queue_.end());
  clip.start_index = clip.frames.front().index;
  clip.end_index = clip.frames.back().index;
  return clip;
}

std::size_t clip_count(std::size_t frames, std::size_t window, std::size_t hop) noexcept {
  if (window == 0 || hop == 0 || frames < window) return 0;
  return 1 + (frames - window) / hop;
}

namespace {

bool timestamp_matches(double given, std::uint64_t index, double fps) {
  const double expected = static_cast<double>(index) / fps;
  return std::abs(given - expected) <= 1e-6 * std::max(1.0, std::abs(expected));
}

}  // namespace

std::vector<Frame> read_frame_manifest(const std::filesystem::path& path, double fps) {
  if (!(fps > 0.0)) throw ConfigError("fps must be positive");
  std::ifstream in(path);
  if (!in) throw Error("cannot open frame manifest: " + path.string());

  std::vector<Frame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string index_text;
    if (!(fields >> index_text)) continue;

    Frame frame;
    std::size_t used = 0;
    try {
      frame.index = std::stoull(index_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != index_text.size() || index_text.front() == '-') {
      throw ParseError(ParseError::Kind::Syntax, line_no, "bad frame index '" + index_text + "'");
    }
    if (!(fields >> frame.timestamp)) {
      throw ParseError(ParseError::Kind::Syntax, line_no, "missing timestamp");
    }
    if (!timestamp_matches(frame.timestamp, frame.index, fps)) {
      throw ParseError(ParseError::Kind::Syntax, line_no,
                       "timestamp does not equal index / fps");
    }
    frame.timestamp = static_cast<double>(frame.index) / fps;
    fields >> std::ws;
    std::getline(fields, frame.payload);
    while (!frame.payload.empty() && std::isspace(static_cast<unsigned char>(frame.payload.back()))) {
      frame.payload.pop_back();
    }
    if (!frames.empty() && frame.index <= frames.back().index) {
      throw ParseError(ParseError::Kind::Syntax, line_no, "frame indices must increase");
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<Frame> read_frame_directory(const std::filesystem::path& dir, double fps) {
  if (!(fps > 0.0)) throw ConfigError("fps must be positive");
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error("not a frame directory: " + dir.string());
  }

  std::vector<std::pair<std::uint64_t, std::string>> numbered;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string stem = entry.path().stem().string();
    std::size_t digits_begin = stem.size();
    while (digits_begin > 0 && std::isdigit(static_cast<unsigned char>(stem[digits_begin - 1]))) {
      --digits_begin;
    }
    if (digits_begin == stem.size()) continue;
    numbered.emplace_back(std::stoull(stem.substr(digits_begin)), entry.path().string());
  }
  std::sort(numbered.begin(), numbered.end());
  for (std::size_t i = 1; i < numbered.size(); ++i) {
    if (numbered[i].first == numbered[i - 1].first) {
      throw Error("duplicate frame number " + std::to_string(numbered[i].first) + " in " +
                  dir.string());
    }
  }

  std::vector<Frame> frames;
  frames.reserve(numbered.size());
  for (auto& [index, path] : numbered) frames.push_back(Frame::at(index, fps, std::move(path)));
  return frames;
}

}  // namespace semkg
