#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "semkg/time_interval.hpp"

namespace semkg {

inline constexpr double kDefaultFps = 30.0;

struct Frame {
  std::uint64_t index = 0;
  double timestamp = 0.0;
  /// Opaque reference: an image path, feature handle or annotation token.
  std::string payload;

  static Frame at(std::uint64_t index, double fps = kDefaultFps, std::string payload = {}) {
    return Frame{index, static_cast<double>(index) / fps, std::move(payload)};
  }
};

/// A fixed-length window of contiguous frames.
struct Clip {
  std::uint64_t start_index = 0;
  std::uint64_t end_index = 0;
  std::vector<Frame> frames;

  TimeInterval span() const noexcept { return {start_index, end_index}; }
  std::size_t size() const noexcept { return frames.size(); }
};

/// Overlapping observation-window automaton.
///
/// Frames are queued into a window of capacity L. A clip is emitted when
/// the window fills for the first time, and afterwards every time `hop`
/// new frames have displaced old ones. At most one clip is emitted per
/// push. Single writer; emitted clips are independent values.
class StreamSampler {
 public:
  /// Throws ConfigError unless window >= 2 and 1 <= hop <= window.
  /// hop defaults to window / 2.
  explicit StreamSampler(std::size_t window, std::optional<std::size_t> hop = std::nullopt);

  /// Feeds the next frame. On an index discontinuity the window is reset,
  /// restarted with `frame`, and StreamGapError is thrown.
  std::optional<Clip> push(Frame frame);

  /// Frames received since the last emission (or all buffered frames if
  /// the window never filled). Diagnostic only; does not alter state.
  std::vector<Frame> pending_frames() const;

  void reset();

  std::size_t window() const noexcept { return window_; }
  std::size_t hop() const noexcept { return hop_; }
  std::size_t buffered() const noexcept { return queue_.size(); }
  std::size_t frames_since_emit() const noexcept { return since_emit_; }
  std::size_t emitted() const noexcept { return emitted_; }

 private:
  Clip make_clip() const;

  std::size_t window_;
  std::size_t hop_;
  std::deque<Frame> queue_;
  std::size_t since_emit_ = 0;
  std::size_t emitted_ = 0;
  bool filled_ = false;
  std::optional<std::uint64_t> last_index_;
};

/// Number of clips a fully consumed stream of `frames` frames produces.
std::size_t clip_count(std::size_t frames, std::size_t window, std::size_t hop) noexcept;

/// Reads `index timestamp payload` lines. Blank lines and `#` comments are
/// skipped. Throws ParseError on malformed lines, on non-increasing
/// indices, or when a timestamp disagrees with index / fps.
std::vector<Frame> read_frame_manifest(const std::filesystem::path& path, double fps = kDefaultFps);

/// Lists regular files whose stem ends in a number, sorted by that number,
/// which becomes the frame index. The payload is the file path.
std::vector<Frame> read_frame_directory(const std::filesystem::path& dir, double fps = kDefaultFps);

}  // namespace semkg
