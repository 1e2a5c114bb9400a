#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <vector>

#include "semkg/command_language.hpp"
#include "semkg/dynamic_kg.hpp"
#include "semkg/ontology.hpp"
#include "semkg/stream_sampler.hpp"

namespace semkg {

/// Spatial weights of one frame; non-negative, summing to 1.
struct AttentionMap {
  std::vector<double> weights;

  friend bool operator==(const AttentionMap&, const AttentionMap&) = default;
};

inline constexpr double kAttentionTolerance = 1e-4;

struct CaptionResult {
  std::vector<std::string> tokens;
  /// One map per clip frame when present.
  std::optional<std::vector<AttentionMap>> attention;
};

/// Anything mapping a clip to a command-language caption.
class Captioner {
 public:
  virtual ~Captioner() = default;
  virtual CaptionResult caption(const Clip& clip) = 0;
};

/// Checks the token cap and, when present, that there is one attention map
/// per frame with each map normalised within kAttentionTolerance. Throws
/// CaptionLengthError / ProtocolError.
void validate_caption(const CaptionResult& result, TimeInterval span,
                      std::size_t max_tokens = kMaxCommandTokens);

// ---------------------------------------------------------------------------
// Replay of ground-truth annotations

struct AnnotationEntry {
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  std::string command;
};

/// Per-frame-range command annotations: `start end tokens...` lines plus an
/// optional `default tokens...` line used for uncovered frames.
class AnnotationTrack {
 public:
  AnnotationTrack() = default;
  /// Throws ConfigError when entries are unsorted, overlapping or empty.
  AnnotationTrack(std::vector<AnnotationEntry> entries, std::optional<std::string> fallback = {});

  static AnnotationTrack parse(std::string_view text);
  static AnnotationTrack load(const std::filesystem::path& path);

  const std::vector<AnnotationEntry>& entries() const noexcept { return entries_; }
  const std::optional<std::string>& fallback() const noexcept { return fallback_; }

 private:
  std::vector<AnnotationEntry> entries_;
  std::optional<std::string> fallback_;
};

/// Command line of the entry covering most of the clip's frames; ties go
/// to the later entry. Uncovered stretches count as default entries and
/// throw CoverageError when the track has no default.
CaptionResult caption_replay(const AnnotationTrack& track, const Clip& clip);

class ReplayCaptioner final : public Captioner {
 public:
  explicit ReplayCaptioner(AnnotationTrack track) : track_(std::move(track)) {}
  CaptionResult caption(const Clip& clip) override { return caption_replay(track_, clip); }

 private:
  AnnotationTrack track_;
};

// ---------------------------------------------------------------------------
// External captioner process

/// `{"clip":{"start":S,"end":E,"frames":[payload,...]}}`, no trailing newline.
std::string make_caption_request(const Clip& clip);

/// Decodes `{"tokens":[...],"attention":[[...],...]}` and validates it
/// against the clip span. `{"error":"..."}` and malformed lines throw
/// ProtocolError.
CaptionResult parse_caption_response(std::string_view line, TimeInterval span,
                                     std::size_t max_tokens = kMaxCommandTokens);

/// Child process speaking the newline-delimited captioner protocol on its
/// stdin/stdout, one request in flight. The process is started lazily and
/// restarted after a timeout or crash.
class ExternalCaptioner final : public Captioner {
 public:
  ExternalCaptioner(std::string command_line, double timeout_seconds,
                    std::size_t max_tokens = kMaxCommandTokens);
  ~ExternalCaptioner() override;

  ExternalCaptioner(const ExternalCaptioner&) = delete;
  ExternalCaptioner& operator=(const ExternalCaptioner&) = delete;

  /// Throws TimeoutError, ProtocolError or Error (spawn/IO failure).
  CaptionResult caption(const Clip& clip) override;

 private:
  void spawn();
  void terminate();
  std::string read_line(double timeout_seconds);

  std::string command_;
  double timeout_;
  std::size_t max_tokens_;
  pid_t pid_ = -1;
  int fd_ = -1;
  std::string buffer_;
};

struct CaptionerBinding {
  enum class Variant { Replay, External };

  Variant variant = Variant::Replay;
  /// Annotation file (Replay) or shell command line (External).
  std::string target;
  double timeout_seconds = 10.0;
};

std::unique_ptr<Captioner> make_captioner(const CaptionerBinding& binding,
                                          std::size_t max_tokens = kMaxCommandTokens);

// ---------------------------------------------------------------------------
// Algorithm driver

enum class FailurePolicy { Skip, Halt };

struct PipelineOptions {
  std::size_t query_depth = kDefaultQueryDepth;
  FailurePolicy policy = FailurePolicy::Skip;
  std::size_t max_tokens = kMaxCommandTokens;
  /// Caption on a worker thread while the caller's thread applies unions.
  bool concurrent = false;
  std::size_t queue_capacity = 4;
};

struct ClipEvent {
  TimeInterval span;
  /// Canonical token line; empty when the clip failed.
  std::string command;
  UnionDelta delta;
  std::optional<std::string> error;
  std::optional<std::vector<AttentionMap>> attention;
};

/// `[start,end] -> tokens -> +nodes/+edges`
std::string format_event(const ClipEvent& event);

struct RunResult {
  DynamicKnowledgeGraph graph;
  std::vector<ClipEvent> events;
  /// Human-readable notes about stream discontinuities.
  std::vector<std::string> gaps;
};

/// Called after each clip's unions, in emission order, with the graph as it
/// stands.
using ClipObserver = std::function<void(const ClipEvent&, const DynamicKnowledgeGraph&)>;

/// Samples `frames` into clips and, per clip: caption, parse, union the
/// command, then query and union the concept graph of every resolved
/// entity. Unresolved entities become unresolved nodes and are not
/// queried. Failed clips are logged and skipped, or raise PipelineHalt
/// under FailurePolicy::Halt.
RunResult run_stream(std::span<const Frame> frames, StreamSampler& sampler, Captioner& captioner,
                     const Ontology& onto, const PipelineOptions& options = {},
                     const ClipObserver& observer = {});

}  // namespace semkg
