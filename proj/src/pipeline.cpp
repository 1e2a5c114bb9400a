#include "semkg/pipeline.hpp"

#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <variant>

#include "semkg/error.hpp"

namespace semkg {

std::string format_event(const ClipEvent& event) {
  std::string out = to_string(event.span) + " -> ";
  out += event.error ? "!" + *event.error : event.command;
  out += " -> +" + std::to_string(event.delta.nodes) + "/+" + std::to_string(event.delta.edges);
  return out;
}

namespace {

/// Output of the sampling/captioning stage for one clip.
struct Captioned {
  TimeInterval span;
  std::variant<CaptionResult, std::string> outcome;  // result or failure message
};

class GraphOwner {
 public:
  GraphOwner(const Ontology& onto, const PipelineOptions& options, const ClipObserver& observer)
      : onto_(onto), options_(options), observer_(observer) {}

  void apply(Captioned item) {
    ClipEvent event;
    event.span = item.span;
    if (auto* failure = std::get_if<std::string>(&item.outcome)) {
      fail(std::move(event), *failure);
      return;
    }
    auto& caption = std::get<CaptionResult>(item.outcome);
    CommandLanguage command;
    try {
      validate_caption(caption, item.span, options_.max_tokens);
      command = parse_command(caption.tokens, onto_, item.span, options_.max_tokens);
    } catch (const Error& e) {
      fail(std::move(event), e.what());
      return;
    }

    event.command = render_line(command);
    event.attention = std::move(caption.attention);
    event.delta += result_.graph.union_command(command);

    std::set<std::string> queried;
    for (const auto& token : command.tokens) {
      if (token.kind != CommandToken::Kind::Entity) continue;
      if (!queried.insert(token.text).second) continue;
      event.delta += result_.graph.union_concept(concept_of(token.text), item.span);
    }
    finish(std::move(event));
  }

  void note_gap(std::string message) { result_.gaps.push_back(std::move(message)); }

  RunResult take() { return std::move(result_); }

 private:
  const LabeledDirectedGraph& concept_of(const std::string& entity) {
    auto it = concepts_.find(entity);
    if (it == concepts_.end()) {
      it = concepts_.emplace(entity, onto_.query_concept(entity, options_.query_depth)).first;
    }
    return it->second;
  }

  void fail(ClipEvent event, const std::string& message) {
    if (options_.policy == FailurePolicy::Halt) {
      throw PipelineHalt("clip " + to_string(event.span) + ": " + message);
    }
    event.error = message;
    finish(std::move(event));
  }

  void finish(ClipEvent event) {
    if (observer_) observer_(event, result_.graph);
    result_.events.push_back(std::move(event));
  }

  const Ontology& onto_;
  const PipelineOptions& options_;
  const ClipObserver& observer_;
  RunResult result_;
  std::map<std::string, LabeledDirectedGraph> concepts_;
};

Captioned caption_clip(Captioner& captioner, const Clip& clip) {
  try {
    return {clip.span(), captioner.caption(clip)};
  } catch (const Error& e) {
    return {clip.span(), std::string(e.what())};
  }
}

/// Feeds frames through the sampler, reporting gaps and emitted clips.
template <typename OnClip, typename OnGap>
void sample(std::span<const Frame> frames, StreamSampler& sampler, OnClip&& on_clip,
            OnGap&& on_gap) {
  for (const auto& frame : frames) {
    std::optional<Clip> clip;
    try {
      clip = sampler.push(frame);
    } catch (const StreamGapError& gap) {
      on_gap(gap);
      continue;
    }
    if (clip && !on_clip(*clip)) return;
  }
}

RunResult run_sequential(std::span<const Frame> frames, StreamSampler& sampler,
                         Captioner& captioner, GraphOwner& owner) {
  sample(
      frames, sampler,
      [&](const Clip& clip) {
        owner.apply(caption_clip(captioner, clip));
        return true;
      },
      [&](const StreamGapError& gap) { owner.note_gap(gap.what()); });
  return owner.take();
}

/// Bounded single-producer/single-consumer handoff.
class Handoff {
 public:
  explicit Handoff(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

  /// False once the consumer has stopped listening.
  bool push(std::variant<Captioned, std::string> item) {
    std::unique_lock lock(mutex_);
    space_.wait(lock, [&] { return items_.size() < capacity_ || cancelled_; });
    if (cancelled_) return false;
    items_.push_back(std::move(item));
    ready_.notify_one();
    return true;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    ready_.notify_one();
  }

  void cancel() {
    std::lock_guard lock(mutex_);
    cancelled_ = true;
    space_.notify_all();
  }

  std::optional<std::variant<Captioned, std::string>> pop() {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    auto item = std::move(items_.front());
    items_.pop_front();
    space_.notify_one();
    return item;
  }

 private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::condition_variable ready_;
  std::condition_variable space_;
  std::deque<std::variant<Captioned, std::string>> items_;
  bool closed_ = false;
  bool cancelled_ = false;
};

RunResult run_concurrent(std::span<const Frame> frames, StreamSampler& sampler,
                         Captioner& captioner, GraphOwner& owner, std::size_t capacity) {
  Handoff handoff(capacity);
  std::exception_ptr producer_error;
  // Gap notices travel through the queue as strings so the log stays ordered.
  std::thread producer([&] {
    try {
      sample(
          frames, sampler,
          [&](const Clip& clip) { return handoff.push(caption_clip(captioner, clip)); },
          [&](const StreamGapError& gap) { handoff.push(std::string(gap.what())); });
    } catch (...) {
      producer_error = std::current_exception();
    }
    handoff.close();
  });

  try {
    while (auto item = handoff.pop()) {
      if (auto* captioned = std::get_if<Captioned>(&*item)) {
        owner.apply(std::move(*captioned));
      } else {
        owner.note_gap(std::get<std::string>(std::move(*item)));
      }
    }
  } catch (...) {
    handoff.cancel();
    producer.join();
    throw;
  }
  producer.join();
  if (producer_error) std::rethrow_exception(producer_error);
  return owner.take();
}

}  // namespace

RunResult run_stream(std::span<const Frame> frames, StreamSampler& sampler, Captioner& captioner,
                     const Ontology& onto, const PipelineOptions& options,
                     const ClipObserver& observer) {
  GraphOwner owner(onto, options, observer);
  if (options.concurrent) {
    return run_concurrent(frames, sampler, captioner, owner, options.queue_capacity);
  }
  return run_sequential(frames, sampler, captioner, owner);
}

}  // namespace semkg
