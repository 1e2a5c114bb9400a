#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "semkg/error.hpp"
#include "semkg/pipeline.hpp"

namespace semkg {

void validate_caption(const CaptionResult& result, TimeInterval span, std::size_t max_tokens) {
  if (result.tokens.size() > max_tokens) {
    throw CaptionLengthError("caption has " + std::to_string(result.tokens.size()) +
                             " tokens, limit is " + std::to_string(max_tokens));
  }
  if (!result.attention) return;
  const auto& maps = *result.attention;
  if (maps.size() != span.length()) {
    throw ProtocolError("expected " + std::to_string(span.length()) + " attention maps, got " +
                        std::to_string(maps.size()));
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string frame = "frame " + std::to_string(span.start + i);
    double sum = 0.0;
    for (double w : maps[i].weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw ProtocolError("attention for " + frame + " has a negative or non-finite weight", i);
      }
      sum += w;
    }
    if (maps[i].weights.empty() || std::abs(sum - 1.0) > kAttentionTolerance) {
      throw ProtocolError("attention for " + frame + " sums to " + std::to_string(sum), i);
    }
  }
}

AnnotationTrack::AnnotationTrack(std::vector<AnnotationEntry> entries,
                                 std::optional<std::string> fallback)
    : entries_(std::move(entries)), fallback_(std::move(fallback)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.start > e.end) {
      throw ConfigError("annotation [" + std::to_string(e.start) + "," + std::to_string(e.end) +
                        "] ends before it starts");
    }
    if (e.command.find_first_not_of(" \t") == std::string::npos) {
      throw ConfigError("annotation [" + std::to_string(e.start) + "," + std::to_string(e.end) +
                        "] has no command");
    }
    if (i > 0 && e.start <= entries_[i - 1].end) {
      throw ConfigError("annotation at frame " + std::to_string(e.start) +
                        " overlaps or precedes the previous entry");
    }
  }
}

AnnotationTrack AnnotationTrack::parse(std::string_view text) {
  std::vector<AnnotationEntry> entries;
  std::optional<std::string> fallback;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;

    auto join_from = [&](std::size_t first) {
      std::string out;
      for (std::size_t i = first; i < tokens.size(); ++i) {
        if (!out.empty()) out.push_back(' ');
        out += tokens[i];
      }
      return out;
    };

    if (tokens[0] == "default") {
      if (tokens.size() < 2) {
        throw ParseError(ParseError::Kind::Syntax, line_no, "default needs a command");
      }
      if (fallback) throw ParseError(ParseError::Kind::Duplicate, line_no, "second default");
      fallback = join_from(1);
      continue;
    }
    if (tokens.size() < 3) {
      throw ParseError(ParseError::Kind::Syntax, line_no,
                       "expected 'start_index end_index command tokens...'");
    }
    AnnotationEntry entry;
    try {
      std::size_t used_a = 0;
      std::size_t used_b = 0;
      if (tokens[0].front() == '-' || tokens[1].front() == '-') throw std::invalid_argument("sign");
      entry.start = std::stoull(tokens[0], &used_a);
      entry.end = std::stoull(tokens[1], &used_b);
      if (used_a != tokens[0].size() || used_b != tokens[1].size()) {
        throw std::invalid_argument("trailing");
      }
    } catch (const std::exception&) {
      throw ParseError(ParseError::Kind::Syntax, line_no, "bad frame range");
    }
    entry.command = join_from(2);
    entries.push_back(std::move(entry));
  }
  try {
    return AnnotationTrack(std::move(entries), std::move(fallback));
  } catch (const ConfigError& e) {
    throw ParseError(ParseError::Kind::Syntax, 0, e.what());
  }
}

AnnotationTrack AnnotationTrack::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotation file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

CaptionResult caption_replay(const AnnotationTrack& track, const Clip& clip) {
  struct Segment {
    std::uint64_t frames;
    const std::string* command;
  };
  std::vector<Segment> segments;
  auto gap = [&](std::uint64_t from, std::uint64_t to) {
    if (!track.fallback()) {
      throw CoverageError("no annotation covers frames [" + std::to_string(from) + "," +
                          std::to_string(to) + "]");
    }
    segments.push_back({to - from + 1, &*track.fallback()});
  };

  std::uint64_t cursor = clip.start_index;
  for (const auto& e : track.entries()) {
    if (e.end < cursor) continue;
    if (e.start > clip.end_index) break;
    if (e.start > cursor) gap(cursor, e.start - 1);
    const std::uint64_t from = std::max(e.start, cursor);
    const std::uint64_t to = std::min(e.end, clip.end_index);
    segments.push_back({to - from + 1, &e.command});
    cursor = to + 1;
    if (cursor > clip.end_index) break;
  }
  if (cursor <= clip.end_index) gap(cursor, clip.end_index);

  const Segment* best = &segments.front();
  for (const auto& s : segments) {
    if (s.frames >= best->frames) best = &s;
  }
  return CaptionResult{split_tokens(*best->command), std::nullopt};
}

}  // namespace semkg
