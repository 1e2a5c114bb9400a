#include <filesystem>
#include <fstream>
#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "semkg/error.hpp"
#include "semkg/stream_sampler.hpp"

using namespace semkg;

namespace {

std::vector<TimeInterval> feed(StreamSampler& s, std::uint64_t first, std::uint64_t count) {
  std::vector<TimeInterval> spans;
  for (std::uint64_t i = first; i < first + count; ++i) {
    if (auto clip = s.push(Frame::at(i))) spans.push_back(clip->span());
  }
  return spans;
}

}  // namespace

TEST_CASE("default hop is half the window") {
  CHECK(StreamSampler(30).hop() == 15);
  CHECK(StreamSampler(2).hop() == 1);
  CHECK(StreamSampler(5).hop() == 2);
  CHECK(StreamSampler(7, 7).hop() == 7);
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(StreamSampler(1), ConfigError);
  CHECK_THROWS_AS(StreamSampler(0), ConfigError);
  CHECK_THROWS_AS(StreamSampler(4, 0), ConfigError);
  CHECK_THROWS_AS(StreamSampler(4, 5), ConfigError);
}

TEST_CASE("window of four emits every two frames after filling") {
  StreamSampler s(4);
  const auto spans = feed(s, 0, 8);
  const std::vector<TimeInterval> expected{{0, 3}, {2, 5}, {4, 7}};
  CHECK(spans == expected);
}

TEST_CASE("thirty-frame window emits once on the thirtieth push") {
  StreamSampler s(30);
  std::size_t emitted_at = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    if (auto clip = s.push(Frame::at(i))) {
      CHECK(emitted_at == 0);
      emitted_at = i + 1;
      CHECK(clip->span() == TimeInterval{0, 29});
      CHECK(clip->size() == 30);
    }
  }
  CHECK(emitted_at == 30);
}

TEST_CASE("hop one emits on every push after the fill") {
  StreamSampler s(2);
  const auto spans = feed(s, 0, 3);
  const std::vector<TimeInterval> expected{{0, 1}, {1, 2}};
  CHECK(spans == expected);
}

TEST_CASE("streams need not start at frame zero") {
  StreamSampler s(4);
  const auto spans = feed(s, 100, 6);
  const std::vector<TimeInterval> expected{{100, 103}, {102, 105}};
  CHECK(spans == expected);
}

TEST_CASE("clip_count closed form") {
  CHECK(clip_count(105, 30, 15) == 6);
  CHECK(clip_count(30, 30, 15) == 1);
  CHECK(clip_count(29, 30, 15) == 0);
  CHECK(clip_count(0, 30, 15) == 0);
  // Emission points of the 105/30/15 case, enumerated by hand.
  CHECK(oracle::emission_points(105, 30, 15) == std::vector<std::size_t>{29, 44, 59, 74, 89, 104});
}

TEST_CASE("emitted clips are contiguous, full-length and overlap by L - hop") {
  for (std::size_t window = 2; window <= 12; ++window) {
    for (std::size_t hop = 1; hop <= window; ++hop) {
      StreamSampler s(window, hop);
      std::vector<Clip> clips;
      for (std::uint64_t i = 0; i < 60; ++i) {
        if (auto clip = s.push(Frame::at(i))) clips.push_back(std::move(*clip));
        CHECK(s.buffered() <= window);
      }
      REQUIRE(clips.size() == clip_count(60, window, hop));
      for (std::size_t k = 0; k < clips.size(); ++k) {
        const auto& c = clips[k];
        REQUIRE(c.size() == window);
        CHECK(c.end_index - c.start_index + 1 == window);
        for (std::size_t j = 0; j < c.size(); ++j) CHECK(c.frames[j].index == c.start_index + j);
        if (k > 0) {
          const auto overlap = clips[k - 1].end_index + 1 - c.start_index;
          CHECK(overlap == window - hop);
        }
      }
    }
  }
}

TEST_CASE("with hop = L/2 interior frames are covered twice, boundary frames once") {
  for (std::size_t window : {2u, 4u, 10u, 30u}) {
    const std::size_t hop = window / 2;
    // A stream that is fully consumed: F = L + k * hop.
    const std::size_t frames = window + 5 * hop;
    StreamSampler s(window);
    std::map<std::uint64_t, int> coverage;
    for (std::uint64_t i = 0; i < frames; ++i) {
      if (auto clip = s.push(Frame::at(i))) {
        for (const auto& f : clip->frames) ++coverage[f.index];
      }
    }
    for (std::uint64_t i = 0; i < frames; ++i) {
      const bool interior = i >= hop && i + hop <= frames - 1;
      CHECK(coverage[i] == (interior ? 2 : 1));
    }
  }
}

TEST_CASE("a gap resets the window and restarts from the new frame") {
  StreamSampler s(4);
  feed(s, 0, 4);
  CHECK(s.emitted() == 1);
  try {
    s.push(Frame::at(10));
    FAIL("expected a gap error");
  } catch (const StreamGapError& e) {
    CHECK(e.expected() == 4);
    CHECK(e.got() == 10);
  }
  CHECK(s.buffered() == 1);
  const auto spans = feed(s, 11, 3);
  const std::vector<TimeInterval> expected{{10, 13}};
  CHECK(spans == expected);
}

TEST_CASE("pending frames report the unemitted tail") {
  StreamSampler s(4);
  feed(s, 0, 3);
  CHECK(s.pending_frames().size() == 3);
  feed(s, 3, 2);  // emits [0..3]; frame 4 pending
  const auto rest = s.pending_frames();
  REQUIRE(rest.size() == 1);
  CHECK(rest.front().index == 4);
}

TEST_CASE("timestamps derive from the frame rate") {
  CHECK(Frame::at(45).timestamp == doctest::Approx(1.5));
  CHECK(Frame::at(45, 15.0).timestamp == doctest::Approx(3.0));
}

TEST_CASE("manifest reader") {
  const auto dir = std::filesystem::temp_directory_path() / "semkg_manifest_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "frames.manifest";

  SUBCASE("valid manifest") {
    std::ofstream(path) << "# comment\n0 0.0 a.png\n1 0.0333333333 b.png\n\n2 0.0666666667 c d.png\n";
    const auto frames = read_frame_manifest(path);
    REQUIRE(frames.size() == 3);
    CHECK(frames[2].payload == "c d.png");
    CHECK(frames[1].timestamp == doctest::Approx(1.0 / 30));
  }
  SUBCASE("timestamp inconsistent with fps") {
    std::ofstream(path) << "0 0.0 a\n1 0.5 b\n";
    CHECK_THROWS_AS(read_frame_manifest(path), ParseError);
  }
  SUBCASE("decreasing index") {
    std::ofstream(path) << "1 0.0333333333 a\n0 0.0 b\n";
    CHECK_THROWS_AS(read_frame_manifest(path), ParseError);
  }
  SUBCASE("garbage index") {
    std::ofstream(path) << "x 0.0 a\n";
    CHECK_THROWS_AS(read_frame_manifest(path), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_frame_manifest(dir / "nope.manifest"), Error);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("directory reader sorts numerically") {
  const auto dir = std::filesystem::temp_directory_path() / "semkg_dir_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (const char* name : {"frame_10.png", "frame_9.png", "frame_8.png", "notes.txt"}) {
    std::ofstream(dir / name) << "x";
  }
  const auto frames = read_frame_directory(dir);
  REQUIRE(frames.size() == 3);
  CHECK(frames[0].index == 8);
  CHECK(frames[1].index == 9);
  CHECK(frames[2].index == 10);
  CHECK(frames[2].payload.ends_with("frame_10.png"));
  std::filesystem::remove_all(dir);
}
