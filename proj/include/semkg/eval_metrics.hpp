#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace semkg {

using Sentence = std::vector<std::string>;

struct ScoredPair {
  Sentence candidate;
  std::vector<Sentence> references;
};

/// Candidate/reference pairs. Every candidate has at least one reference.
struct ScoredCorpus {
  std::vector<ScoredPair> pairs;

  /// Throws ConfigError on an empty corpus, a pair without references or
  /// an empty sentence.
  void validate() const;
};

inline constexpr double kRougeBeta = 1.2;

/// Corpus-level BLEU with uniform weights over 1..4-gram clipped
/// precisions and brevity penalty exp(1 - r/c) when c <= r, where r sums
/// the reference length closest to each candidate (shorter on ties). No
/// smoothing: any zero precision gives 0.
double bleu4(const ScoredCorpus& corpus);

/// Mean over pairs of the best LCS F-measure against any reference,
/// F = (1 + beta^2) P R / (R + beta^2 P).
double rouge_l(const ScoredCorpus& corpus, double beta = kRougeBeta);

/// Length of the longest common subsequence.
std::size_t lcs_length(const Sentence& a, const Sentence& b);

/// Candidates one per line; references one line per candidate with
/// tab-separated alternatives. Throws ConfigError on a count mismatch.
ScoredCorpus read_corpus(const std::filesystem::path& candidates,
                         const std::filesystem::path& references);

}  // namespace semkg
