#include "semkg/eval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>

#include "semkg/command_language.hpp"
#include "semkg/error.hpp"

namespace semkg {

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const Sentence& s, std::size_t n) {
  NgramCounts counts;
  if (s.size() < n) return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    ++counts[std::vector<std::string>(s.begin() + static_cast<std::ptrdiff_t>(i),
                                      s.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

std::size_t closest_reference_length(const ScoredPair& pair) {
  const std::size_t c = pair.candidate.size();
  std::size_t best = pair.references.front().size();
  for (const auto& ref : pair.references) {
    const std::size_t r = ref.size();
    const auto diff = [c](std::size_t len) { return len > c ? len - c : c - len; };
    if (diff(r) < diff(best) || (diff(r) == diff(best) && r < best)) best = r;
  }
  return best;
}

}  // namespace

void ScoredCorpus::validate() const {
  if (pairs.empty()) throw ConfigError("corpus is empty");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (p.candidate.empty()) throw ConfigError("candidate " + std::to_string(i + 1) + " is empty");
    if (p.references.empty()) {
      throw ConfigError("candidate " + std::to_string(i + 1) + " has no reference");
    }
    for (const auto& r : p.references) {
      if (r.empty()) throw ConfigError("empty reference for candidate " + std::to_string(i + 1));
    }
  }
}

double bleu4(const ScoredCorpus& corpus) {
  corpus.validate();
  std::size_t matched[4] = {};
  std::size_t total[4] = {};
  std::size_t cand_len = 0;
  std::size_t ref_len = 0;

  for (const auto& pair : corpus.pairs) {
    cand_len += pair.candidate.size();
    ref_len += closest_reference_length(pair);
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto cand = ngrams(pair.candidate, n);
      NgramCounts max_ref;
      for (const auto& ref : pair.references) {
        for (const auto& [gram, count] : ngrams(ref, n)) {
          auto& slot = max_ref[gram];
          slot = std::max(slot, count);
        }
      }
      for (const auto& [gram, count] : cand) {
        total[n - 1] += count;
        if (auto it = max_ref.find(gram); it != max_ref.end()) {
          matched[n - 1] += std::min(count, it->second);
        }
      }
    }
  }

  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    if (matched[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched[n]) / static_cast<double>(total[n]));
  }
  const double brevity =
      cand_len > ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  return brevity * std::exp(log_sum / 4.0);
}

std::size_t lcs_length(const Sentence& a, const Sentence& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

double rouge_l(const ScoredCorpus& corpus, double beta) {
  corpus.validate();
  const double b2 = beta * beta;
  double sum = 0.0;
  for (const auto& pair : corpus.pairs) {
    double best = 0.0;
    for (const auto& ref : pair.references) {
      const auto lcs = static_cast<double>(lcs_length(pair.candidate, ref));
      if (lcs == 0.0) continue;
      const double p = lcs / static_cast<double>(pair.candidate.size());
      const double r = lcs / static_cast<double>(ref.size());
      best = std::max(best, (1.0 + b2) * p * r / (r + b2 * p));
    }
    sum += best;
  }
  return sum / static_cast<double>(corpus.pairs.size());
}

ScoredCorpus read_corpus(const std::filesystem::path& candidates,
                         const std::filesystem::path& references) {
  auto read_lines = [](const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
    }
    while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) {
      lines.pop_back();
    }
    return lines;
  };

  const auto cand_lines = read_lines(candidates);
  const auto ref_lines = read_lines(references);
  if (cand_lines.size() != ref_lines.size()) {
    throw ConfigError(std::to_string(cand_lines.size()) + " candidates but " +
                      std::to_string(ref_lines.size()) + " reference lines");
  }
  ScoredCorpus corpus;
  for (std::size_t i = 0; i < cand_lines.size(); ++i) {
    ScoredPair pair;
    pair.candidate = split_tokens(cand_lines[i]);
    std::size_t from = 0;
    const std::string& line = ref_lines[i];
    while (from <= line.size()) {
      const std::size_t tab = std::min(line.find('\t', from), line.size());
      auto ref = split_tokens(std::string_view(line).substr(from, tab - from));
      if (!ref.empty()) pair.references.push_back(std::move(ref));
      from = tab + 1;
    }
    corpus.pairs.push_back(std::move(pair));
  }
  corpus.validate();
  return corpus;
}

}  // namespace semkg
