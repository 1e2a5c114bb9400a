#pragma once

// Brute-force reference implementations used only by tests. Each works from
// raw declarations and shares no code path with the library routine it
// checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "semkg/ontology.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Sampler: replay the queue by hand, one frame at a time.

/// End positions (0-based frame offsets) at which a clip is emitted.
inline std::vector<std::size_t> emission_points(std::size_t frames, std::size_t window,
                                                std::size_t hop) {
  std::vector<std::size_t> out;
  std::size_t queued = 0;
  std::size_t fresh = 0;
  bool full = false;
  for (std::size_t i = 0; i < frames; ++i) {
    queued = std::min(queued + 1, window);
    if (!full) {
      if (queued == window) {
        full = true;
        fresh = 0;
        out.push_back(i);
      }
      continue;
    }
    if (++fresh == hop) {
      fresh = 0;
      out.push_back(i);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ontology

/// Declared edges of one hierarchical kind, as an adjacency list.
inline std::map<std::string, std::vector<std::string>> parent_lists(const semkg::Ontology& o) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [name, kind] : o.concepts()) adj[name];
  for (const auto& c : o.constraints()) {
    if (c.relation == semkg::kIsA || c.relation == semkg::kMemberOf) adj[c.subject].push_back(c.object);
  }
  return adj;
}

/// Depth-first reachability, zero or more hops.
inline bool reachable(const std::map<std::string, std::vector<std::string>>& adj,
                      const std::string& from, const std::string& to) {
  std::set<std::string> seen;
  std::vector<std::string> stack{from};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    if (cur == to) return true;
    if (!seen.insert(cur).second) continue;
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const auto& p : it->second) stack.push_back(p);
  }
  return false;
}

/// Everything reachable from `from` by depth-first search, `from` included.
inline std::set<std::string> reachable_set(const std::map<std::string, std::vector<std::string>>& adj,
                                           const std::string& from) {
  std::set<std::string> seen;
  std::vector<std::string> stack{from};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const auto& p : it->second) stack.push_back(p);
  }
  return seen;
}

/// (offender, lower pair member, upper pair member) triples.
inline std::set<std::tuple<std::string, std::string, std::string>> disjointness_violations(
    const semkg::Ontology& o) {
  const auto adj = parent_lists(o);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : o.constraints()) {
    if (c.relation == semkg::kDisjointWith) {
      pairs.emplace(std::min(c.subject, c.object), std::max(c.subject, c.object));
    }
  }
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& [name, kind] : o.concepts()) {
    for (const auto& [a, b] : pairs) {
      if (reachable(adj, name, a) && reachable(adj, name, b)) out.emplace(name, a, b);
    }
  }
  return out;
}

/// Names lying on some isA cycle.
inline std::set<std::string> cyclic_names(const semkg::Ontology& o) {
  const auto adj = parent_lists(o);
  std::set<std::string> out;
  for (const auto& [name, parents] : adj) {
    for (const auto& p : parents) {
      if (reachable(adj, p, name)) out.insert(name);
    }
  }
  return out;
}

/// Concept neighbourhood by explicit level-by-level expansion.
inline semkg::LabeledDirectedGraph concept_graph(const semkg::Ontology& o, const std::string& entity,
                                                 std::size_t depth) {
  const auto adj = parent_lists(o);
  std::map<std::string, std::size_t> dist{{entity, 0}};
  for (std::size_t d = 0; d < depth; ++d) {
    for (const auto& [name, dn] : std::map<std::string, std::size_t>(dist)) {
      if (dn != d) continue;
      for (const auto& p : adj.at(name)) dist.emplace(p, d + 1);
    }
  }
  semkg::LabeledDirectedGraph g;
  for (const auto& [name, d] : dist) g.nodes.insert(name);
  std::set<semkg::LogicalConstraint> edges;
  for (const auto& c : o.constraints()) {
    if (!dist.contains(c.subject)) continue;
    if (c.relation == semkg::kDisjointWith) continue;
    if (c.relation == semkg::kIsA || c.relation == semkg::kMemberOf) {
      if (dist.contains(c.object)) edges.insert(c);
      continue;
    }
    g.nodes.insert(c.object);
    edges.insert(c);
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

// ---------------------------------------------------------------------------
// The union as plain sets: the graph is the union of every command's chain
// edges and every entity's concept graph; each element's time attribute
// is the set of frames covered by the clips that mentioned it.

struct NaiveGraph {
  std::map<std::string, std::set<std::uint64_t>> nodes;
  // (subject, relation, object, restriction text, origin) -> frames
  std::map<std::tuple<std::string, std::string, std::string, std::string, std::string>,
           std::set<std::uint64_t>>
      edges;
};

inline void cover(std::set<std::uint64_t>& frames, std::uint64_t start, std::uint64_t end) {
  for (std::uint64_t f = start; f <= end; ++f) frames.insert(f);
}

/// `commands` holds (start, end, tokens) using exact vocabulary names;
/// tokens not declared as concepts are treated as unresolved entities.
inline NaiveGraph naive_union(
    const semkg::Ontology& o,
    const std::vector<std::tuple<std::uint64_t, std::uint64_t, std::vector<std::string>>>& commands,
    std::size_t depth) {
  NaiveGraph g;
  for (const auto& [start, end, tokens] : commands) {
    for (std::size_t i = 0; i < tokens.size(); i += 2) cover(g.nodes[tokens[i]], start, end);
    for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
      cover(g.edges[{tokens[i - 1], tokens[i], tokens[i + 1], "", "command"}], start, end);
    }
    for (std::size_t i = 0; i < tokens.size(); i += 2) {
      if (!o.concepts().contains(tokens[i])) continue;
      const auto ge = concept_graph(o, tokens[i], depth);
      for (const auto& n : ge.nodes) cover(g.nodes[n], start, end);
      for (const auto& e : ge.edges) {
        const std::string r = e.restriction ? e.restriction->to_string() : "";
        cover(g.edges[{e.subject, e.relation, e.object, r, "ontology"}], start, end);
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Metrics by enumeration.

using Sentence = std::vector<std::string>;

inline std::size_t occurrences(const Sentence& s, const Sentence& gram) {
  std::size_t n = 0;
  if (gram.size() > s.size()) return 0;
  for (std::size_t i = 0; i + gram.size() <= s.size(); ++i) {
    if (std::equal(gram.begin(), gram.end(), s.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

inline double bleu4(const std::vector<std::pair<Sentence, std::vector<Sentence>>>& corpus) {
  double num[4] = {};
  double den[4] = {};
  double c = 0;
  double r = 0;
  for (const auto& [cand, refs] : corpus) {
    c += static_cast<double>(cand.size());
    // Closest reference length, shortest on ties.
    std::vector<std::size_t> lens;
    for (const auto& ref : refs) lens.push_back(ref.size());
    std::sort(lens.begin(), lens.end());
    std::size_t best = lens.front();
    for (auto len : lens) {
      auto gap = [&](std::size_t x) {
        return std::abs(static_cast<long>(x) - static_cast<long>(cand.size()));
      };
      if (gap(len) < gap(best)) best = len;
    }
    r += static_cast<double>(best);
    for (std::size_t n = 1; n <= 4; ++n) {
      std::set<Sentence> distinct;
      for (std::size_t i = 0; i + n <= cand.size(); ++i) {
        distinct.insert(Sentence(cand.begin() + static_cast<std::ptrdiff_t>(i),
                                 cand.begin() + static_cast<std::ptrdiff_t>(i + n)));
        den[n - 1] += 1;
      }
      for (const auto& gram : distinct) {
        std::size_t max_ref = 0;
        for (const auto& ref : refs) max_ref = std::max(max_ref, occurrences(ref, gram));
        num[n - 1] += static_cast<double>(std::min(occurrences(cand, gram), max_ref));
      }
    }
  }
  double product = 1.0;
  for (int n = 0; n < 4; ++n) {
    if (num[n] == 0) return 0.0;
    product *= num[n] / den[n];
  }
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::pow(product, 0.25);
}

/// Longest common subsequence by enumerating every subsequence of `a`.
inline std::size_t lcs_enumerated(const Sentence& a, const Sentence& b) {
  std::size_t best = 0;
  const std::size_t masks = std::size_t{1} << a.size();
  for (std::size_t m = 0; m < masks; ++m) {
    Sentence sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (m & (std::size_t{1} << i)) sub.push_back(a[i]);
    }
    std::size_t j = 0;
    for (std::size_t k = 0; k < b.size() && j < sub.size(); ++k) {
      if (b[k] == sub[j]) ++j;
    }
    if (j == sub.size()) best = std::max(best, sub.size());
  }
  return best;
}

inline double rouge_l(const std::vector<std::pair<Sentence, std::vector<Sentence>>>& corpus,
                      double beta = 1.2) {
  double total = 0.0;
  for (const auto& [cand, refs] : corpus) {
    double best = 0.0;
    for (const auto& ref : refs) {
      const double l = static_cast<double>(lcs_enumerated(cand, ref));
      if (l == 0) continue;
      const double p = l / static_cast<double>(cand.size());
      const double r = l / static_cast<double>(ref.size());
      best = std::max(best, (1 + beta * beta) * p * r / (r + beta * beta * p));
    }
    total += best;
  }
  return total / static_cast<double>(corpus.size());
}

// ---------------------------------------------------------------------------
// Random ontologies for property checks.

struct RandomOntology {
  std::string text;
  std::size_t classes = 0;
};

/// A taxonomy over C0..C(n-1) with forward isA edges (plus an occasional
/// back edge when `allow_cycles`), a few disjoint pairs and constraints.
inline RandomOntology random_ontology(std::mt19937& rng, std::size_t max_classes,
                                      bool allow_cycles) {
  std::uniform_int_distribution<std::size_t> size_dist(1, max_classes);
  const std::size_t n = size_dist(rng);
  RandomOntology out;
  out.classes = n;
  std::string& t = out.text;
  for (std::size_t i = 0; i < n; ++i) t += "class C" + std::to_string(i) + "\n";
  t += "relation rel action\nrelation attr attribute\n";

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::set<std::pair<std::size_t, std::size_t>> isa;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    const std::size_t parents = coin(rng) < 0.3 ? 2 : (coin(rng) < 0.9 ? 1 : 0);
    for (std::size_t k = 0; k < parents; ++k) isa.emplace(i, parent(rng));
  }
  if (allow_cycles && n > 2 && coin(rng) < 0.3) {
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    const std::size_t a = any(rng);
    const std::size_t b = any(rng);
    if (a != b) isa.emplace(std::min(a, b), std::max(a, b));
  }
  for (const auto& [a, b] : isa) t += "C" + std::to_string(a) + " isA C" + std::to_string(b) + "\n";

  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  std::set<std::pair<std::size_t, std::size_t>> disjoint;
  const std::size_t pairs = n / 8 + 1;
  for (std::size_t k = 0; k < pairs && n > 1; ++k) {
    std::size_t a = any(rng);
    std::size_t b = any(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (disjoint.emplace(a, b).second) {
      t += "C" + std::to_string(a) + " disjointWith C" + std::to_string(b) + "\n";
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> related;
  for (std::size_t k = 0; k < n / 4 + 1; ++k) {
    const std::size_t a = any(rng);
    const std::size_t b = any(rng);
    if (!related.emplace(a, b).second) continue;
    t += "C" + std::to_string(a) + (coin(rng) < 0.5 ? " rel some C" : " attr min 2 C") +
         std::to_string(b) + "\n";
  }
  return out;
}

}  // namespace oracle
