// Shared glue for the unit and acceptance tests.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "semkg/dynamic_kg.hpp"
#include "semkg/pipeline.hpp"

namespace support {

inline std::string data_path(const std::string& rel) { return std::string(SEMKG_DATA_DIR) + "/" + rel; }
inline std::string fixture_path(const std::string& rel) {
  return std::string(SEMKG_FIXTURE_DIR) + "/" + rel;
}

/// Captions clip k with script[k]; clips past the end get the last entry.
class ScriptedCaptioner final : public semkg::Captioner {
 public:
  explicit ScriptedCaptioner(std::vector<std::vector<std::string>> script) : script_(std::move(script)) {}

  semkg::CaptionResult caption(const semkg::Clip&) override {
    const auto& tokens = script_[std::min(calls_++, script_.size() - 1)];
    return {tokens, std::nullopt};
  }

  std::size_t calls() const { return calls_; }

 private:
  std::vector<std::vector<std::string>> script_;
  std::size_t calls_ = 0;
};

/// Flattens a graph into the oracle's set representation.
inline oracle::NaiveGraph to_naive(const semkg::DynamicKnowledgeGraph& g) {
  oracle::NaiveGraph out;
  for (const auto& [name, node] : g.nodes()) out.nodes[name];
  for (const auto& [key, edge] : g.edges()) {
    const std::string r = key.restriction ? key.restriction->to_string() : "";
    auto& frames = out.edges[{key.subject, key.relation, key.object, r,
                              std::string(semkg::to_string(edge.origin))}];
    for (const auto& iv : edge.observations) oracle::cover(frames, iv.start, iv.end);
  }
  return out;
}

/// Same node names, same edges with the same covered frames, and every
/// node first seen where the oracle first covers it.
inline bool same_graph(const semkg::DynamicKnowledgeGraph& g, const oracle::NaiveGraph& naive) {
  const auto flat = to_naive(g);
  if (flat.edges != naive.edges || flat.nodes.size() != naive.nodes.size()) return false;
  for (const auto& [name, frames] : naive.nodes) {
    const auto* node = g.find_node(name);
    if (node == nullptr || frames.empty() || node->first_seen.start != *frames.begin()) return false;
  }
  return true;
}

}  // namespace support
