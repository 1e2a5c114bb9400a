#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "semkg/command_language.hpp"
#include "semkg/ontology.hpp"
#include "semkg/time_interval.hpp"

namespace semkg {

enum class NodeKind { Entity, Unresolved };
enum class EdgeOrigin { Command, Ontology };

std::string_view to_string(EdgeOrigin origin);

struct KGNode {
  std::string name;
  NodeKind kind = NodeKind::Entity;
  TimeInterval first_seen;

  friend bool operator==(const KGNode&, const KGNode&) = default;
};

/// Edge identity: subject, relation, object and restriction.
struct EdgeKey {
  std::string subject;
  std::string relation;
  std::string object;
  std::optional<Restriction> restriction;

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;

  static EdgeKey of(const LogicalConstraint& c) {
    return {c.subject, c.relation, c.object, c.restriction};
  }
};

struct KGEdge {
  EdgeKey key;
  EdgeOrigin origin = EdgeOrigin::Command;
  /// Sorted, pairwise disjoint and non-adjacent.
  std::vector<TimeInterval> observations;

  friend bool operator==(const KGEdge&, const KGEdge&) = default;
};

/// Counts of elements a union created (not merely re-observed).
struct UnionDelta {
  std::size_t nodes = 0;
  std::size_t edges = 0;

  UnionDelta& operator+=(const UnionDelta& o) {
    nodes += o.nodes;
    edges += o.edges;
    return *this;
  }
};

/// Time-attributed labeled directed multigraph that only grows.
///
/// Single writer. Copies are independent snapshots.
class DynamicKnowledgeGraph {
 public:
  /// Adds every token of `command` as a node and every chain edge with
  /// origin Command, recording `command.span` on each.
  UnionDelta union_command(const CommandLanguage& command);

  /// Adds a concept graph with origin Ontology, recording `span`.
  UnionDelta union_concept(const LabeledDirectedGraph& concept_graph, TimeInterval span);

  const std::map<std::string, KGNode>& nodes() const noexcept { return nodes_; }
  const std::map<EdgeKey, KGEdge>& edges() const noexcept { return edges_; }
  std::optional<std::uint64_t> horizon() const noexcept { return horizon_; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const KGNode* find_node(const std::string& name) const;
  const KGEdge* find_edge(const EdgeKey& key) const;

  bool operator==(const DynamicKnowledgeGraph&) const = default;

 private:
  bool touch_node(const std::string& name, NodeKind kind, TimeInterval span);
  bool touch_edge(EdgeKey key, EdgeOrigin origin, TimeInterval span);
  void advance(TimeInterval span);

  std::map<std::string, KGNode> nodes_;
  std::map<EdgeKey, KGEdge> edges_;
  std::optional<std::uint64_t> horizon_;
};

/// Graphviz digraph. Nodes sorted by name, edges by key. Command edges are
/// solid, ontology edges dashed; labels carry relation, restriction and
/// observation intervals.
std::string export_dot(const DynamicKnowledgeGraph& graph, std::string_view name = "dkg");

/// Line-oriented dump for diffing: one `node <name> <entity|unresolved>
/// <first_seen>` line per node, then one `subject relation object origin
/// intervals` line per edge. A restricted relation is written
/// `relation[some]`, `relation[exactly:2]`, ...
std::string export_triples(const DynamicKnowledgeGraph& graph);

std::string edge_label(const EdgeKey& key);
std::string intervals_to_string(const std::vector<TimeInterval>& intervals);

}  // namespace semkg
