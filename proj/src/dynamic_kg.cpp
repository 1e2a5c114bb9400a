#include "semkg/dynamic_kg.hpp"

#include <algorithm>
#include <sstream>

#include "dot_util.hpp"

namespace semkg {

std::string_view to_string(EdgeOrigin origin) {
  return origin == EdgeOrigin::Command ? "command" : "ontology";
}

bool DynamicKnowledgeGraph::touch_node(const std::string& name, NodeKind kind, TimeInterval span) {
  auto [it, inserted] = nodes_.try_emplace(name, KGNode{name, kind, span});
  if (!inserted && it->second.kind == NodeKind::Unresolved && kind == NodeKind::Entity) {
    it->second.kind = NodeKind::Entity;
  }
  return inserted;
}

bool DynamicKnowledgeGraph::touch_edge(EdgeKey key, EdgeOrigin origin, TimeInterval span) {
  auto it = edges_.find(key);
  if (it != edges_.end()) {
    merge_interval(it->second.observations, span);
    return false;
  }
  KGEdge edge{key, origin, {span}};
  edges_.emplace(std::move(key), std::move(edge));
  return true;
}

void DynamicKnowledgeGraph::advance(TimeInterval span) {
  horizon_ = std::max(horizon_.value_or(span.end), span.end);
}

UnionDelta DynamicKnowledgeGraph::union_command(const CommandLanguage& command) {
  UnionDelta delta;
  for (const auto& token : command.tokens) {
    if (token.kind == CommandToken::Kind::Relation) continue;
    const NodeKind kind =
        token.kind == CommandToken::Kind::Entity ? NodeKind::Entity : NodeKind::Unresolved;
    delta.nodes += touch_node(token.text, kind, command.span);
  }
  for (const auto& c : to_edges(command)) {
    delta.edges += touch_edge(EdgeKey::of(c), EdgeOrigin::Command, command.span);
  }
  advance(command.span);
  return delta;
}

UnionDelta DynamicKnowledgeGraph::union_concept(const LabeledDirectedGraph& concept_graph,
                                                TimeInterval span) {
  UnionDelta delta;
  for (const auto& name : concept_graph.nodes) delta.nodes += touch_node(name, NodeKind::Entity, span);
  for (const auto& c : concept_graph.edges) {
    // Endpoints of a well-formed concept graph are already nodes.
    delta.nodes += touch_node(c.subject, NodeKind::Entity, span);
    delta.nodes += touch_node(c.object, NodeKind::Entity, span);
    delta.edges += touch_edge(EdgeKey::of(c), EdgeOrigin::Ontology, span);
  }
  advance(span);
  return delta;
}

const KGNode* DynamicKnowledgeGraph::find_node(const std::string& name) const {
  auto it = nodes_.find(name);
  return it == nodes_.end() ? nullptr : &it->second;
}

const KGEdge* DynamicKnowledgeGraph::find_edge(const EdgeKey& key) const {
  auto it = edges_.find(key);
  return it == edges_.end() ? nullptr : &it->second;
}

std::string edge_label(const EdgeKey& key) {
  std::string label = key.relation;
  if (key.restriction) label += " " + key.restriction->to_string();
  return label;
}

std::string intervals_to_string(const std::vector<TimeInterval>& intervals) {
  std::string out;
  for (const auto& iv : intervals) {
    if (!out.empty()) out.push_back(',');
    out += to_string(iv);
  }
  return out;
}

std::string export_dot(const DynamicKnowledgeGraph& graph, std::string_view name) {
  using detail::dot_quote;
  std::ostringstream out;
  out << "digraph " << dot_quote(name) << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  out << "  edge [fontname=\"Helvetica\"];\n";
  for (const auto& [n, node] : graph.nodes()) {
    out << "  " << dot_quote(n);
    if (node.kind == NodeKind::Unresolved) out << " [style=dashed, color=red]";
    out << ";\n";
  }
  for (const auto& [key, edge] : graph.edges()) {
    out << "  " << dot_quote(key.subject) << " -> " << dot_quote(key.object)
        << " [label=" << dot_quote(edge_label(key) + " " + intervals_to_string(edge.observations));
    if (edge.origin == EdgeOrigin::Command) {
      out << ", style=solid, color=black";
    } else {
      out << ", style=dashed, color=gray40";
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_triples(const DynamicKnowledgeGraph& graph) {
  std::ostringstream out;
  for (const auto& [n, node] : graph.nodes()) {
    out << "node " << n << ' ' << (node.kind == NodeKind::Entity ? "entity" : "unresolved") << ' '
        << to_string(node.first_seen) << '\n';
  }
  for (const auto& [key, edge] : graph.edges()) {
    std::string relation = key.relation;
    if (key.restriction) {
      std::string r = key.restriction->to_string();
      std::replace(r.begin(), r.end(), ' ', ':');
      relation += "[" + r + "]";
    }
    out << key.subject << ' ' << relation << ' ' << key.object << ' ' << to_string(edge.origin)
        << ' ' << intervals_to_string(edge.observations) << '\n';
  }
  return out.str();
}

}  // namespace semkg
