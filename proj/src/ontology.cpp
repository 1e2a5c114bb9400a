#include "semkg/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>

#include "dot_util.hpp"
#include "semkg/error.hpp"

namespace semkg {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Lower-case alphanumerics only.
std::string normalize(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(std::move(t));
  return tokens;
}

std::optional<Restriction::Form> restriction_form(std::string_view word) {
  using F = Restriction::Form;
  if (word == "some") return F::Some;
  if (word == "only") return F::Only;
  if (word == "exactly") return F::Exactly;
  if (word == "min") return F::Min;
  if (word == "max") return F::Max;
  if (word == "value") return F::HasValue;
  return std::nullopt;
}

bool reserved_relation(std::string_view name) {
  return name == kIsA || name == kDisjointWith || name == kMemberOf;
}

[[noreturn]] void syntax(std::size_t line, const std::string& what) {
  throw ParseError(ParseError::Kind::Syntax, line, what);
}

}  // namespace

std::string Restriction::to_string() const {
  switch (form) {
    case Form::Some: return "some";
    case Form::Only: return "only";
    case Form::Exactly: return "exactly " + std::to_string(count);
    case Form::Min: return "min " + std::to_string(count);
    case Form::Max: return "max " + std::to_string(count);
    case Form::HasValue: return "value";
  }
  return {};
}

std::string_view to_string(RelationCategory category) {
  switch (category) {
    case RelationCategory::Hierarchical: return "hierarchical";
    case RelationCategory::Action: return "action";
    case RelationCategory::Attribute: return "attribute";
  }
  return {};
}

std::vector<std::string> split_words(std::string_view token) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(lower(current));
    current.clear();
  };
  for (std::size_t i = 0; i < token.size(); ++i) {
    const auto c = static_cast<unsigned char>(token[i]);
    if (!std::isalnum(c)) {
      flush();
      continue;
    }
    if (!current.empty()) {
      const auto prev = static_cast<unsigned char>(current.back());
      const bool next_lower =
          i + 1 < token.size() && std::islower(static_cast<unsigned char>(token[i + 1]));
      const bool boundary = (std::isupper(c) && std::islower(prev)) ||
                            (std::isupper(c) && std::isupper(prev) && next_lower) ||
                            (std::isdigit(c) != 0) != (std::isdigit(prev) != 0);
      if (boundary) flush();
    }
    current.push_back(static_cast<char>(c));
  }
  flush();
  return words;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// ---------------------------------------------------------------------------
// Builder

void OntologyBuilder::declare_concept(const std::string& name, ConceptKind kind, std::size_t line) {
  if (name.empty()) syntax(line, "empty name");
  if (onto_.concepts_.contains(name) || onto_.relations_.contains(name)) {
    throw ParseError(ParseError::Kind::Duplicate, line, "duplicate declaration of '" + name + "'");
  }
  // Command tokens match relations case-insensitively before entities.
  for (const auto& [rel, category] : onto_.relations_) {
    if (lower(rel) == lower(name)) {
      throw ParseError(ParseError::Kind::Duplicate, line,
                       "'" + name + "' clashes with relation '" + rel + "'");
    }
  }
  onto_.concepts_.emplace(name, kind);
}

void OntologyBuilder::declare_relation(const std::string& name, RelationCategory category,
                                       std::size_t line) {
  if (reserved_relation(name)) syntax(line, "'" + name + "' is a reserved relation");
  if (onto_.concepts_.contains(name) || onto_.relations_.contains(name)) {
    throw ParseError(ParseError::Kind::Duplicate, line, "duplicate declaration of '" + name + "'");
  }
  for (const auto& [concept_name, kind] : onto_.concepts_) {
    if (lower(concept_name) == lower(name)) {
      throw ParseError(ParseError::Kind::Duplicate, line,
                       "'" + name + "' clashes with concept '" + concept_name + "'");
    }
  }
  onto_.relations_.emplace(name, category);
}

void OntologyBuilder::add_statement(LogicalConstraint c, std::size_t line) {
  pending_.push_back({std::move(c), line});
}

OntologyBuilder& OntologyBuilder::add_class(const std::string& name) {
  declare_concept(name, ConceptKind::EntityClass, 0);
  return *this;
}

OntologyBuilder& OntologyBuilder::add_individual(const std::string& name,
                                                 const std::string& member_of) {
  declare_concept(name, ConceptKind::Individual, 0);
  add_statement({name, std::string(kMemberOf), member_of, std::nullopt}, 0);
  return *this;
}

OntologyBuilder& OntologyBuilder::add_relation(const std::string& name, RelationCategory category) {
  if (category == RelationCategory::Hierarchical) {
    syntax(0, "hierarchical relations are built in");
  }
  declare_relation(name, category, 0);
  return *this;
}

OntologyBuilder& OntologyBuilder::add_is_a(const std::string& sub, const std::string& super) {
  add_statement({sub, std::string(kIsA), super, std::nullopt}, 0);
  return *this;
}

OntologyBuilder& OntologyBuilder::add_disjoint(const std::string& a, const std::string& b) {
  add_statement({a, std::string(kDisjointWith), b, std::nullopt}, 0);
  return *this;
}

OntologyBuilder& OntologyBuilder::add_constraint(const std::string& subject,
                                                 const std::string& relation,
                                                 const std::string& object,
                                                 Restriction restriction) {
  add_statement({subject, relation, object, restriction}, 0);
  return *this;
}

Ontology OntologyBuilder::build() && {
  auto undeclared = [](std::size_t line, const std::string& what) {
    throw ParseError(ParseError::Kind::Undeclared, line, what);
  };

  std::set<LogicalConstraint> seen;
  for (auto& [c, line] : pending_) {
    if (!onto_.concepts_.contains(c.subject)) undeclared(line, "undeclared name '" + c.subject + "'");
    if (!onto_.concepts_.contains(c.object)) undeclared(line, "undeclared name '" + c.object + "'");

    if (c.is_hierarchical()) {
      if (c.restriction) syntax(line, "hierarchical statements take no restriction");
      if (c.relation == kMemberOf &&
          onto_.concepts_.at(c.object) != ConceptKind::EntityClass) {
        syntax(line, "memberOf target '" + c.object + "' is not a class");
      }
    } else {
      if (!onto_.relations_.contains(c.relation)) {
        undeclared(line, "undeclared relation '" + c.relation + "'");
      }
      if (!c.restriction) syntax(line, "relation statement needs a restriction");
      if (c.restriction->form == Restriction::Form::HasValue &&
          onto_.concepts_.at(c.object) != ConceptKind::Individual) {
        syntax(line, "value restriction target '" + c.object + "' is not an individual");
      }
      if (!c.restriction->has_count()) c.restriction->count = 0;
    }

    LogicalConstraint key = c;
    if (c.relation == kDisjointWith && key.object < key.subject) std::swap(key.subject, key.object);
    if (!seen.insert(key).second) {
      throw ParseError(ParseError::Kind::Duplicate, line, "duplicate statement");
    }
    onto_.constraints_.push_back(c);
  }
  pending_.clear();
  onto_.index();
  return std::move(onto_);
}

// ---------------------------------------------------------------------------
// Ontology

Ontology Ontology::parse(std::string_view source) {
  OntologyBuilder builder;
  std::istringstream in{std::string(source)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto t = tokenize(raw);
    if (t.empty()) continue;

    if (t[0] == "class") {
      if (t.size() != 2) syntax(line_no, "expected 'class <Name>'");
      builder.declare_concept(t[1], ConceptKind::EntityClass, line_no);
    } else if (t[0] == "individual") {
      if (t.size() != 4 || t[2] != kMemberOf) {
        syntax(line_no, "expected 'individual <Name> memberOf <Class>'");
      }
      builder.declare_concept(t[1], ConceptKind::Individual, line_no);
      builder.add_statement({t[1], std::string(kMemberOf), t[3], std::nullopt}, line_no);
    } else if (t[0] == "relation") {
      if (t.size() != 3) syntax(line_no, "expected 'relation <Name> <action|attribute>'");
      RelationCategory category;
      if (t[2] == "action") {
        category = RelationCategory::Action;
      } else if (t[2] == "attribute") {
        category = RelationCategory::Attribute;
      } else {
        syntax(line_no, "relation category must be 'action' or 'attribute'");
      }
      builder.declare_relation(t[1], category, line_no);
    } else if (t.size() == 3 && (t[1] == kIsA || t[1] == kDisjointWith)) {
      builder.add_statement({t[0], t[1], t[2], std::nullopt}, line_no);
    } else if (t.size() >= 4) {
      const auto form = restriction_form(t[2]);
      if (!form) syntax(line_no, "unknown restriction '" + t[2] + "'");
      Restriction r{*form, 0};
      std::size_t object_at = 3;
      if (r.has_count()) {
        if (t.size() != 5) syntax(line_no, "expected '<Subj> <rel> " + t[2] + " <n> <Obj>'");
        const std::string& n = t[3];
        if (n.empty() || n.size() > 9 ||
            !std::all_of(n.begin(), n.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
          syntax(line_no, "cardinality must be a non-negative integer, got '" + n + "'");
        }
        r.count = static_cast<std::uint32_t>(std::stoul(n));
        object_at = 4;
      } else if (t.size() != 4) {
        syntax(line_no, "expected '<Subj> <rel> " + t[2] + " <Obj>'");
      }
      if (reserved_relation(t[1])) syntax(line_no, "'" + t[1] + "' takes no restriction");
      builder.add_statement({t[0], t[1], t[object_at], r}, line_no);
    } else {
      syntax(line_no, "unrecognised statement");
    }
  }
  return std::move(builder).build();
}

Ontology Ontology::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ontology: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void Ontology::index() {
  std::sort(constraints_.begin(), constraints_.end());
  parents_.clear();
  ancestors_.clear();
  disjoint_.clear();
  for (const auto& [name, kind] : concepts_) parents_[name];
  for (const auto& c : constraints_) {
    if (c.relation == kIsA || c.relation == kMemberOf) {
      parents_[c.subject].insert(c.object);
    } else if (c.relation == kDisjointWith) {
      disjoint_.emplace(c.subject, c.object);
      disjoint_.emplace(c.object, c.subject);
    }
  }
  for (const auto& [name, direct] : parents_) {
    auto& closure = ancestors_[name];
    std::deque<std::string> frontier{name};
    closure.insert(name);
    while (!frontier.empty()) {
      const std::string current = std::move(frontier.front());
      frontier.pop_front();
      for (const auto& p : parents_.at(current)) {
        if (closure.insert(p).second) frontier.push_back(p);
      }
    }
  }
}

bool Ontology::has_concept(std::string_view name) const {
  return concepts_.find(std::string(name)) != concepts_.end();
}

bool Ontology::has_relation(std::string_view name) const {
  return relations_.find(std::string(name)) != relations_.end();
}

std::optional<ConceptKind> Ontology::concept_kind(std::string_view name) const {
  auto it = concepts_.find(std::string(name));
  if (it == concepts_.end()) return std::nullopt;
  return it->second;
}

const std::set<std::string>& Ontology::parents(std::string_view name) const {
  auto it = parents_.find(name);
  if (it == parents_.end()) throw LookupError("undeclared concept '" + std::string(name) + "'");
  return it->second;
}

const std::set<std::string>& Ontology::ancestors(std::string_view name) const {
  auto it = ancestors_.find(name);
  if (it == ancestors_.end()) throw LookupError("undeclared concept '" + std::string(name) + "'");
  return it->second;
}

bool Ontology::is_subclass(std::string_view name, std::string_view ancestor) const {
  if (!has_concept(ancestor)) {
    throw LookupError("undeclared concept '" + std::string(ancestor) + "'");
  }
  return ancestors(name).contains(std::string(ancestor));
}

std::vector<Violation> Ontology::check_consistency() const {
  std::vector<Violation> out;

  for (const auto& [name, closure] : ancestors_) {
    for (const auto& [a, b] : disjoint_) {
      if (!(a < b) && a != b) continue;
      if (closure.contains(a) && closure.contains(b)) {
        out.push_back({Violation::Kind::Disjointness,
                       {name, a, b},
                       "'" + name + "' is subsumed by disjoint classes '" + a + "' and '" + b + "'"});
      }
    }
  }

  // Strongly connected components read straight off the closure.
  std::set<std::string> placed;
  for (const auto& [name, closure] : ancestors_) {
    if (placed.contains(name)) continue;
    std::vector<std::string> component;
    for (const auto& other : closure) {
      if (ancestors_.at(other).contains(name)) component.push_back(other);
    }
    const bool self_loop = parents_.at(name).contains(name);
    if (component.size() > 1 || self_loop) {
      std::string members;
      for (const auto& m : component) {
        placed.insert(m);
        members += (members.empty() ? "" : " -> ") + m;
      }
      out.push_back({Violation::Kind::Cycle, component, "isA cycle among " + members});
    }
  }

  for (const auto& c : constraints_) {
    std::vector<std::string> missing;
    if (!concepts_.contains(c.subject)) missing.push_back(c.subject);
    if (!concepts_.contains(c.object)) missing.push_back(c.object);
    if (!c.is_hierarchical() && !relations_.contains(c.relation)) missing.push_back(c.relation);
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      out.push_back({Violation::Kind::Undeclared, missing,
                     "constraint " + c.subject + " " + c.relation + " " + c.object +
                         " references undeclared " + list});
    }
  }
  return out;
}

std::optional<std::string> Ontology::resolve_entity(std::string_view token) const {
  if (token.empty()) return std::nullopt;
  if (has_concept(token)) return std::string(token);

  const std::string folded = lower(token);
  for (const auto& [name, kind] : concepts_) {
    if (lower(name) == folded) return name;
  }

  const auto token_words = split_words(token);
  const std::set<std::string> token_bag(token_words.begin(), token_words.end());
  if (!token_bag.empty()) {
    const std::string* best = nullptr;
    double best_score = 0.0;
    for (const auto& [name, kind] : concepts_) {
      const auto words = split_words(name);
      const std::set<std::string> bag(words.begin(), words.end());
      std::size_t shared = 0;
      for (const auto& w : bag) shared += token_bag.count(w);
      const std::size_t united = bag.size() + token_bag.size() - shared;
      if (shared == 0 || united == 0) continue;
      const double score = static_cast<double>(shared) / static_cast<double>(united);
      if (score >= 0.5 && score > best_score) {
        best_score = score;
        best = &name;
      }
    }
    if (best) return *best;
  }

  const std::string norm = normalize(token);
  if (norm.empty()) return std::nullopt;
  const std::string* best = nullptr;
  std::size_t best_distance = 3;
  for (const auto& [name, kind] : concepts_) {
    const std::size_t d = edit_distance(norm, normalize(name));
    if (d < best_distance) {
      best_distance = d;
      best = &name;
    }
  }
  if (best) return *best;
  return std::nullopt;
}

std::optional<std::string> Ontology::resolve_relation(std::string_view token) const {
  if (has_relation(token)) return std::string(token);
  const std::string folded = lower(token);
  for (const auto& [name, category] : relations_) {
    if (lower(name) == folded) return name;
  }
  return std::nullopt;
}

LabeledDirectedGraph Ontology::query_concept(std::string_view entity, std::size_t depth) const {
  if (!has_concept(entity)) throw LookupError("undeclared concept '" + std::string(entity) + "'");

  // Breadth-first walk up the taxonomy, bounded by `depth` hops.
  std::set<std::string> collected{std::string(entity)};
  std::vector<std::string> level{std::string(entity)};
  for (std::size_t hop = 0; hop < depth && !level.empty(); ++hop) {
    std::vector<std::string> next;
    for (const auto& name : level) {
      for (const auto& p : parents_.at(name)) {
        if (collected.insert(p).second) next.push_back(p);
      }
    }
    level = std::move(next);
  }

  LabeledDirectedGraph g;
  g.nodes = collected;
  for (const auto& c : constraints_) {
    if (!collected.contains(c.subject)) continue;
    if (c.relation == kIsA || c.relation == kMemberOf) {
      if (collected.contains(c.object)) g.edges.push_back(c);
    } else if (!c.is_hierarchical()) {
      g.nodes.insert(c.object);
      g.edges.push_back(c);
    }
  }
  // constraints_ is sorted, so g.edges already is.
  return g;
}

LabeledDirectedGraph Ontology::full_graph() const {
  LabeledDirectedGraph g;
  for (const auto& [name, kind] : concepts_) g.nodes.insert(name);
  g.edges = constraints_;
  return g;
}

std::string concept_graph_dot(const LabeledDirectedGraph& graph, std::string_view name) {
  using detail::dot_quote;
  std::ostringstream out;
  out << "digraph " << dot_quote(name) << " {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=box];\n";
  for (const auto& n : graph.nodes) out << "  " << dot_quote(n) << ";\n";
  for (const auto& e : graph.edges) {
    std::string label = e.relation;
    if (e.restriction) label += " " + e.restriction->to_string();
    out << "  " << dot_quote(e.subject) << " -> " << dot_quote(e.object)
        << " [label=" << dot_quote(label);
    if (e.is_hierarchical()) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace semkg
