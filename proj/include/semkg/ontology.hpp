#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semkg {

enum class ConceptKind { EntityClass, Individual };

enum class RelationCategory { Hierarchical, Action, Attribute };

inline constexpr std::string_view kIsA = "isA";
inline constexpr std::string_view kDisjointWith = "disjointWith";
inline constexpr std::string_view kMemberOf = "memberOf";

/// Quantifier, cardinality or value qualifier on a relation edge.
struct Restriction {
  enum class Form { Some, Only, Exactly, Min, Max, HasValue };

  Form form = Form::Some;
  /// Cardinality for Exactly/Min/Max, zero otherwise.
  std::uint32_t count = 0;

  friend auto operator<=>(const Restriction&, const Restriction&) = default;

  /// Ontology-format spelling: "some", "exactly 2", "value", ...
  std::string to_string() const;
  bool has_count() const noexcept {
    return form == Form::Exactly || form == Form::Min || form == Form::Max;
  }
};

/// subject --relation[restriction]--> object
struct LogicalConstraint {
  std::string subject;
  std::string relation;
  std::string object;
  std::optional<Restriction> restriction;

  friend auto operator<=>(const LogicalConstraint&, const LogicalConstraint&) = default;

  bool is_hierarchical() const noexcept {
    return relation == kIsA || relation == kDisjointWith || relation == kMemberOf;
  }
};

struct Violation {
  enum class Kind { Disjointness, Cycle, Undeclared };

  Kind kind;
  /// Offending class/individual (disjointness), cycle members in order
  /// (cycle), or the names that are missing (undeclared).
  std::vector<std::string> names;
  std::string message;
};

/// Node/edge listing returned by concept queries. Nodes and edges are
/// sorted and unique.
struct LabeledDirectedGraph {
  std::set<std::string> nodes;
  std::vector<LogicalConstraint> edges;

  bool operator==(const LabeledDirectedGraph&) const = default;
};

inline constexpr std::size_t kDefaultQueryDepth = 3;

/// Static taxonomy of classes, individuals and restricted binary relations.
/// Immutable once built; safe for concurrent reads.
class Ontology {
 public:
  Ontology() = default;

  /// Parses the native line format. Throws ParseError (syntax, undeclared
  /// name, duplicate declaration), carrying the 1-based line number.
  static Ontology parse(std::string_view source);
  static Ontology load(const std::string& path);

  const std::map<std::string, ConceptKind>& concepts() const noexcept { return concepts_; }
  const std::map<std::string, RelationCategory>& relations() const noexcept { return relations_; }
  /// Every stored statement, hierarchical ones included, in sorted order.
  const std::vector<LogicalConstraint>& constraints() const noexcept { return constraints_; }

  bool has_concept(std::string_view name) const;
  bool has_relation(std::string_view name) const;
  std::optional<ConceptKind> concept_kind(std::string_view name) const;

  /// Direct isA/memberOf parents.
  const std::set<std::string>& parents(std::string_view name) const;
  /// Reflexive-transitive isA/memberOf closure. Throws LookupError.
  const std::set<std::string>& ancestors(std::string_view name) const;

  /// True iff `ancestor` is reachable from `name` via zero or more isA
  /// (or memberOf) hops. Throws LookupError for undeclared names.
  bool is_subclass(std::string_view name, std::string_view ancestor) const;

  /// Disjoint pairs, stored symmetrically.
  const std::set<std::pair<std::string, std::string>>& disjoint_pairs() const noexcept {
    return disjoint_;
  }

  std::vector<Violation> check_consistency() const;

  /// Word-based close matching of a free-form token to a declared class or
  /// individual. Stages: exact, case-insensitive, word-bag overlap, edit
  /// distance <= 2. The first stage with any candidate wins; ties go to the
  /// alphabetically first name.
  std::optional<std::string> resolve_entity(std::string_view token) const;

  /// Exact, then case-insensitive, match against declared relations.
  std::optional<std::string> resolve_relation(std::string_view token) const;

  /// Concept neighbourhood of `entity`: its isA ancestors up to `depth`
  /// hops, the hierarchical edges among them, and every non-hierarchical
  /// constraint whose subject is one of them. Throws LookupError.
  LabeledDirectedGraph query_concept(std::string_view entity,
                                     std::size_t depth = kDefaultQueryDepth) const;

  /// Entire constraint graph (all names, all statements).
  LabeledDirectedGraph full_graph() const;

 private:
  friend class OntologyBuilder;

  void index();

  std::map<std::string, ConceptKind> concepts_;
  std::map<std::string, RelationCategory> relations_;
  std::vector<LogicalConstraint> constraints_;
  std::map<std::string, std::set<std::string>, std::less<>> parents_;
  std::map<std::string, std::set<std::string>, std::less<>> ancestors_;
  std::set<std::pair<std::string, std::string>> disjoint_;
};

/// Programmatic construction. Every add_* validates names the same way the
/// text loader does and throws ParseError (line 0) on failure.
class OntologyBuilder {
 public:
  OntologyBuilder& add_class(const std::string& name);
  OntologyBuilder& add_individual(const std::string& name, const std::string& member_of);
  OntologyBuilder& add_relation(const std::string& name, RelationCategory category);
  OntologyBuilder& add_is_a(const std::string& sub, const std::string& super);
  OntologyBuilder& add_disjoint(const std::string& a, const std::string& b);
  OntologyBuilder& add_constraint(const std::string& subject, const std::string& relation,
                                  const std::string& object, Restriction restriction);

  Ontology build() &&;

 private:
  friend class Ontology;

  struct Pending {
    LogicalConstraint constraint;
    std::size_t line = 0;
  };

  void declare_concept(const std::string& name, ConceptKind kind, std::size_t line);
  void declare_relation(const std::string& name, RelationCategory category, std::size_t line);
  void add_statement(LogicalConstraint c, std::size_t line);

  Ontology onto_;
  std::vector<Pending> pending_;
};

std::string_view to_string(RelationCategory category);

/// Splits camelCase, digits, underscores and hyphens into lower-case words.
std::vector<std::string> split_words(std::string_view token);

/// Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// DOT rendering of a concept graph; deterministic.
std::string concept_graph_dot(const LabeledDirectedGraph& graph, std::string_view name = "concept");

}  // namespace semkg
