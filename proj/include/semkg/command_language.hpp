#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "semkg/ontology.hpp"
#include "semkg/time_interval.hpp"

namespace semkg {

/// Longest accepted command, in tokens.
inline constexpr std::size_t kMaxCommandTokens = 15;

struct CommandToken {
  enum class Kind { Entity, Relation, Unresolved };

  /// Canonical vocabulary name once resolved; the raw text otherwise.
  std::string text;
  Kind kind = Kind::Unresolved;

  friend bool operator==(const CommandToken&, const CommandToken&) = default;
};

/// Alternating entity/relation chain `e1 a1 e2 ... an e(n+1)` observed over
/// `span`. Entity slots may hold unresolved tokens.
struct CommandLanguage {
  std::vector<CommandToken> tokens;
  TimeInterval span;

  friend bool operator==(const CommandLanguage&, const CommandLanguage&) = default;

  std::size_t relation_count() const noexcept { return tokens.size() / 2; }
};

/// Classifies and validates `tokens`. Each token is first looked up among
/// the declared relations (exact, then case-insensitive); otherwise it is
/// resolved against classes and individuals by close matching.
///
/// Throws CommandError for an empty command, more than `max_tokens`
/// tokens, an even-length chain, a relation in an entity slot or an entity
/// in a relation slot, and for relation slots holding unknown words.
CommandLanguage parse_command(const std::vector<std::string>& tokens, const Ontology& onto,
                              TimeInterval span, std::size_t max_tokens = kMaxCommandTokens);

/// Whitespace-delimited convenience overload.
CommandLanguage parse_command(std::string_view line, const Ontology& onto, TimeInterval span,
                              std::size_t max_tokens = kMaxCommandTokens);

/// Sequential composition (e1,a1,e2), (e2,a2,e3), ... with no restriction.
std::vector<LogicalConstraint> to_edges(const CommandLanguage& command);

std::vector<std::string> render(const CommandLanguage& command);

std::string render_line(const CommandLanguage& command);

/// Splits on ASCII whitespace.
std::vector<std::string> split_tokens(std::string_view line);

}  // namespace semkg
