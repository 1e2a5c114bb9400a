#include "semkg/command_language.hpp"

#include <sstream>

#include "semkg/error.hpp"

namespace semkg {

std::vector<std::string> split_tokens(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(std::move(t));
  return out;
}

CommandLanguage parse_command(const std::vector<std::string>& tokens, const Ontology& onto,
                              TimeInterval span, std::size_t max_tokens) {
  using Kind = CommandToken::Kind;
  if (tokens.empty()) throw CommandError(CommandError::Kind::Empty, "empty command");
  if (tokens.size() > max_tokens) {
    throw CommandError(CommandError::Kind::TooLong,
                       "command has " + std::to_string(tokens.size()) + " tokens, limit is " +
                           std::to_string(max_tokens));
  }

  CommandLanguage command;
  command.span = span;
  command.tokens.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& raw = tokens[i];
    const bool entity_slot = i % 2 == 0;
    CommandToken token;
    if (auto rel = onto.resolve_relation(raw)) {
      token = {*rel, Kind::Relation};
    } else if (auto ent = onto.resolve_entity(raw)) {
      token = {*ent, Kind::Entity};
    } else {
      token = {raw, Kind::Unresolved};
    }

    if (entity_slot && token.kind == Kind::Relation) {
      throw CommandError(CommandError::Kind::Alternation,
                         "position " + std::to_string(i + 1) + ": relation '" + token.text +
                             "' in entity slot");
    }
    if (!entity_slot && token.kind == Kind::Entity) {
      throw CommandError(CommandError::Kind::Alternation,
                         "position " + std::to_string(i + 1) + ": entity '" + token.text +
                             "' in relation slot");
    }
    if (!entity_slot && token.kind == Kind::Unresolved) {
      throw CommandError(CommandError::Kind::UnknownRelation,
                         "position " + std::to_string(i + 1) + ": unknown relation '" + raw + "'");
    }
    command.tokens.push_back(std::move(token));
  }
  if (tokens.size() % 2 == 0) {
    throw CommandError(CommandError::Kind::Alternation, "command must end with an entity");
  }
  return command;
}

CommandLanguage parse_command(std::string_view line, const Ontology& onto, TimeInterval span,
                              std::size_t max_tokens) {
  return parse_command(split_tokens(line), onto, span, max_tokens);
}

std::vector<LogicalConstraint> to_edges(const CommandLanguage& command) {
  std::vector<LogicalConstraint> edges;
  const auto& t = command.tokens;
  for (std::size_t i = 1; i + 1 < t.size(); i += 2) {
    edges.push_back({t[i - 1].text, t[i].text, t[i + 1].text, std::nullopt});
  }
  return edges;
}

std::vector<std::string> render(const CommandLanguage& command) {
  std::vector<std::string> out;
  out.reserve(command.tokens.size());
  for (const auto& t : command.tokens) out.push_back(t.text);
  return out;
}

std::string render_line(const CommandLanguage& command) {
  std::string out;
  for (const auto& t : command.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

}  // namespace semkg
