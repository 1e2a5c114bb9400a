#pragma once

#include <string>
#include <string_view>

namespace semkg::detail {

/// Double-quoted DOT identifier with `"` and `\` escaped.
inline std::string dot_quote(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace semkg::detail
