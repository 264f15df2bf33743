#include "forensica/grammar.hpp"

#include <cctype>

#include "forensica/error.hpp"
#include "json.hpp"

namespace forensica {

namespace {

bool is_marker_start(char c) { return c >= 'A' && c <= 'Z'; }
bool is_marker_char(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_'; }

// Length of a marker starting at text[pos] == '@', or 0 when it is not one.
std::size_t marker_length(std::string_view text, std::size_t pos) {
  if (pos + 2 >= text.size() || text[pos] != '@') return 0;
  std::size_t i = pos + 1;
  if (i >= text.size() || !is_marker_start(text[i])) return 0;
  while (i < text.size() && is_marker_char(text[i])) ++i;
  if (i < text.size() && text[i] == '@') return i - pos + 1;
  return 0;
}

struct SymbolRef {
  std::string name;
  std::vector<std::string> modifiers;
};

SymbolRef parse_ref(std::string_view inner) {
  SymbolRef ref;
  std::size_t start = 0;
  bool first = true;
  for (std::size_t i = 0; i <= inner.size(); ++i) {
    if (i == inner.size() || inner[i] == '.') {
      std::string part(inner.substr(start, i - start));
      if (first) {
        ref.name = std::move(part);
        first = false;
      } else {
        ref.modifiers.push_back(std::move(part));
      }
      start = i + 1;
    }
  }
  return ref;
}

// Calls `on_ref` for every #...# reference in `text`.
template <typename F>
void for_each_ref(std::string_view text, F&& on_ref) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size()) {
      ++i;
      continue;
    }
    if (text[i] != '#') continue;
    const std::size_t close = text.find('#', i + 1);
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::MissingRule, "unterminated #symbol# in '" + std::string(text) + "'");
    }
    on_ref(parse_ref(text.substr(i + 1, close - i - 1)));
    i = close;
  }
}

bool is_vowel(char c) {
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

}  // namespace

Grammar::Grammar(std::map<std::string, std::vector<std::string>> rules) : rules_(std::move(rules)) {}

Grammar Grammar::from_json_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("grammar is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Parse, "grammar must be a JSON object");
  std::map<std::string, std::vector<std::string>> rules;
  for (const auto& [symbol, alts] : j.items()) {
    if (!alts.is_array() || alts.empty()) {
      throw Error(ErrorKind::Parse, "grammar rule '" + symbol + "' must be a non-empty array");
    }
    auto& out = rules[symbol];
    for (const auto& a : alts) {
      if (!a.is_string()) throw Error(ErrorKind::Parse, "grammar rule '" + symbol + "' holds a non-string");
      out.push_back(a.get<std::string>());
    }
  }
  Grammar g(std::move(rules));
  g.validate();
  return g;
}

void Grammar::merge(const Grammar& other) {
  for (const auto& [k, v] : other.rules_) rules_[k] = v;
}

void Grammar::validate() const {
  for (const auto& [symbol, alts] : rules_) {
    for (const auto& alt : alts) {
      for_each_ref(alt, [&](const SymbolRef& ref) {
        if (!has(ref.name)) {
          throw Error(ErrorKind::MissingRule,
                      "rule '" + symbol + "' references unknown symbol '" + ref.name + "'");
        }
      });
    }
  }
}

std::string Grammar::expand(std::string_view start_symbol, RandomStream& stream) const {
  return expand_symbol(start_symbol, stream, 0);
}

std::string Grammar::expand_symbol(std::string_view symbol, RandomStream& stream, int depth) const {
  if (depth >= kMaxDepth) {
    throw Error(ErrorKind::Recursion, "grammar expansion exceeded depth " + std::to_string(kMaxDepth) +
                                          " at symbol '" + std::string(symbol) + "'");
  }
  auto it = rules_.find(std::string(symbol));
  if (it == rules_.end()) {
    throw Error(ErrorKind::MissingRule, "unknown grammar symbol '" + std::string(symbol) + "'");
  }
  const auto& alts = it->second;
  return expand_text(alts[stream.index(alts.size())], stream, depth + 1);
}

std::string Grammar::expand_text(std::string_view text, RandomStream& stream, int depth) const {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\\' && i + 1 < text.size() && text[i + 1] == '#') {
      out.push_back('#');
      ++i;
      continue;
    }
    if (c != '#') {
      out.push_back(c);
      continue;
    }
    const std::size_t close = text.find('#', i + 1);
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::MissingRule, "unterminated #symbol# in '" + std::string(text) + "'");
    }
    const SymbolRef ref = parse_ref(text.substr(i + 1, close - i - 1));
    std::string piece = expand_symbol(ref.name, stream, depth);
    for (const auto& m : ref.modifiers) piece = apply_modifier(piece, m);
    out += piece;
    i = close;
  }
  return out;
}

std::string apply_modifier(std::string_view text, std::string_view modifier) {
  std::string s(text);
  if (s.empty()) return s;
  if (modifier == "capitalize") {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  } else if (modifier == "upper") {
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  } else if (modifier == "a") {
    s = (is_vowel(s[0]) ? "an " : "a ") + s;
  } else if (modifier == "s") {
    const char last = s.back();
    const auto ends = [&](std::string_view suffix) {
      return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (last == 's' || last == 'x' || ends("ch") || ends("sh")) {
      s += "es";
    } else if (last == 'y' && s.size() > 1 && !is_vowel(s[s.size() - 2])) {
      s.back() = 'i';
      s += "es";
    } else {
      s += "s";
    }
  } else {
    throw Error(ErrorKind::MissingRule, "unknown grammar modifier '" + std::string(modifier) + "'");
  }
  return s;
}

void DynamicContext::bind(std::string name, std::string value) {
  if (!find_markers(value).empty()) {
    throw Error(ErrorKind::Integrity, "binding for @" + name + "@ contains a marker");
  }
  bindings_[std::move(name)] = std::move(value);
}

bool DynamicContext::has(std::string_view name) const { return bindings_.find(name) != bindings_.end(); }

const std::string& DynamicContext::get(std::string_view name) const {
  auto it = bindings_.find(name);
  if (it == bindings_.end()) {
    throw Error(ErrorKind::MissingBinding, "no binding for marker @" + std::string(name) + "@");
  }
  return it->second;
}

DynamicContext DynamicContext::with(const std::map<std::string, std::string>& extra) const {
  DynamicContext out = *this;
  for (const auto& [k, v] : extra) out.bind(k, v);
  return out;
}

std::vector<std::string> find_markers(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (const std::size_t len = marker_length(text, i)) {
      out.emplace_back(text.substr(i + 1, len - 2));
      i += len - 1;
    }
  }
  return out;
}

std::string substitute(std::string_view text, const DynamicContext& context) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (const std::size_t len = marker_length(text, i)) {
      out += context.get(text.substr(i + 1, len - 2));
      i += len - 1;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

}  // namespace forensica
