#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "forensica/rng.hpp"

namespace forensica {

// Expansion grammar. Alternatives may contain:
//   #symbol#             expand `symbol`
//   #symbol.mod1.mod2#   expand then apply modifiers (capitalize, s, a, upper)
//   @NAME@               dynamic marker, copied through untouched
//   \#                   a literal '#'
// docs/grammar.md describes the format byte-for-byte.
class Grammar {
 public:
  static constexpr int kMaxDepth = 64;

  Grammar() = default;
  explicit Grammar(std::map<std::string, std::vector<std::string>> rules);

  // JSON object: symbol -> array of strings. Validates references.
  static Grammar from_json_text(std::string_view text);

  // Later rules with the same symbol replace earlier ones.
  void merge(const Grammar& other);

  // Throws Error(MissingRule) naming the first dangling #symbol#.
  void validate() const;

  bool has(std::string_view symbol) const { return rules_.find(std::string(symbol)) != rules_.end(); }
  const std::map<std::string, std::vector<std::string>>& rules() const { return rules_; }

  // Each #symbol# consumes one uniform_int draw to pick its alternative.
  std::string expand(std::string_view start_symbol, RandomStream& stream) const;

 private:
  std::string expand_symbol(std::string_view symbol, RandomStream& stream, int depth) const;
  std::string expand_text(std::string_view text, RandomStream& stream, int depth) const;

  std::map<std::string, std::vector<std::string>> rules_;
};

std::string apply_modifier(std::string_view text, std::string_view modifier);

// Second-layer bindings shared by every description in one world.
class DynamicContext {
 public:
  // Values must not themselves contain markers; that keeps substitution
  // idempotent. Throws Error(Integrity) otherwise.
  void bind(std::string name, std::string value);
  bool has(std::string_view name) const;
  const std::string& get(std::string_view name) const;
  const std::map<std::string, std::string, std::less<>>& bindings() const { return bindings_; }

  // Returns a copy with `extra` layered over this context.
  DynamicContext with(const std::map<std::string, std::string>& extra) const;

  friend bool operator==(const DynamicContext&, const DynamicContext&) = default;

 private:
  std::map<std::string, std::string, std::less<>> bindings_;
};

// Replaces every @NAME@ (NAME = [A-Z][A-Z0-9_]*). Throws Error(MissingBinding).
std::string substitute(std::string_view text, const DynamicContext& context);

// Marker names in order of appearance.
std::vector<std::string> find_markers(std::string_view text);

}  // namespace forensica
