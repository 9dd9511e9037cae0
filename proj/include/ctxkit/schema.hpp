#pragma once

// PR-prism anaphora schema: for a noun pair (O1, O2) and modifiers
// (X1, X2, X3) the three masked sentences are
//
//   There is an O1 and an O2. The [MASK] is X1 and the same one is X2.
//   There is an O1 and an O2. The [MASK] is X2 and the same one is X3.
//   There is an O1 and an O2. The [MASK] is X3 and the other one is X1.
//
// Verbs use "is being" in both clauses. Each lexicon entry with n modifiers
// yields C(n,3) triples x 6 orderings x 2 noun orders instances.

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ctxkit {

inline constexpr std::string_view kMaskToken = "[MASK]";

enum class Category { Adjective, Verb, Preposition };

std::string_view to_string(Category category) noexcept;
/// Throws InvalidLexicon for unknown names.
Category category_from_string(std::string_view name);

enum class ArticleMode {
  Grammatical,  // "a" / "an" by the noun's first letter
  PaperExact,   // always "an", e.g. "an strawberry"
};

/// Throws InvalidLexicon for names other than "grammatical" / "paper-exact".
ArticleMode article_mode_from_string(std::string_view name);

struct LexiconEntry {
  std::array<std::string, 2> nouns;
  Category category = Category::Adjective;
  std::vector<std::string> modifiers;
};

struct Lexicon {
  std::vector<LexiconEntry> entries;
};

/// Throws TooFewModifiers (< 3) or InvalidLexicon (empty string, a string
/// containing the mask token, or a repeated modifier).
void validate_lexicon(const Lexicon& lexicon);

Lexicon lexicon_from_json(const nlohmann::json& doc);
nlohmann::ordered_json lexicon_to_json(const Lexicon& lexicon);
Lexicon read_lexicon_file(const std::filesystem::path& path);

/// The shipped noun pairs and modifier lists:
/// 11 adjective, 2 verb and 2 prepositional entries.
Lexicon ship_paper_lexicon();

struct SchemaInstance {
  std::array<std::string, 2> nouns;
  std::array<std::string, 3> modifiers;
  Category category = Category::Adjective;
  std::array<std::string, 3> sentences;
  std::string instance_id;
};

/// category:noun1:noun2:x1:x2:x3, lowercased, spaces replaced by '_'.
std::string make_instance_id(Category category, const std::array<std::string, 2>& nouns,
                             const std::array<std::string, 3>& modifiers);

std::array<std::string, 3> render_sentences(const std::array<std::string, 2>& nouns,
                                            const std::array<std::string, 3>& modifiers, Category category,
                                            ArticleMode mode = ArticleMode::Grammatical);

/// C(n,3) * 12 for an entry with n modifiers.
std::size_t instance_count(const LexiconEntry& entry);

/// Calls `sink` once per instance, in deterministic order: entries in
/// lexicon order, then modifier triples lexicographically by index, then
/// the 6 orderings of the triple, then the listed and swapped noun order.
void for_each_instance(const Lexicon& lexicon, ArticleMode mode,
                       const std::function<void(const SchemaInstance&)>& sink);

std::vector<SchemaInstance> enumerate_instances(const Lexicon& lexicon, ArticleMode mode = ArticleMode::Grammatical);

/// Masked-sentence JSON-lines record.
nlohmann::ordered_json instance_to_json(const SchemaInstance& instance);
SchemaInstance instance_from_json(const nlohmann::json& doc);

}  // namespace ctxkit
