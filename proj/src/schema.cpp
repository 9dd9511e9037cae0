#include "ctxkit/schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <fmt/format.h>

#include "ctxkit/atomic_file.hpp"
#include "ctxkit/error.hpp"

namespace ctxkit {

using nlohmann::json;

std::string_view to_string(Category category) noexcept {
  switch (category) {
    case Category::Adjective: return "adjective";
    case Category::Verb: return "verb";
    case Category::Preposition: return "preposition";
  }
  return "adjective";
}

Category category_from_string(std::string_view name) {
  if (name == "adjective") return Category::Adjective;
  if (name == "verb") return Category::Verb;
  if (name == "preposition") return Category::Preposition;
  throw Error(ErrorCode::InvalidLexicon, fmt::format("unknown category \"{}\"", name));
}

ArticleMode article_mode_from_string(std::string_view name) {
  if (name == "grammatical") return ArticleMode::Grammatical;
  if (name == "paper-exact") return ArticleMode::PaperExact;
  throw Error(ErrorCode::InvalidLexicon, fmt::format("unknown article mode \"{}\"", name));
}

void validate_lexicon(const Lexicon& lexicon) {
  auto check_word = [](const std::string& word, const char* what) {
    if (word.empty()) throw Error(ErrorCode::InvalidLexicon, fmt::format("empty {}", what));
    if (word.find(kMaskToken) != std::string::npos) {
      throw Error(ErrorCode::InvalidLexicon, fmt::format("{} \"{}\" contains the mask token", what, word));
    }
  };
  for (const auto& entry : lexicon.entries) {
    for (const auto& noun : entry.nouns) check_word(noun, "noun");
    if (entry.modifiers.size() < 3) {
      throw Error(ErrorCode::TooFewModifiers, fmt::format("({}, {}) has {} modifiers", entry.nouns[0],
                                                          entry.nouns[1], entry.modifiers.size()));
    }
    std::set<std::string> seen;
    for (const auto& m : entry.modifiers) {
      check_word(m, "modifier");
      if (!seen.insert(m).second) throw Error(ErrorCode::InvalidLexicon, fmt::format("repeated modifier \"{}\"", m));
    }
  }
}

Lexicon lexicon_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error(ErrorCode::InvalidLexicon, "lexicon needs an \"entries\" array");
  }
  Lexicon lexicon;
  try {
    for (const auto& e : doc["entries"]) {
      LexiconEntry entry;
      const auto& nouns = e.at("nouns");
      if (!nouns.is_array() || nouns.size() != 2) throw Error(ErrorCode::InvalidLexicon, "\"nouns\" must hold two strings");
      entry.nouns = {nouns[0].get<std::string>(), nouns[1].get<std::string>()};
      entry.category = category_from_string(e.at("category").get<std::string>());
      entry.modifiers = e.at("modifiers").get<std::vector<std::string>>();
      lexicon.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::InvalidLexicon, ex.what());
  }
  validate_lexicon(lexicon);
  return lexicon;
}

nlohmann::ordered_json lexicon_to_json(const Lexicon& lexicon) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& e : lexicon.entries) {
    nlohmann::ordered_json entry;
    entry["nouns"] = e.nouns;
    entry["category"] = to_string(e.category);
    entry["modifiers"] = e.modifiers;
    entries.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc;
  doc["entries"] = std::move(entries);
  return doc;
}

Lexicon read_lexicon_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return lexicon_from_json(doc);
}

Lexicon ship_paper_lexicon() {
  using C = Category;
  return Lexicon{{
      {{"cat", "dog"}, C::Adjective,
       {"cute", "furry", "lovely", "friendly", "sweet", "big", "small", "house", "young", "large", "wild", "dead",
        "thirsty", "hungry", "good", "gray", "black", "little"}},
      {{"girl", "boy"}, C::Adjective, {"little", "beautiful", "young", "pretty", "small", "baby", "teenage"}},
      {{"man", "woman"}, C::Adjective, {"young", "dead", "little", "big", "strange", "beautiful", "tall"}},
      {{"strawberry", "apple"}, C::Adjective, {"round", "red", "sweet", "sour", "rotten"}},
      {{"daisy", "marigold"}, C::Adjective, {"yellow", "small", "beautiful", "everywhere"}},
      {{"daisy", "sunflower"}, C::Adjective, {"yellow", "small", "beautiful"}},
      {{"moth", "butterfly"}, C::Adjective, {"winged", "colorful", "light", "beautiful"}},
      {{"cucumber", "courgette"}, C::Adjective, {"green", "long", "juicy", "tasty"}},
      {{"dolphin", "porpoise"}, C::Adjective, {"grey", "wet", "slippery", "slim"}},
      {{"potato", "yam"}, C::Adjective, {"orange", "starchy", "healthy", "big"}},
      {{"car", "bus"}, C::Adjective, {"fast", "sturdy", "safe", "heavy"}},
      {{"strawberry", "apple"}, C::Verb, {"sold", "bought", "washed", "eaten", "rotten", "cooked", "chilled", "steamed"}},
      {{"cat", "dog"}, C::Verb, {"fed", "chased", "watched", "held", "hunted", "touched", "pet", "bathed", "cleaned"}},
      {{"apple", "strawberry"}, C::Preposition, {"on the table", "in a dish", "in the fridge"}},
      {{"boy", "girl"}, C::Preposition,
       {"from the town", "at the school", "near the shop", "on a bus", "across the street", "in the city"}},
  }};
}

std::string make_instance_id(Category category, const std::array<std::string, 2>& nouns,
                             const std::array<std::string, 3>& modifiers) {
  std::string id = fmt::format("{}:{}:{}:{}:{}:{}", to_string(category), nouns[0], nouns[1], modifiers[0],
                               modifiers[1], modifiers[2]);
  for (char& ch : id) {
    if (ch == ' ') ch = '_';
    else ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return id;
}

namespace {

std::string_view article(const std::string& noun, ArticleMode mode) {
  if (mode == ArticleMode::PaperExact) return "an";
  const char first = static_cast<char>(std::tolower(static_cast<unsigned char>(noun.front())));
  return std::string_view("aeiou").find(first) != std::string_view::npos ? "an" : "a";
}

}  // namespace

std::array<std::string, 3> render_sentences(const std::array<std::string, 2>& nouns,
                                            const std::array<std::string, 3>& modifiers, Category category,
                                            ArticleMode mode) {
  const std::string intro =
      fmt::format("There is {} {} and {} {}.", article(nouns[0], mode), nouns[0], article(nouns[1], mode), nouns[1]);
  const std::string_view copula = category == Category::Verb ? "is being" : "is";
  auto clause = [&](const std::string& a, std::string_view which, const std::string& b) {
    return fmt::format("{} The {} {} {} and the {} one {} {}.", intro, kMaskToken, copula, a, which, copula, b);
  };
  return {clause(modifiers[0], "same", modifiers[1]), clause(modifiers[1], "same", modifiers[2]),
          clause(modifiers[2], "other", modifiers[0])};
}

std::size_t instance_count(const LexiconEntry& entry) {
  const std::size_t n = entry.modifiers.size();
  if (n < 3) return 0;
  return n * (n - 1) * (n - 2) / 6 * 12;
}

void for_each_instance(const Lexicon& lexicon, ArticleMode mode,
                       const std::function<void(const SchemaInstance&)>& sink) {
  validate_lexicon(lexicon);
  for (const auto& entry : lexicon.entries) {
    const auto& m = entry.modifiers;
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          std::array<std::size_t, 3> order{i, j, k};
          do {
            const std::array<std::string, 3> triple{m[order[0]], m[order[1]], m[order[2]]};
            for (const auto& nouns : {entry.nouns, std::array<std::string, 2>{entry.nouns[1], entry.nouns[0]}}) {
              SchemaInstance inst;
              inst.nouns = nouns;
              inst.modifiers = triple;
              inst.category = entry.category;
              inst.sentences = render_sentences(nouns, triple, entry.category, mode);
              inst.instance_id = make_instance_id(entry.category, nouns, triple);
              sink(inst);
            }
          } while (std::next_permutation(order.begin(), order.end()));
        }
      }
    }
  }
}

std::vector<SchemaInstance> enumerate_instances(const Lexicon& lexicon, ArticleMode mode) {
  std::vector<SchemaInstance> out;
  std::size_t total = 0;
  for (const auto& e : lexicon.entries) total += instance_count(e);
  out.reserve(total);
  for_each_instance(lexicon, mode, [&](const SchemaInstance& inst) { out.push_back(inst); });
  return out;
}

nlohmann::ordered_json instance_to_json(const SchemaInstance& inst) {
  nlohmann::ordered_json doc;
  doc["instance_id"] = inst.instance_id;
  doc["nouns"] = inst.nouns;
  doc["modifiers"] = inst.modifiers;
  doc["category"] = to_string(inst.category);
  doc["sentences"] = inst.sentences;
  return doc;
}

SchemaInstance instance_from_json(const json& doc) {
  try {
    SchemaInstance inst;
    inst.instance_id = doc.at("instance_id").get<std::string>();
    inst.nouns = doc.at("nouns").get<std::array<std::string, 2>>();
    inst.modifiers = doc.at("modifiers").get<std::array<std::string, 3>>();
    inst.category = category_from_string(doc.at("category").get<std::string>());
    inst.sentences = doc.at("sentences").get<std::array<std::string, 3>>();
    return inst;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("masked-sentence record: ") + ex.what());
  }
}

}  // namespace ctxkit
