#include "doctest.h"

#include <set>
#include <sstream>

#include "ctxkit/atomic_file.hpp"
#include "ctxkit/error.hpp"
#include "ctxkit/pipeline.hpp"
#include "ctxkit/schema.hpp"

using namespace ctxkit;

TEST_CASE("paper-exact sentences for apple / strawberry") {
  const auto s = render_sentences({"apple", "strawberry"}, {"red", "round", "sweet"}, Category::Adjective,
                                  ArticleMode::PaperExact);
  CHECK(s[0] == "There is an apple and an strawberry. The [MASK] is red and the same one is round.");
  CHECK(s[1] == "There is an apple and an strawberry. The [MASK] is round and the same one is sweet.");
  CHECK(s[2] == "There is an apple and an strawberry. The [MASK] is sweet and the other one is red.");

  const auto g = render_sentences({"apple", "strawberry"}, {"red", "round", "sweet"}, Category::Adjective);
  CHECK(g[0] == "There is an apple and a strawberry. The [MASK] is red and the same one is round.");
}

TEST_CASE("verb sentences use the progressive") {
  const auto s = render_sentences({"apple", "strawberry"}, {"steamed", "cooked", "chilled"}, Category::Verb);
  CHECK(s[0].ends_with("The [MASK] is being steamed and the same one is being cooked."));
  CHECK(s[2].ends_with("The [MASK] is being chilled and the other one is being steamed."));
}

TEST_CASE("every sentence holds exactly one mask token") {
  for (const auto& inst : enumerate_instances(ship_paper_lexicon())) {
    for (const auto& s : inst.sentences) {
      const auto first = s.find(kMaskToken);
      REQUIRE(first != std::string::npos);
      CHECK(s.find(kMaskToken, first + 1) == std::string::npos);
    }
  }
}

TEST_CASE("shipped lexicon counts") {
  const auto lex = ship_paper_lexicon();
  REQUIRE(lex.entries.size() == 15);
  const std::vector<std::size_t> expected{9792, 420, 420, 120, 48, 12, 48, 48, 48, 48, 48, 672, 1008, 12, 240};
  std::size_t totals[3] = {0, 0, 0};
  for (std::size_t i = 0; i < lex.entries.size(); ++i) {
    const auto& e = lex.entries[i];
    const std::size_t n = e.modifiers.size();
    CHECK(instance_count(e) == n * (n - 1) * (n - 2) / 6 * 12);
    CHECK(instance_count(e) == expected[i]);
    totals[static_cast<int>(e.category)] += instance_count(e);
  }
  CHECK(totals[0] == 11052);
  CHECK(totals[1] == 1680);
  CHECK(totals[2] == 252);
  CHECK(enumerate_instances(lex).size() == 11052 + 1680 + 252);
}

TEST_CASE("single-entry examples") {
  Lexicon verbs{{ship_paper_lexicon().entries[11]}};
  CHECK(enumerate_instances(verbs).size() == 672);
  Lexicon preps{{ship_paper_lexicon().entries[13]}};
  const auto inst = enumerate_instances(preps);
  CHECK(inst.size() == 12);
  CHECK(inst.front().instance_id == "preposition:apple:strawberry:on_the_table:in_a_dish:in_the_fridge");
  CHECK(inst[1].nouns == std::array<std::string, 2>{"strawberry", "apple"});
}

TEST_CASE("instance ids are unique and deterministic") {
  const auto a = enumerate_instances(ship_paper_lexicon());
  const auto b = enumerate_instances(ship_paper_lexicon());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].instance_id == b[i].instance_id);
    CHECK(a[i].sentences == b[i].sentences);
    ids.insert(a[i].instance_id);
  }
  CHECK(ids.size() == a.size());
}

TEST_CASE("lexicon validation") {
  auto code = [](const Lexicon& l) {
    try {
      validate_lexicon(l);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code({{{{"a", "b"}, Category::Adjective, {"x", "y"}}}}) == ErrorCode::TooFewModifiers);
  CHECK(code({{{{"a", "b"}, Category::Adjective, {"x", "y", "x"}}}}) == ErrorCode::InvalidLexicon);
  CHECK(code({{{{"a", ""}, Category::Adjective, {"x", "y", "z"}}}}) == ErrorCode::InvalidLexicon);
  CHECK(code({{{{"a", "b"}, Category::Adjective, {"x", "[MASK]", "z"}}}}) == ErrorCode::InvalidLexicon);
  CHECK_THROWS_AS(category_from_string("adverb"), Error);
  CHECK_THROWS_AS(article_mode_from_string("fancy"), Error);
  CHECK(article_mode_from_string("paper-exact") == ArticleMode::PaperExact);
}

TEST_CASE("lexicon JSON round trip and shipped data file") {
  const auto lex = ship_paper_lexicon();
  const auto back = lexicon_from_json(nlohmann::json::parse(lexicon_to_json(lex).dump()));
  REQUIRE(back.entries.size() == lex.entries.size());
  for (std::size_t i = 0; i < lex.entries.size(); ++i) {
    CHECK(back.entries[i].nouns == lex.entries[i].nouns);
    CHECK(back.entries[i].category == lex.entries[i].category);
    CHECK(back.entries[i].modifiers == lex.entries[i].modifiers);
  }
  const auto file = read_lexicon_file(CTXKIT_DATA_DIR "/paper_lexicon.json");
  CHECK(lexicon_to_json(file) == lexicon_to_json(lex));
}

TEST_CASE("instance records round trip through the probability format") {
  for (const auto& inst : enumerate_instances(ship_paper_lexicon())) {
    const auto back = instance_from_json(nlohmann::json::parse(instance_to_json(inst).dump()));
    CHECK(back.instance_id == inst.instance_id);
    CHECK(back.sentences == inst.sentences);
    ProbabilityRecord rec{inst.instance_id, {{{0.2, 0.1}, {0.3, 0.3}, {0.05, 0.5}}}};
    const auto parsed = record_from_json(nlohmann::json::parse(record_to_json(rec).dump()));
    CHECK(parsed.instance_id == inst.instance_id);
    const auto meta = parse_instance_id(parsed.instance_id);
    REQUIRE(meta.has_value());
    CHECK(meta->nouns == inst.nouns);
    CHECK(meta->modifiers == inst.modifiers);
  }
}
