#include "lexiclass/features.hpp"

#include <doctest.h>

#include "lexiclass/errors.hpp"
#include "lexiclass/textnorm.hpp"

using namespace lexiclass;
using features::FeatureMode;
using features::NgramRange;
using features::Vocabulary;

static textnorm::TokenSeq toks(std::string_view text) {
  return textnorm::tokenize(textnorm::normalize(text));
}

TEST_CASE("vocabulary indices follow lexicographic term order") {
  const std::vector<textnorm::TokenSeq> docs = {toks("b a"), toks("c a")};
  const auto vocab = Vocabulary::build(docs, {1, 1});
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.terms() == std::vector<std::string>{"a", "b", "c"});
  CHECK(vocab.index_of("a") == 0u);
  CHECK(vocab.index_of("c") == 2u);
  CHECK_FALSE(vocab.index_of("d").has_value());
}

TEST_CASE("bigram range adds joined adjacent pairs") {
  const std::vector<textnorm::TokenSeq> docs = {toks("le pourvoi est rejete")};
  const auto vocab = Vocabulary::build(docs, {1, 2});
  CHECK(vocab.index_of("le pourvoi").has_value());
  CHECK(vocab.index_of("pourvoi est").has_value());
  CHECK(vocab.index_of("le").has_value());
  CHECK_FALSE(vocab.index_of("le est").has_value());
  CHECK(vocab.size() == 4 + 3);

  const auto only_bigrams = Vocabulary::build(docs, {2, 2});
  CHECK(only_bigrams.size() == 3);
  CHECK_FALSE(only_bigrams.index_of("le").has_value());
}

TEST_CASE("single-token documents contribute no bigrams") {
  const std::vector<textnorm::TokenSeq> docs = {toks("seul")};
  CHECK(Vocabulary::build(docs, {2, 2}).size() == 0);
  CHECK(Vocabulary::build(docs, {1, 2}).size() == 1);
}

TEST_CASE("vectorize counts in-vocabulary n-grams and skips the rest") {
  const std::vector<textnorm::TokenSeq> docs = {toks("a b a")};
  const auto vocab = Vocabulary::build(docs, {1, 2});
  const auto v = features::vectorize(toks("a b a c"), vocab);
  // vocab terms sorted: "a", "a b", "b", "b a"
  REQUIRE(v.entries().size() == 4);
  CHECK(v.entries()[0].index == *vocab.index_of("a"));
  CHECK(v.entries()[0].value == 2.0);
  CHECK(v.entries()[1].value == 1.0);  // "a b"
  CHECK(v.entries()[3].value == 1.0);  // "b a"
  // "b c" and "c" are out of vocabulary: no entries beyond the four.
  const auto empty = features::vectorize(toks("x y"), vocab);
  CHECK(empty.empty());
}

TEST_CASE("vectorize_all stacks rows in document order") {
  const std::vector<textnorm::TokenSeq> docs = {toks("a a"), toks("b"),
                                                toks("")};
  const auto vocab = Vocabulary::build(docs, {1, 1});
  const auto X = features::vectorize_all(docs, vocab);
  CHECK(X.rows() == 3);
  CHECK(X.cols() == vocab.size());
  CHECK(X.row(0).size() == 1);
  CHECK(X.row(0)[0].value == 2.0);
  CHECK(X.row(2).empty());
}

TEST_CASE("vocabulary JSON round trip") {
  const std::vector<textnorm::TokenSeq> docs = {toks("un deux trois")};
  const auto vocab = Vocabulary::build(docs, {1, 2});
  const auto back = Vocabulary::from_json(vocab.to_json(), {1, 2});
  CHECK(back.terms() == vocab.terms());
  CHECK(back.ngram_range() == vocab.ngram_range());
  CHECK_THROWS_AS(Vocabulary::from_json("{\"not\":\"array\"}", {1, 1}), Error);
  CHECK_THROWS_AS(Vocabulary::from_json("[\"a\",\"a\"]", {1, 1}), Error);
}

TEST_CASE("type_token_ratio counts distinct over total") {
  CHECK(features::type_token_ratio(toks("a b c d")) == 1.0);
  CHECK(features::type_token_ratio(toks("a a a a")) == 0.25);
  CHECK(features::type_token_ratio(toks("a b a b")) == 0.5);
  CHECK(features::type_token_ratio(toks("")) == 0.0);
}

TEST_CASE("feature mode names round trip") {
  for (auto mode : {FeatureMode::bow_only, FeatureMode::ttr_only,
                    FeatureMode::bow_plus_ttr}) {
    CHECK(features::feature_mode_from_name(features::feature_mode_name(mode)) ==
          mode);
  }
  CHECK(features::feature_mode_name(FeatureMode::bow_plus_ttr) == "bow+ttr");
  CHECK_THROWS_AS(features::feature_mode_from_name("tfidf"), Error);
}

TEST_CASE("assemble_features shapes per mode") {
  const auto X = SparseMatrix::from_rows(
      2, {SparseVector(2, {{0, 1.0}}), SparseVector(2, {{1, 3.0}})});
  const std::vector<double> ttr = {0.5, 0.0};

  const auto bow = features::assemble_features(X, std::nullopt,
                                               FeatureMode::bow_only);
  CHECK(bow.cols() == 2);
  CHECK(bow.rows() == 2);

  const auto both =
      features::assemble_features(X, ttr, FeatureMode::bow_plus_ttr);
  CHECK(both.cols() == 3);
  REQUIRE(both.row(0).size() == 2);
  CHECK(both.row(0)[1].index == 2);
  CHECK(both.row(0)[1].value == 0.5);
  CHECK(both.row(1).size() == 1);  // zero ratio stays unstored

  const auto ratios_only =
      features::assemble_features(X, ttr, FeatureMode::ttr_only);
  CHECK(ratios_only.cols() == 1);
  CHECK(ratios_only.rows() == 2);
  REQUIRE(ratios_only.row(0).size() == 1);
  CHECK(ratios_only.row(0)[0].value == 0.5);
  CHECK(ratios_only.row(1).empty());

  CHECK_THROWS_AS(
      features::assemble_features(X, std::nullopt, FeatureMode::ttr_only),
      Error);
  const std::vector<double> short_ttr = {0.5};
  CHECK_THROWS_AS(
      features::assemble_features(X, short_ttr, FeatureMode::bow_plus_ttr),
      Error);
}
