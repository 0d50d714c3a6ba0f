#include <doctest.h>

#include "oracles.hpp"
#include "topmine/corpus.hpp"

using namespace topmine;

namespace {

IngestOptions stoplist_options() {
    IngestOptions options;
    options.stopwords = default_stopwords();
    return options;
}

}  // namespace

TEST_CASE("ingest splits on phrase-invariant punctuation and removed tokens") {
    auto corpus = ingest(
        {{"d1", "Frequent pattern mining: current status and future directions"}},
        stoplist_options());
    const Document& doc = corpus.docs.at(0);
    REQUIRE(doc.tokens.size() == 7);
    std::vector<std::string> words;
    for (TokenId id : doc.tokens) words.push_back(corpus.vocab.word(id));
    CHECK(words == std::vector<std::string>{"frequent", "pattern", "mining", "current",
                                            "status", "future", "directions"});
    // one boundary at the colon, one at the removed "and"
    CHECK(doc.chunk_bounds == std::vector<std::size_t>{3, 5});
    CHECK(corpus.total_tokens == 7);
}

TEST_CASE("empty document is kept with no tokens and no chunks") {
    auto corpus = ingest({{"d2", ""}}, stoplist_options());
    CHECK(corpus.docs.at(0).tokens.empty());
    CHECK(corpus.docs.at(0).chunk_bounds.empty());
    CHECK(chunk_spans(corpus.docs.at(0)).empty());
}

TEST_CASE("punctuation forces singleton chunks") {
    IngestOptions options;  // empty stop list
    auto corpus = ingest({{"d3", "a, a, a"}}, options);
    const Document& doc = corpus.docs.at(0);
    REQUIRE(doc.tokens.size() == 3);
    CHECK(doc.tokens == std::vector<TokenId>{1, 1, 1});
    CHECK(doc.chunk_bounds == std::vector<std::size_t>{1, 2});
    auto spans = chunk_spans(doc);
    REQUIRE(spans.size() == 3);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(spans[c].first == c);
        CHECK(spans[c].second == c + 1);
    }
}

TEST_CASE("invalid UTF-8 is rejected naming the document") {
    std::string bad = "broken ";
    bad.push_back(static_cast<char>(0xFF));
    try {
        ingest({{"doc-42", bad}}, stoplist_options());
        FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
        CHECK(std::string(e.what()).find("doc-42") != std::string::npos);
    }
}

TEST_CASE("multi-byte UTF-8 words pass through") {
    auto corpus = ingest({{"d", "naïve café"}}, stoplist_options());
    REQUIRE(corpus.docs.at(0).tokens.size() == 2);
    CHECK(corpus.vocab.word(corpus.docs.at(0).tokens[0]) == "naïve");
}

TEST_CASE("lowercasing is optional") {
    IngestOptions options;
    options.lowercase = false;
    auto corpus = ingest({{"d", "Mining Frequent mining"}}, options);
    CHECK(corpus.vocab.size() == 3);  // Mining != mining
}

TEST_CASE("normalizer hook applies after the stop check and may drop tokens") {
    IngestOptions options;
    options.normalizer = [](const std::string& w) {
        if (w == "dropme") return std::string();
        return w.size() > 1 && w.back() == 's' ? w.substr(0, w.size() - 1) : w;
    };
    auto corpus = ingest({{"d", "patterns dropme pattern"}}, options);
    const Document& doc = corpus.docs.at(0);
    REQUIRE(doc.tokens.size() == 2);
    CHECK(doc.tokens[0] == doc.tokens[1]);      // both normalize to "pattern"
    CHECK(doc.chunk_bounds == std::vector<std::size_t>{1});  // dropped token splits
}

TEST_CASE("render_phrase reinserts interior stop words") {
    std::vector<std::vector<std::string>> raw;
    auto corpus = ingest({{"d", "centers for disease control"}}, stoplist_options(), &raw);
    const Document& doc = corpus.docs.at(0);
    REQUIRE(doc.tokens.size() == 3);
    CHECK(render_phrase(doc, 0, 3, raw[0]) == "centers for disease control");
    CHECK(render_phrase(doc, 1, 3, raw[0]) == "disease control");
    CHECK(render_phrase(doc, 2, 3, raw[0]) == "control");
    CHECK_THROWS_AS(render_phrase(doc, 2, 4, raw[0]), std::out_of_range);
    CHECK_THROWS_AS(render_phrase(doc, 1, 1, raw[0]), std::out_of_range);
}

TEST_CASE("render_phrase is the identity when nothing was filtered") {
    std::vector<std::vector<std::string>> raw;
    auto corpus = ingest({{"d", "support vector machine"}}, stoplist_options(), &raw);
    CHECK(render_phrase(corpus.docs.at(0), 0, 3, raw[0]) == "support vector machine");
}

TEST_CASE("vocabulary ids are dense inverses") {
    auto corpus =
        ingest({{"d1", "alpha beta gamma"}, {"d2", "beta delta alpha"}}, IngestOptions{});
    const Vocabulary& vocab = corpus.vocab;
    CHECK(vocab.size() == 4);
    for (TokenId id = 1; id <= vocab.size(); ++id) CHECK(vocab.id_of(vocab.word(id)) == id);
    CHECK(vocab.id_of("epsilon") == 0);
}

TEST_CASE("chunk spans concatenate back to the token sequence") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        Corpus corpus = testing::random_corpus(rng, 5, 30, 6);
        for (const Document& doc : corpus.docs) {
            std::vector<TokenId> rebuilt;
            for (auto [lo, hi] : chunk_spans(doc))
                rebuilt.insert(rebuilt.end(), doc.tokens.begin() + lo, doc.tokens.begin() + hi);
            CHECK(rebuilt == doc.tokens);
        }
    }
}

TEST_CASE("filtering is idempotent on already-filtered text") {
    auto options = stoplist_options();
    auto first = ingest({{"d", "Mining frequent patterns, without candidate generation!"}},
                        options);
    std::string refiltered;
    for (TokenId id : first.docs.at(0).tokens) {
        if (!refiltered.empty()) refiltered.push_back(' ');
        refiltered += first.vocab.word(id);
    }
    auto second = ingest({{"d", refiltered}}, options);
    std::vector<std::string> a, b;
    for (TokenId id : first.docs.at(0).tokens) a.push_back(first.vocab.word(id));
    for (TokenId id : second.docs.at(0).tokens) b.push_back(second.vocab.word(id));
    CHECK(a == b);
}

TEST_CASE("parallel ingest matches single-threaded output") {
    std::vector<RawDocument> raw_docs;
    for (int i = 0; i < 40; ++i)
        raw_docs.push_back({"p" + std::to_string(i),
                            "shared words plus doc" + std::to_string(i % 7) + ", and more; text"});
    auto one = ingest(raw_docs, stoplist_options(), nullptr, 1);
    auto four = ingest(raw_docs, stoplist_options(), nullptr, 4);
    REQUIRE(one.docs.size() == four.docs.size());
    CHECK(one.vocab.content_hash() == four.vocab.content_hash());
    for (std::size_t d = 0; d < one.docs.size(); ++d) {
        CHECK(one.docs[d].tokens == four.docs[d].tokens);
        CHECK(one.docs[d].chunk_bounds == four.docs[d].chunk_bounds);
        CHECK(one.docs[d].origin_map == four.docs[d].origin_map);
    }
}
