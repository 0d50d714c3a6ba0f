#include <doctest.h>

#include "oracles.hpp"
#include "topmine/phrase_miner.hpp"

using namespace topmine;

namespace {

Corpus corpus_from_tokens(const std::vector<std::vector<std::string>>& docs,
                          const std::vector<std::vector<std::size_t>>& bounds = {}) {
    Corpus corpus;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        Document doc;
        doc.doc_id = "m" + std::to_string(d);
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            doc.tokens.push_back(corpus.vocab.intern(docs[d][i]));
            doc.origin_map.push_back(i);
        }
        if (d < bounds.size()) doc.chunk_bounds = bounds[d];
        corpus.total_tokens += doc.tokens.size();
        corpus.docs.push_back(std::move(doc));
    }
    return corpus;
}

std::vector<TokenId> ids(const Corpus& corpus, const std::vector<std::string>& words) {
    std::vector<TokenId> out;
    for (const auto& w : words) out.push_back(corpus.vocab.id_of(w));
    return out;
}

MiningOptions eps(std::uint64_t value, std::uint32_t max_len = 6) {
    MiningOptions options;
    options.support = MinSupport::absolute(value);
    options.max_phrase_len = max_len;
    return options;
}

}  // namespace

TEST_CASE("mining a single chunk keeps exactly the supported phrases") {
    auto corpus = corpus_from_tokens({{"a", "b", "a", "b", "c", "a", "b"}});
    PhraseCounter counter = mine(corpus, eps(2));
    CHECK(counter.size() == 3);
    CHECK(counter.count_of(ids(corpus, {"a"})) == 3);
    CHECK(counter.count_of(ids(corpus, {"b"})) == 3);
    CHECK(counter.count_of(ids(corpus, {"a", "b"})) == 3);
    CHECK(counter.count_of(ids(corpus, {"b", "a"})) == 0);  // count 1 < eps
    CHECK(counter.count_of({}) == 0);
    CHECK(counter.min_support() == 2);
}

TEST_CASE("eps=1 reproduces the full within-chunk n-gram set") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        Corpus corpus = testing::random_corpus(rng, 6, 25, 4);
        PhraseCounter counter = mine(corpus, eps(1, 40));
        PhraseCountMap expected = testing::frequent_ngrams(corpus, 1, 40);
        CHECK(counter.entries() == expected);
    }
}

TEST_CASE("a document with no repeated unigram is eliminated after iteration 1") {
    auto corpus = corpus_from_tokens({{"x", "y", "z"}});
    MiningStats stats;
    PhraseCounter counter = mine(corpus, eps(2), &stats);
    CHECK(counter.size() == 0);
    CHECK(stats.dropped_at_length.at(0) == 2);  // nothing of length >= 2
}

TEST_CASE("the final pair of a document is still counted") {
    // The last active index can witness a frequent suffix even though no
    // longer phrase can start there.
    auto corpus = corpus_from_tokens({{"a", "b"}, {"a", "b"}});
    PhraseCounter counter = mine(corpus, eps(2));
    CHECK(counter.count_of(ids(corpus, {"a", "b"})) == 2);
}

TEST_CASE("zero support is a parameter error") {
    auto corpus = corpus_from_tokens({{"a"}});
    CHECK_THROWS_AS(mine(corpus, eps(0)), std::invalid_argument);
}

TEST_CASE("rate-based support scales with corpus size") {
    CHECK(MinSupport::rate(0.1).resolve(53) == 6);         // ceil(5.3)
    CHECK(MinSupport::rate(0.001, 4).resolve(100) == 4);   // floor wins
    CHECK(MinSupport::rate(0.5).resolve(10) == 5);
    CHECK_THROWS_AS(MinSupport::rate(0.0, 0).resolve(10), std::invalid_argument);
}

TEST_CASE("phrases never cross chunk boundaries") {
    auto corpus = corpus_from_tokens({{"a", "b"}, {"a", "b"}}, {{1}, {1}});
    PhraseCounter counter = mine(corpus, eps(2));
    CHECK(counter.count_of(ids(corpus, {"a", "b"})) == 0);
    CHECK(counter.count_of(ids(corpus, {"a"})) == 2);
}

TEST_CASE("mining equals brute-force enumeration on random corpora") {
    Rng rng(99);
    for (int trial = 0; trial < 120; ++trial) {
        Corpus corpus = testing::random_corpus(rng, 8, 30, 6);
        std::uint64_t support = 1 + rng.uniform_int(5);
        MiningStats stats;
        PhraseCounter counter = mine(corpus, eps(support, 40), &stats);
        PhraseCountMap expected = testing::frequent_ngrams(corpus, support, 40);
        REQUIRE(counter.entries() == expected);

        // downward closure with monotone counts
        for (const auto& [phrase, count] : counter.entries()) {
            if (phrase.size() < 2) continue;
            std::vector<TokenId> prefix(phrase.begin(), phrase.end() - 1);
            std::vector<TokenId> suffix(phrase.begin() + 1, phrase.end());
            CHECK(counter.count_of(prefix) >= count);
            CHECK(counter.count_of(suffix) >= count);
        }

        // dropped documents contribute no frequent phrase at or past the drop length
        for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
            if (stats.dropped_at_length[d] == 0) continue;
            Corpus single;
            single.vocab = corpus.vocab;
            single.docs.push_back(corpus.docs[d]);
            single.total_tokens = corpus.docs[d].tokens.size();
            for (const auto& [phrase, count] : testing::enumerate_ngrams(single, 40)) {
                (void)count;
                if (counter.count_of(phrase) > 0)
                    CHECK(phrase.size() < stats.dropped_at_length[d]);
            }
        }
    }
}

TEST_CASE("mining is deterministic and thread count does not matter") {
    Rng rng(123);
    Corpus corpus = testing::random_corpus(rng, 20, 40, 5);
    auto options = eps(3);
    PhraseCounter a = mine(corpus, options);
    PhraseCounter b = mine(corpus, options);
    options.threads = 4;
    PhraseCounter c = mine(corpus, options);
    CHECK(a.entries() == b.entries());
    CHECK(a.entries() == c.entries());
}

TEST_CASE("the length cap truncates mining") {
    std::vector<std::vector<std::string>> docs(3, {"a", "b", "c", "d", "a", "b", "c", "d"});
    auto corpus = corpus_from_tokens(docs);
    PhraseCounter capped = mine(corpus, eps(2, 3));
    for (const auto& [phrase, count] : capped.entries()) {
        (void)count;
        CHECK(phrase.size() <= 3);
    }
    CHECK(capped.entries() == testing::frequent_ngrams(corpus, 2, 3));
    CHECK(capped.count_of(ids(corpus, {"b", "c", "d"})) == 6);
}
