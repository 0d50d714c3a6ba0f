#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "topmine/evaluation.hpp"

using namespace topmine;

namespace {

std::vector<std::vector<double>> uniform_phi(std::uint32_t topics, std::size_t vocab) {
    std::vector<std::vector<double>> phi(topics, std::vector<double>(vocab + 1, 0.0));
    for (auto& row : phi)
        for (std::size_t x = 1; x <= vocab; ++x) row[x] = 1.0 / static_cast<double>(vocab);
    return phi;
}

}  // namespace

TEST_CASE("uniform predictive distribution scores perplexity V") {
    Rng rng(51);
    Corpus corpus = testing::random_corpus(rng, 10, 30, 7);
    std::vector<const Document*> held_out;
    for (const Document& doc : corpus.docs) held_out.push_back(&doc);

    PerplexityConfig config;
    config.alpha = {0.5, 0.5, 0.5};
    config.seed = 4;
    auto result = perplexity(uniform_phi(3, corpus.vocab.size()), held_out, config, "uniform");
    CHECK(result.perplexity == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(result.bits == doctest::Approx(std::log2(7.0)).epsilon(1e-9));
}

TEST_CASE("a single topic reduces to the direct product oracle") {
    Corpus corpus;
    corpus.vocab.intern("a");
    corpus.vocab.intern("b");
    Document doc;
    doc.doc_id = "k1";
    doc.tokens = {1, 2, 1, 2, 2, 1};
    doc.origin_map = {0, 1, 2, 3, 4, 5};
    corpus.docs.push_back(doc);

    std::vector<std::vector<double>> phi = {{0.0, 0.7, 0.3}};
    PerplexityConfig config;
    config.alpha = {1.0};
    auto result = perplexity(phi, {&corpus.docs[0]}, config, "k1");
    // second half = tokens[3..6): b b a
    double expected_ll = std::log(0.3) + std::log(0.3) + std::log(0.7);
    CHECK(result.held_out_tokens == 3);
    CHECK(result.log_likelihood == doctest::Approx(expected_ll).epsilon(1e-12));
    CHECK(result.perplexity == doctest::Approx(std::exp(-expected_ll / 3.0)).epsilon(1e-12));
}

TEST_CASE("an empty held-out set is a parameter error") {
    PerplexityConfig config;
    config.alpha = {1.0};
    CHECK_THROWS_AS(perplexity(uniform_phi(1, 3), {}, config, "x"), std::invalid_argument);
}

TEST_CASE("out-of-vocabulary tokens are skipped and counted") {
    Corpus corpus;
    corpus.vocab.intern("a");
    Document mixed;
    mixed.doc_id = "mixed";
    mixed.tokens = {1, 9, 1, 9};  // 9 is beyond the training vocabulary
    Document all_oov;
    all_oov.doc_id = "allc";
    all_oov.tokens = {9, 9};
    Document empty;
    empty.doc_id = "empty";
    corpus.docs = {mixed, all_oov, empty};

    PerplexityConfig config;
    config.alpha = {1.0};
    auto result =
        perplexity({{0.0, 1.0}}, {&corpus.docs[0], &corpus.docs[1], &corpus.docs[2]}, config, "m");
    CHECK(result.oov_skipped == 4);
    CHECK(result.all_oov_docs == 1);  // the empty document is not flagged
    CHECK(result.held_out_tokens == 1);
}

TEST_CASE("perplexity does not depend on document order or sharding") {
    Rng rng(72);
    Corpus corpus = testing::random_corpus(rng, 12, 25, 5);
    std::vector<const Document*> held_out;
    for (const Document& doc : corpus.docs) held_out.push_back(&doc);

    std::vector<std::vector<double>> phi(2, std::vector<double>(6, 0.0));
    double mass_a = 0.05;
    for (std::size_t x = 1; x <= 5; ++x) {
        phi[0][x] = mass_a * static_cast<double>(x);
        phi[1][x] = mass_a * static_cast<double>(6 - x);
    }
    for (auto& row : phi) {
        double sum = 0.0;
        for (double v : row) sum += v;
        for (auto& v : row) v /= sum;
    }

    PerplexityConfig config;
    config.alpha = {0.4, 0.6};
    config.seed = 9;
    auto base = perplexity(phi, held_out, config, "m");

    auto shuffled = held_out;
    std::reverse(shuffled.begin(), shuffled.end());
    auto reversed = perplexity(phi, shuffled, config, "m");
    CHECK(base.log_likelihood == reversed.log_likelihood);
    CHECK(base.perplexity == reversed.perplexity);

    config.threads = 3;
    auto threaded = perplexity(phi, held_out, config, "m");
    CHECK(base.log_likelihood == threaded.log_likelihood);
}

TEST_CASE("runtime decomposition handles a zero-document corpus") {
    BenchConfig config;
    config.iterations = 5;
    config.mining_repeats = 1;
    auto rows = runtime_decomposition({0}, config);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].tokens == 0);
    CHECK(rows[0].mining_seconds < 0.5);
    CHECK(rows[0].modeling_seconds == 0.0);
}

TEST_CASE("runtime decomposition reports both phases") {
    BenchConfig config;
    config.iterations = 20;
    config.mining_repeats = 2;
    auto rows = runtime_decomposition({3000}, config);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].tokens >= 3000);
    CHECK(rows[0].mining_seconds > 0.0);
    CHECK(rows[0].modeling_seconds > 0.0);
}
