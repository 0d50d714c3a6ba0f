#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "topmine/phrase_miner.hpp"
#include "topmine/segmenter.hpp"

using namespace topmine;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void replay_certificate(const Document& doc, const PhraseCounter& counter,
                        const SignificanceParams& params,
                        const std::vector<MergeRecord>& log) {
    std::string why;
    bool ok = testing::certificate_holds(doc, counter, params, log, &why);
    INFO(why);
    CHECK(ok);
}

Corpus repeated_title_corpus() {
    Corpus corpus;
    auto add_doc = [&](const std::vector<std::string>& words) {
        Document doc;
        doc.doc_id = "s" + std::to_string(corpus.docs.size());
        for (std::size_t i = 0; i < words.size(); ++i) {
            doc.tokens.push_back(corpus.vocab.intern(words[i]));
            doc.origin_map.push_back(i);
        }
        corpus.total_tokens += doc.tokens.size();
        corpus.docs.push_back(std::move(doc));
    };
    for (int i = 0; i < 8; ++i) add_doc({"mining", "frequent", "patterns"});
    add_doc({"mining", "frequent", "patterns", "without", "candidate", "generation"});
    return corpus;
}

}  // namespace

TEST_CASE("significance matches the standardized-deviation formula") {
    CHECK(significance(10, 10, 8, 100) == doctest::Approx(7.0 / std::sqrt(8.0)).epsilon(1e-12));
    CHECK(significance(10, 10, 1, 100) == 0.0);
    CHECK(significance(5, 5, 0, 100) == -kInf);
}

TEST_CASE("significance scales as sqrt(c) under uniform count scaling") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::uint64_t f1 = 1 + rng.uniform_int(50);
        std::uint64_t f2 = 1 + rng.uniform_int(50);
        std::uint64_t f12 = 1 + rng.uniform_int(std::min(f1, f2));
        std::uint64_t total = 100 + rng.uniform_int(1000);
        for (std::uint64_t c : {2, 3, 10}) {
            double base = significance(f1, f2, f12, total);
            double scaled = significance(c * f1, c * f2, c * f12, c * total);
            CHECK(scaled ==
                  doctest::Approx(std::sqrt(static_cast<double>(c)) * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("a significant pair merges into one span") {
    Corpus corpus;
    Document doc;
    doc.doc_id = "ab";
    doc.tokens = {corpus.vocab.intern("a"), corpus.vocab.intern("b")};
    doc.origin_map = {0, 1};
    PhraseCountMap counts;
    counts[{1}] = 3;
    counts[{2}] = 3;
    counts[{1, 2}] = 3;
    PhraseCounter counter(std::move(counts), 1);

    // sig = (3 - 9/7)/sqrt(3)
    CHECK(significance(3, 3, 3, 7) == doctest::Approx(0.98974331861).epsilon(1e-9));
    Partition partition = segment_document(doc, counter, {0.5, 7});
    REQUIRE(partition.size() == 1);
    CHECK(partition[0] == PhraseSpan{0, 2});
}

TEST_CASE("greedy merging recovers the repeated title phrase") {
    Corpus corpus = repeated_title_corpus();
    PhraseCounter counter = mine(corpus, MiningOptions{MinSupport::absolute(3), 6, 1});
    SignificanceParams params{1.0, corpus.total_tokens};
    std::vector<MergeRecord> log;
    const Document& title = corpus.docs.back();
    Partition partition = segment_document(title, counter, params, &log);

    REQUIRE(partition.size() == 4);
    CHECK(partition[0] == PhraseSpan{0, 3});  // [mining frequent patterns]
    CHECK(partition[1] == PhraseSpan{3, 4});
    CHECK(partition[2] == PhraseSpan{4, 5});
    CHECK(partition[3] == PhraseSpan{5, 6});

    // leftmost tie first, then the grown span against its right neighbor
    REQUIRE(log.size() == 2);
    CHECK(log[0].left_begin == 0);
    CHECK(log[0].left_end == 1);
    CHECK(log[0].right_end == 2);
    CHECK(log[1].left_begin == 0);
    CHECK(log[1].left_end == 2);
    CHECK(log[1].right_end == 3);
    replay_certificate(title, counter, params, log);
}

TEST_CASE("an unreachable threshold leaves all singletons") {
    Corpus corpus = repeated_title_corpus();
    PhraseCounter counter = mine(corpus, MiningOptions{MinSupport::absolute(3), 6, 1});
    SignificanceParams params{kInf, corpus.total_tokens};
    Partition partition = segment_document(corpus.docs.back(), counter, params);
    CHECK(partition.size() == corpus.docs.back().tokens.size());
    for (std::size_t i = 0; i < partition.size(); ++i)
        CHECK(partition[i] == PhraseSpan{i, i + 1});
}

TEST_CASE("empty and single-token documents segment trivially") {
    Corpus corpus;
    Document empty;
    empty.doc_id = "e";
    Document single;
    single.doc_id = "s";
    single.tokens = {corpus.vocab.intern("a")};
    single.origin_map = {0};
    corpus.docs = {empty, single};
    corpus.total_tokens = 1;
    PhraseCounter counter(PhraseCountMap{}, 1);
    auto partitions = segment_corpus(corpus, counter, {4.0, 1});
    CHECK(partitions[0].empty());
    REQUIRE(partitions[1].size() == 1);
    CHECK(partitions[1][0] == PhraseSpan{0, 1});

    Corpus none;
    CHECK(segment_corpus(none, counter, {4.0, 1}).empty());
}

TEST_CASE("partitions are valid and certified on random corpora") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        Corpus corpus = testing::random_corpus(rng, 8, 30, 5);
        if (corpus.total_tokens == 0) continue;
        std::uint64_t support = 1 + rng.uniform_int(5);
        PhraseCounter counter = mine(corpus, MiningOptions{MinSupport::absolute(support), 8, 1});
        SignificanceParams params{rng.uniform01() * 3.0, corpus.total_tokens};
        for (const Document& doc : corpus.docs) {
            std::vector<MergeRecord> log;
            Partition partition = segment_document(doc, counter, params, &log);
            CHECK(partition_valid(doc, partition, &counter));
            std::vector<TokenId> rebuilt;
            for (const PhraseSpan& span : partition)
                rebuilt.insert(rebuilt.end(), doc.tokens.begin() + span.begin,
                               doc.tokens.begin() + span.end);
            CHECK(rebuilt == doc.tokens);
            replay_certificate(doc, counter, params, log);
        }
    }
}

TEST_CASE("raising the threshold only truncates the merge sequence") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        Corpus corpus = testing::random_corpus(rng, 6, 30, 4);
        if (corpus.total_tokens == 0) continue;
        PhraseCounter counter = mine(corpus, MiningOptions{MinSupport::absolute(2), 8, 1});
        double low = rng.uniform01() * 1.5;
        double high = low + rng.uniform01() * 2.0;
        for (const Document& doc : corpus.docs) {
            std::vector<MergeRecord> log_low, log_high;
            segment_document(doc, counter, {low, corpus.total_tokens}, &log_low);
            Partition high_partition =
                segment_document(doc, counter, {high, corpus.total_tokens}, &log_high);
            REQUIRE(log_high.size() <= log_low.size());
            for (std::size_t i = 0; i < log_high.size(); ++i) {
                CHECK(log_high[i].left_begin == log_low[i].left_begin);
                CHECK(log_high[i].left_end == log_low[i].left_end);
                CHECK(log_high[i].right_end == log_low[i].right_end);
            }
            // no span under the higher threshold outgrows its low-threshold peer
            Partition low_partition = segment_document(doc, counter, {low, corpus.total_tokens});
            for (const PhraseSpan& h : high_partition)
                for (const PhraseSpan& l : low_partition)
                    if (h.begin == l.begin) CHECK(h.length() <= l.length());
        }
    }
}

TEST_CASE("multi-word spans always come from the counter") {
    Rng rng(31);
    Corpus corpus = testing::random_corpus(rng, 10, 25, 4);
    PhraseCounter counter = mine(corpus, MiningOptions{MinSupport::absolute(2), 6, 1});
    auto partitions = segment_corpus(corpus, counter, {0.0, corpus.total_tokens});
    for (std::size_t d = 0; d < partitions.size(); ++d)
        for (const PhraseSpan& span : partitions[d])
            if (span.length() > 1) {
                std::span<const TokenId> phrase(corpus.docs[d].tokens.data() + span.begin,
                                                span.length());
                CHECK(counter.count_of(phrase) >= counter.min_support());
            }
}
