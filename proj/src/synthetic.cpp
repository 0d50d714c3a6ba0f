#include "topmine/synthetic.hpp"

#include <cstdio>

#include "topmine/rng.hpp"

namespace topmine {

SyntheticCorpus generate_phrase_topic_corpus(const SyntheticSpec& spec) {
    SyntheticCorpus out;
    Corpus& corpus = out.corpus;
    char buf[32];
    for (std::uint32_t x = 1; x <= spec.vocab; ++x) {
        std::snprintf(buf, sizeof(buf), "w%04u", x);
        corpus.vocab.intern(buf);
    }
    if ((spec.target_tokens == 0 && spec.target_docs == 0) || spec.topics == 0 ||
        spec.vocab < spec.topics)
        return out;

    Rng rng(spec.seed);
    const std::uint32_t K = spec.topics;
    const std::uint32_t block = spec.vocab / K;

    // Phrase inventories: lengths alternate 2/3, words distinct within a
    // phrase and drawn from the owning topic's vocabulary block (or its
    // neighbor's, under phrase_cross_prob).
    std::vector<std::vector<std::vector<TokenId>>> inventory(K);
    auto block_range = [&](std::uint32_t k, TokenId* lo, std::uint32_t* span) {
        *lo = k * block + 1;
        *span = (k + 1 == K) ? spec.vocab - k * block : block;
    };
    const std::uint32_t len_spread = spec.phrase_len_max - spec.phrase_len_min + 1;
    for (std::uint32_t k = 0; k < K; ++k) {
        for (std::uint32_t p = 0; p < spec.phrases_per_topic; ++p) {
            std::size_t len = spec.phrase_len_min + (p % len_spread);
            std::vector<TokenId> phrase;
            while (phrase.size() < len) {
                std::uint32_t source = k;
                if (spec.phrase_cross_prob > 0.0 && rng.uniform01() < spec.phrase_cross_prob)
                    source = (k + 1) % K;
                TokenId lo;
                std::uint32_t span;
                block_range(source, &lo, &span);
                if (spec.zipf_unigrams && span > 1) {
                    // rare half of the block
                    lo += span / 2;
                    span -= span / 2;
                }
                TokenId w = lo + rng.uniform_int(span);
                bool dup = false;
                for (TokenId seen : phrase) dup |= (seen == w);
                if (!dup) phrase.push_back(w);
            }
            inventory[k].push_back(std::move(phrase));
        }
    }

    // Per-block unigram sampling weights (harmonic decay when zipf).
    std::vector<std::vector<double>> unigram_weights(K);
    for (std::uint32_t k = 0; k < K; ++k) {
        TokenId lo;
        std::uint32_t span;
        block_range(k, &lo, &span);
        unigram_weights[k].resize(span);
        for (std::uint32_t r = 0; r < span; ++r)
            unigram_weights[k][r] = spec.zipf_unigrams ? 1.0 / (1.0 + r) : 1.0;
    }

    std::vector<double> dir_alpha(K, spec.doc_topic_concentration);
    std::uint64_t emitted = 0;
    std::size_t doc_index = 0;
    auto more = [&] {
        return spec.target_docs > 0 ? doc_index < spec.target_docs
                                    : emitted < spec.target_tokens;
    };
    while (more()) {
        Document doc;
        std::snprintf(buf, sizeof(buf), "synth-%05zu", doc_index++);
        doc.doc_id = buf;
        Partition partition;
        std::vector<std::uint32_t> topics;

        auto theta = rng.dirichlet(dir_alpha);
        std::uint32_t slots = spec.min_slots_per_doc +
                              rng.uniform_int(spec.max_slots_per_doc - spec.min_slots_per_doc + 1);
        for (std::uint32_t s = 0; s < slots; ++s) {
            if (s > 0 && spec.slots_per_chunk > 0 && s % spec.slots_per_chunk == 0)
                doc.chunk_bounds.push_back(doc.tokens.size());
            std::uint32_t z = sample_from_weights(theta, rng.uniform01());
            std::size_t begin = doc.tokens.size();
            if (rng.uniform01() < spec.phrase_prob) {
                const auto& phrase = inventory[z][rng.uniform_int(spec.phrases_per_topic)];
                doc.tokens.insert(doc.tokens.end(), phrase.begin(), phrase.end());
            } else if (spec.background_prob > 0.0 && rng.uniform01() < spec.background_prob) {
                doc.tokens.push_back(1 + rng.uniform_int(spec.vocab));
            } else {
                TokenId lo;
                std::uint32_t span;
                block_range(z, &lo, &span);
                std::uint32_t r = sample_from_weights(unigram_weights[z], rng.uniform01());
                (void)span;
                doc.tokens.push_back(lo + r);
            }
            partition.push_back({begin, doc.tokens.size()});
            topics.push_back(z);
        }
        doc.origin_map.resize(doc.tokens.size());
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) doc.origin_map[i] = i;
        emitted += doc.tokens.size();
        corpus.total_tokens += doc.tokens.size();
        corpus.docs.push_back(std::move(doc));
        out.true_partitions.push_back(std::move(partition));
        out.true_topics.push_back(std::move(topics));
    }
    return out;
}

}  // namespace topmine
