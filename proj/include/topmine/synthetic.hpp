#pragma once

#include <cstdint>
#include <vector>

#include "topmine/corpus.hpp"
#include "topmine/segmenter.hpp"

namespace topmine {

// Generator for corpora drawn from a known phrase-topic model: each topic
// owns a block of the vocabulary and an inventory of multi-word phrases over
// that block; documents interleave phrase and unigram slots under a
// Dirichlet-drawn topic mixture.
struct SyntheticSpec {
    std::uint64_t target_tokens = 10000;
    std::uint32_t target_docs = 0;  // when nonzero, generates exactly this many documents
    std::uint32_t topics = 5;
    std::uint32_t vocab = 200;
    std::uint32_t phrases_per_topic = 12;
    std::uint32_t phrase_len_min = 2;
    std::uint32_t phrase_len_max = 3;
    double phrase_prob = 0.5;
    // Unigram slots escape their topic block with this probability, drawing
    // uniformly from the whole vocabulary. Keeps topics overlapping the way
    // real corpora do instead of perfectly separable.
    double background_prob = 0.0;
    // Each phrase word comes from the next topic's block with this
    // probability, making phrase words individually ambiguous between two
    // topics while the combination stays topic-specific. This is the
    // non-compositional regime where decomposing a phrase loses information.
    double phrase_cross_prob = 0.0;
    // Zipf-like unigram frequencies inside each block instead of uniform,
    // with phrase words drawn from the rare half of the block. Mass of rare
    // words then lives mostly in collocations, as it does in real text.
    bool zipf_unigrams = false;
    double doc_topic_concentration = 0.4;
    std::uint32_t min_slots_per_doc = 20;
    std::uint32_t max_slots_per_doc = 40;
    std::uint32_t slots_per_chunk = 8;
    std::uint64_t seed = 1;
};

struct SyntheticCorpus {
    Corpus corpus;
    // The generative phrase slots, i.e. the partition a perfect segmenter
    // would recover.
    std::vector<Partition> true_partitions;
    // Slot-level topic draws, usable as a reference assignment.
    std::vector<std::vector<std::uint32_t>> true_topics;
};

SyntheticCorpus generate_phrase_topic_corpus(const SyntheticSpec& spec);

}  // namespace topmine
