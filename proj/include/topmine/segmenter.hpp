#pragma once

#include <cstdint>
#include <vector>

#include "topmine/corpus.hpp"
#include "topmine/phrase_miner.hpp"

namespace topmine {

struct SignificanceParams {
    double threshold = 4.0;         // merge cutoff in standard deviations
    std::uint64_t total_tokens = 0; // L
};

// Standardized deviation of the merged phrase's observed count from the
// count expected if the two parts were independent: mu0 = L p(P1) p(P2),
// variance estimated by the sample count f12. Returns -inf when f12 == 0,
// so unmined concatenations never merge.
double significance(std::uint64_t f1, std::uint64_t f2, std::uint64_t f12,
                    std::uint64_t total_tokens);

struct PhraseSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t length() const { return end - begin; }
    bool operator==(const PhraseSpan&) const = default;
};

// Ordered spans over doc.tokens; disjoint, within chunks, covering the
// document exactly.
using Partition = std::vector<PhraseSpan>;

struct MergeRecord {
    std::size_t left_begin = 0;
    std::size_t left_end = 0;   // == right_begin
    std::size_t right_end = 0;
    double score = 0.0;
};

// Bottom-up construction: start from singletons, repeatedly merge the
// adjacent pair with maximal significance (ties: leftmost, then longer
// combined span) while it clears the threshold. merge_log, when given,
// receives the executed merges in order for certificate replay.
Partition segment_document(const Document& doc, const PhraseCounter& counter,
                           const SignificanceParams& params,
                           std::vector<MergeRecord>* merge_log = nullptr);

std::vector<Partition> segment_corpus(const Corpus& corpus, const PhraseCounter& counter,
                                      const SignificanceParams& params, int threads = 1);

// Checks cover/disjoint/chunk-respect and that every multi-word span is a
// stored phrase; used by loaders and tests.
bool partition_valid(const Document& doc, const Partition& partition,
                     const PhraseCounter* counter = nullptr);

}  // namespace topmine
