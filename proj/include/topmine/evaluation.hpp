#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topmine/corpus.hpp"
#include "topmine/phrase_lda.hpp"

namespace topmine {

struct PerplexityConfig {
    std::vector<double> alpha;        // fold-in document prior, one entry per topic
    std::uint32_t fold_in_sweeps = 100;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct PerplexityResult {
    std::string model_name;
    std::uint64_t held_out_docs = 0;
    std::uint64_t held_out_tokens = 0;  // tokens actually scored
    std::uint64_t oov_skipped = 0;
    std::uint64_t all_oov_docs = 0;
    double log_likelihood = 0.0;
    double perplexity = 0.0;
    double bits = 0.0;  // log2(perplexity)
};

// Document-completion protocol: the first half of each held-out document is
// folded in by short Gibbs sweeps against the fixed phi, and the per-token
// predictive sum_k theta_k phi_k,x is scored on the second half. Per-document
// randomness is keyed off the document id, and per-document results are
// reduced in a canonical order, so the outcome does not depend on how the
// held-out set is ordered or sharded.
PerplexityResult perplexity(const std::vector<std::vector<double>>& phi,
                            const std::vector<const Document*>& held_out,
                            const PerplexityConfig& config, const std::string& model_name);

struct BenchRow {
    std::uint64_t tokens = 0;
    double mining_seconds = 0.0;    // frequent phrase mining + segmentation
    double modeling_seconds = 0.0;  // Gibbs sampling
};

struct BenchConfig {
    std::uint32_t topics = 10;
    std::uint32_t iterations = 2000;
    std::uint64_t seed = 7;
    double support_rate = 2e-3;
    std::uint64_t support_floor = 5;
    std::uint32_t max_phrase_len = 6;
    double threshold = 4.0;
    std::uint32_t mining_repeats = 5;  // median of repeats; modeling runs once
};

// Times the two pipeline phases separately on synthetic corpora of the
// requested token counts; phases run serially on a monotonic clock.
std::vector<BenchRow> runtime_decomposition(const std::vector<std::uint64_t>& sizes,
                                            const BenchConfig& config);

}  // namespace topmine
