#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "topmine/corpus.hpp"
#include "topmine/segmenter.hpp"

namespace topmine {

struct TopicModelConfig {
    std::uint32_t topics = 10;
    std::vector<double> alpha;       // per-topic Dirichlet parameter, size K
    double beta = 0.01;              // symmetric word prior...
    std::vector<double> beta_words;  // ...or a full per-word vector (index id-1)
    std::uint32_t iterations = 1000;
    std::uint32_t burn_in = 500;
    bool optimize_hyperparams = false;  // fixed-point alpha updates
    bool optimize_beta = false;         // symmetric beta update (ignored with beta_words)
    std::uint32_t optimize_interval = 50;
    std::uint64_t seed = 1;

    static TopicModelConfig symmetric(std::uint32_t topics, double alpha, double beta,
                                      std::uint32_t iterations, std::uint64_t seed);
    double beta_at(TokenId x) const { return beta_words.empty() ? beta : beta_words[x - 1]; }
    double beta_sum(std::size_t vocab_size) const;
};

// Returns human-readable violations; empty means the config is usable for
// the given vocabulary size.
std::vector<std::string> validate_model_config(const TopicModelConfig& config,
                                               std::size_t vocab_size);

// Collapsed state: one topic per clique (phrase instance), plus the three
// count matrices over the tokens the cliques expand to. Tokens carry no
// independent topic storage, so every state is legitimate by construction.
struct TopicModelState {
    std::vector<std::vector<std::uint32_t>> clique_topics;  // [d][g] in 0..K-1
    std::vector<std::uint64_t> topic_tokens;                // [k]
    std::vector<std::vector<std::uint64_t>> doc_topic;      // [d][k]
    std::vector<std::vector<std::uint64_t>> word_topic;     // [x][k], row 0 unused
};

struct TopicEstimates {
    std::vector<std::vector<double>> theta;  // D x K
    std::vector<std::vector<double>> phi;    // K x (V+1), column 0 unused
};

TopicModelState recount_state(const Corpus& corpus, const std::vector<Partition>& partitions,
                              const std::vector<std::vector<std::uint32_t>>& clique_topics,
                              std::uint32_t topics);
bool counts_match(const TopicModelState& a, const TopicModelState& b);

// Collapsed conditional over the K topic choices for clique (d, g), with the
// clique's own tokens already removed from the counts. Each of the clique's
// W tokens contributes one factor; the j-1 offsets land on the document and
// topic totals while the word numerator keeps the held-out count as is.
// Accumulated in log space.
void clique_logits(const TopicModelState& state, const TopicModelConfig& config,
                   double beta_sum, std::size_t doc_index,
                   std::span<const TokenId> clique_tokens, std::span<double> out);

// Normalized form of the above for external callers and oracle tests.
std::vector<double> clique_conditional(const TopicModelState& state,
                                       const TopicModelConfig& config, const Corpus& corpus,
                                       const std::vector<Partition>& partitions,
                                       std::size_t doc_index, std::size_t clique_index);

struct GibbsResult {
    TopicModelState state;       // clique_topics holds the final sweep's sample
    TopicEstimates estimates;
    TopicModelConfig config;     // hyperparameters after any optimization
};

using IterationHook =
    std::function<void(std::uint32_t iteration, const TopicModelState& state)>;

// Collapsed Gibbs sampling over clique assignments: uniform-random seeded
// init, then per iteration visit documents in corpus order and cliques left
// to right, resampling each clique from its collapsed conditional. With an
// all-singleton partition this is exactly token-level LDA.
GibbsResult gibbs_run(const Corpus& corpus, const std::vector<Partition>& partitions,
                      const TopicModelConfig& config, const IterationHook& hook = {});

// Log of the unnormalized closed-form joint over (Z, W) with theta and phi
// integrated out. Verifies the state's counts are recomputable from the
// assignments first and throws std::logic_error when they are not.
double log_joint(const TopicModelState& state, const TopicModelConfig& config,
                 const Corpus& corpus, const std::vector<Partition>& partitions);

// Fixed-point hyperparameter updates on alpha (and symmetric beta when
// enabled) from the current count matrices. Non-finite updates leave the
// config untouched and warn on stderr.
void optimize_hyperparameters(const TopicModelState& state, TopicModelConfig& config);

// One fixed-point step: alpha_k * (sum_d psi(n_dk + alpha_k) - D psi(alpha_k))
//                               / (sum_d psi(N_d + sum alpha) - D psi(sum alpha)),
// floored at 1e-8. Entries may be non-finite when every document is empty;
// the caller decides whether to keep them.
std::vector<double> alpha_fixed_point_step(
    const std::vector<std::vector<std::uint64_t>>& doc_topic, std::span<const double> doc_len,
    std::span<const double> alpha);

// Analogous step for a symmetric word prior over the word-topic counts.
double beta_fixed_point_step(const std::vector<std::vector<std::uint64_t>>& word_topic,
                             const std::vector<std::uint64_t>& topic_tokens, double beta);

TopicEstimates compute_estimates(const TopicModelState& state, const TopicModelConfig& config);

void save_checkpoint(const std::string& path, const GibbsResult& result, const Corpus& corpus);
// Verifies the vocabulary hash and that stored matrices match a recount of
// the stored assignments; throws std::runtime_error otherwise.
GibbsResult load_checkpoint(const std::string& path, const Corpus& corpus,
                            const std::vector<Partition>& partitions);

}  // namespace topmine
