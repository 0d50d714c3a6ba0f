#include "topmine/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "topmine/phrase_miner.hpp"
#include "topmine/rng.hpp"
#include "topmine/synthetic.hpp"
#include "topmine/util.hpp"

namespace topmine {

namespace {

struct DocScore {
    std::string doc_id;
    double log_likelihood = 0.0;
    std::uint64_t scored = 0;
    std::uint64_t oov = 0;
    bool all_oov = false;
};

DocScore score_document(const Document& doc, const std::vector<std::vector<double>>& phi,
                        const PerplexityConfig& config) {
    const std::uint32_t K = static_cast<std::uint32_t>(phi.size());
    const std::size_t V = phi.empty() ? 0 : phi.front().size() - 1;
    DocScore out;
    out.doc_id = doc.doc_id;

    std::vector<TokenId> valid;
    valid.reserve(doc.tokens.size());
    for (TokenId w : doc.tokens) {
        if (w >= 1 && w <= V) valid.push_back(w);
        else ++out.oov;
    }
    if (valid.empty()) {
        out.all_oov = !doc.tokens.empty();
        return out;
    }

    double alpha_sum = 0.0;
    for (double a : config.alpha) alpha_sum += a;

    // Fold in the first half with phi frozen.
    const std::size_t fold_len = valid.size() / 2;
    Rng rng(config.seed ^ fnv1a64(doc.doc_id));
    std::vector<std::uint32_t> z(fold_len);
    std::vector<std::uint64_t> n(K, 0);
    for (std::size_t i = 0; i < fold_len; ++i) {
        z[i] = rng.uniform_int(K);
        ++n[z[i]];
    }
    std::vector<double> weights(K);
    for (std::uint32_t sweep = 0; sweep < config.fold_in_sweeps; ++sweep) {
        for (std::size_t i = 0; i < fold_len; ++i) {
            TokenId w = valid[i];
            --n[z[i]];
            for (std::uint32_t k = 0; k < K; ++k)
                weights[k] = (config.alpha[k] + static_cast<double>(n[k])) * phi[k][w];
            z[i] = sample_from_weights(weights, rng.uniform01());
            ++n[z[i]];
        }
    }
    std::vector<double> theta(K);
    for (std::uint32_t k = 0; k < K; ++k)
        theta[k] = (static_cast<double>(n[k]) + config.alpha[k]) /
                   (static_cast<double>(fold_len) + alpha_sum);

    for (std::size_t i = fold_len; i < valid.size(); ++i) {
        TokenId w = valid[i];
        double p = 0.0;
        for (std::uint32_t k = 0; k < K; ++k) p += theta[k] * phi[k][w];
        out.log_likelihood += std::log(p);
        ++out.scored;
    }
    return out;
}

}  // namespace

PerplexityResult perplexity(const std::vector<std::vector<double>>& phi,
                            const std::vector<const Document*>& held_out,
                            const PerplexityConfig& config, const std::string& model_name) {
    if (held_out.empty()) throw std::invalid_argument("perplexity: empty held-out set");
    if (phi.empty() || config.alpha.size() != phi.size())
        throw std::invalid_argument("perplexity: alpha must have one entry per topic");

    std::vector<DocScore> scores(held_out.size());
    parallel_for(held_out.size(), config.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            scores[i] = score_document(*held_out[i], phi, config);
    });
    // Canonical reduce order makes the sum independent of input ordering.
    std::stable_sort(scores.begin(), scores.end(), [](const DocScore& a, const DocScore& b) {
        if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
        return a.log_likelihood < b.log_likelihood;
    });

    PerplexityResult result;
    result.model_name = model_name;
    result.held_out_docs = held_out.size();
    for (const DocScore& s : scores) {
        result.log_likelihood += s.log_likelihood;
        result.held_out_tokens += s.scored;
        result.oov_skipped += s.oov;
        result.all_oov_docs += s.all_oov ? 1 : 0;
    }
    if (result.held_out_tokens > 0) {
        result.perplexity =
            std::exp(-result.log_likelihood / static_cast<double>(result.held_out_tokens));
        result.bits = std::log2(result.perplexity);
    } else {
        result.perplexity = std::numeric_limits<double>::quiet_NaN();
        result.bits = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

std::vector<BenchRow> runtime_decomposition(const std::vector<std::uint64_t>& sizes,
                                            const BenchConfig& config) {
    using clock = std::chrono::steady_clock;
    std::vector<BenchRow> rows;
    rows.reserve(sizes.size());
    for (std::uint64_t size : sizes) {
        SyntheticSpec spec;
        spec.target_tokens = size;
        spec.seed = config.seed;
        auto synth = generate_phrase_topic_corpus(spec);
        const Corpus& corpus = synth.corpus;

        MiningOptions mining;
        mining.support = MinSupport::rate(config.support_rate, config.support_floor);
        mining.max_phrase_len = config.max_phrase_len;

        BenchRow row;
        row.tokens = corpus.total_tokens;
        std::vector<Partition> partitions;
        std::vector<double> samples;
        std::uint32_t repeats = std::max<std::uint32_t>(1, config.mining_repeats);
        for (std::uint32_t r = 0; r < repeats; ++r) {
            auto t0 = clock::now();
            PhraseCounter counter = mine(corpus, mining);
            SignificanceParams params{config.threshold, corpus.total_tokens};
            partitions = segment_corpus(corpus, counter, params);
            auto t1 = clock::now();
            samples.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        std::sort(samples.begin(), samples.end());
        row.mining_seconds = samples[samples.size() / 2];

        if (!corpus.docs.empty()) {
            auto model = TopicModelConfig::symmetric(config.topics, 50.0 / config.topics, 0.01,
                                                     config.iterations, config.seed);
            auto t0 = clock::now();
            gibbs_run(corpus, partitions, model);
            auto t1 = clock::now();
            row.modeling_seconds = std::chrono::duration<double>(t1 - t0).count();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace topmine
