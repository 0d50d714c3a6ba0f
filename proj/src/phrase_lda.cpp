#include "topmine/phrase_lda.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "topmine/numerics.hpp"
#include "topmine/rng.hpp"
#include "topmine/util.hpp"

namespace topmine {

TopicModelConfig TopicModelConfig::symmetric(std::uint32_t topics, double alpha, double beta,
                                             std::uint32_t iterations, std::uint64_t seed) {
    TopicModelConfig config;
    config.topics = topics;
    config.alpha.assign(topics, alpha);
    config.beta = beta;
    config.iterations = iterations;
    config.burn_in = iterations / 2;
    config.seed = seed;
    return config;
}

double TopicModelConfig::beta_sum(std::size_t vocab_size) const {
    if (beta_words.empty()) return beta * static_cast<double>(vocab_size);
    double sum = 0.0;
    for (double b : beta_words) sum += b;
    return sum;
}

std::vector<std::string> validate_model_config(const TopicModelConfig& config,
                                               std::size_t vocab_size) {
    std::vector<std::string> problems;
    if (config.topics < 1) problems.push_back("topics must be >= 1");
    if (config.alpha.size() != config.topics)
        problems.push_back("alpha must have one entry per topic");
    for (double a : config.alpha)
        if (!(a > 0.0)) problems.push_back("alpha entries must be > 0");
    if (config.beta_words.empty()) {
        if (!(config.beta > 0.0)) problems.push_back("beta must be > 0");
    } else {
        if (config.beta_words.size() != vocab_size)
            problems.push_back("beta_words must have one entry per vocabulary word");
        for (double b : config.beta_words)
            if (!(b > 0.0)) problems.push_back("beta_words entries must be > 0");
    }
    if (config.iterations > 0 && config.burn_in >= config.iterations)
        problems.push_back("burn_in must be < iterations");
    return problems;
}

namespace {

void apply_clique(TopicModelState& state, std::size_t d, std::span<const TokenId> tokens,
                  std::uint32_t k, int direction) {
    auto& doc_row = state.doc_topic[d];
    for (TokenId w : tokens) {
        if (direction > 0) {
            ++state.word_topic[w][k];
            ++state.topic_tokens[k];
            ++doc_row[k];
        } else {
            --state.word_topic[w][k];
            --state.topic_tokens[k];
            --doc_row[k];
        }
    }
}

std::span<const TokenId> clique_span(const Document& doc, const PhraseSpan& span) {
    return {doc.tokens.data() + span.begin, span.length()};
}

}  // namespace

TopicModelState recount_state(const Corpus& corpus, const std::vector<Partition>& partitions,
                              const std::vector<std::vector<std::uint32_t>>& clique_topics,
                              std::uint32_t topics) {
    TopicModelState state;
    const std::size_t docs = corpus.docs.size();
    state.clique_topics = clique_topics;
    state.topic_tokens.assign(topics, 0);
    state.doc_topic.assign(docs, std::vector<std::uint64_t>(topics, 0));
    state.word_topic.assign(corpus.vocab.size() + 1, std::vector<std::uint64_t>(topics, 0));
    for (std::size_t d = 0; d < docs; ++d) {
        const Partition& partition = partitions[d];
        for (std::size_t g = 0; g < partition.size(); ++g)
            apply_clique(state, d, clique_span(corpus.docs[d], partition[g]),
                         clique_topics[d][g], +1);
    }
    return state;
}

bool counts_match(const TopicModelState& a, const TopicModelState& b) {
    return a.topic_tokens == b.topic_tokens && a.doc_topic == b.doc_topic &&
           a.word_topic == b.word_topic;
}

void clique_logits(const TopicModelState& state, const TopicModelConfig& config,
                   double beta_sum, std::size_t doc_index,
                   std::span<const TokenId> clique_tokens, std::span<double> out) {
    const auto& doc_row = state.doc_topic[doc_index];
    for (std::uint32_t k = 0; k < config.topics; ++k) {
        double nd = static_cast<double>(doc_row[k]);
        double nk = static_cast<double>(state.topic_tokens[k]);
        double acc = 0.0;
        for (std::size_t j = 0; j < clique_tokens.size(); ++j) {
            TokenId w = clique_tokens[j];
            double offset = static_cast<double>(j);
            acc += std::log(config.alpha[k] + nd + offset);
            acc += std::log(config.beta_at(w) + static_cast<double>(state.word_topic[w][k]));
            acc -= std::log(beta_sum + nk + offset);
        }
        out[k] = acc;
    }
}

std::vector<double> clique_conditional(const TopicModelState& state,
                                       const TopicModelConfig& config, const Corpus& corpus,
                                       const std::vector<Partition>& partitions,
                                       std::size_t doc_index, std::size_t clique_index) {
    std::vector<double> logits(config.topics);
    auto tokens = clique_span(corpus.docs[doc_index], partitions[doc_index][clique_index]);
    clique_logits(state, config, config.beta_sum(corpus.vocab.size()), doc_index, tokens,
                  logits);
    double mx = logits[0];
    for (double v : logits) mx = std::max(mx, v);
    double total = 0.0;
    std::vector<double> probs(config.topics);
    for (std::uint32_t k = 0; k < config.topics; ++k) {
        probs[k] = std::exp(logits[k] - mx);
        total += probs[k];
    }
    for (double& p : probs) p /= total;
    return probs;
}

GibbsResult gibbs_run(const Corpus& corpus, const std::vector<Partition>& partitions,
                      const TopicModelConfig& config, const IterationHook& hook) {
    auto problems = validate_model_config(config, corpus.vocab.size());
    if (!problems.empty()) throw std::invalid_argument("model config: " + problems.front());
    if (partitions.size() != corpus.docs.size())
        throw std::invalid_argument("partition count does not match corpus");

    GibbsResult result;
    result.config = config;
    TopicModelState& state = result.state;
    const std::uint32_t K = config.topics;
    const std::size_t docs = corpus.docs.size();
    state.clique_topics.resize(docs);
    state.topic_tokens.assign(K, 0);
    state.doc_topic.assign(docs, std::vector<std::uint64_t>(K, 0));
    state.word_topic.assign(corpus.vocab.size() + 1, std::vector<std::uint64_t>(K, 0));

    Rng rng(config.seed);
    for (std::size_t d = 0; d < docs; ++d) {
        const Partition& partition = partitions[d];
        state.clique_topics[d].resize(partition.size());
        for (std::size_t g = 0; g < partition.size(); ++g) {
            std::uint32_t k = rng.uniform_int(K);
            state.clique_topics[d][g] = k;
            apply_clique(state, d, clique_span(corpus.docs[d], partition[g]), k, +1);
        }
    }

    const double beta_sum = result.config.beta_sum(corpus.vocab.size());
    std::vector<double> logits(K);
    for (std::uint32_t iter = 1; iter <= config.iterations; ++iter) {
        for (std::size_t d = 0; d < docs; ++d) {
            const Partition& partition = partitions[d];
            for (std::size_t g = 0; g < partition.size(); ++g) {
                auto tokens = clique_span(corpus.docs[d], partition[g]);
                std::uint32_t old_k = state.clique_topics[d][g];
                apply_clique(state, d, tokens, old_k, -1);
                clique_logits(state, result.config, beta_sum, d, tokens, logits);
                std::uint32_t k = sample_from_logits(logits, rng.uniform01());
                state.clique_topics[d][g] = k;
                apply_clique(state, d, tokens, k, +1);
            }
        }
        if (hook) hook(iter, state);
        if (result.config.optimize_hyperparams && iter > config.burn_in &&
            config.optimize_interval > 0 &&
            (iter - config.burn_in) % config.optimize_interval == 0)
            optimize_hyperparameters(state, result.config);
    }

    result.estimates = compute_estimates(state, result.config);
    return result;
}

double log_joint(const TopicModelState& state, const TopicModelConfig& config,
                 const Corpus& corpus, const std::vector<Partition>& partitions) {
    TopicModelState recounted =
        recount_state(corpus, partitions, state.clique_topics, config.topics);
    if (!counts_match(state, recounted))
        throw std::logic_error("log_joint: counts are not consistent with assignments");

    const std::size_t V = corpus.vocab.size();
    const double beta_sum = config.beta_sum(V);
    double total = 0.0;
    for (std::uint32_t k = 0; k < config.topics; ++k) {
        for (std::size_t d = 0; d < corpus.docs.size(); ++d)
            total += std::lgamma(config.alpha[k] + static_cast<double>(state.doc_topic[d][k]));
        for (TokenId x = 1; x <= V; ++x)
            total += std::lgamma(config.beta_at(x) + static_cast<double>(state.word_topic[x][k]));
        total -= std::lgamma(beta_sum + static_cast<double>(state.topic_tokens[k]));
    }
    return total;
}

namespace {
constexpr double kHyperFloor = 1e-8;
}

std::vector<double> alpha_fixed_point_step(
    const std::vector<std::vector<std::uint64_t>>& doc_topic, std::span<const double> doc_len,
    std::span<const double> alpha) {
    const std::size_t docs = doc_topic.size();
    const std::size_t K = alpha.size();
    double alpha_sum = 0.0;
    for (double a : alpha) alpha_sum += a;
    double denom = 0.0;
    for (std::size_t d = 0; d < docs; ++d) denom += digamma(doc_len[d] + alpha_sum);
    denom -= static_cast<double>(docs) * digamma(alpha_sum);

    std::vector<double> next(K);
    for (std::size_t k = 0; k < K; ++k) {
        double numer = 0.0;
        for (std::size_t d = 0; d < docs; ++d)
            numer += digamma(static_cast<double>(doc_topic[d][k]) + alpha[k]);
        numer -= static_cast<double>(docs) * digamma(alpha[k]);
        double updated = alpha[k] * numer / denom;
        next[k] = std::isfinite(updated) ? std::max(kHyperFloor, updated) : updated;
    }
    return next;
}

double beta_fixed_point_step(const std::vector<std::vector<std::uint64_t>>& word_topic,
                             const std::vector<std::uint64_t>& topic_tokens, double beta) {
    const std::size_t V = word_topic.empty() ? 0 : word_topic.size() - 1;
    const std::size_t K = topic_tokens.size();
    double vb = static_cast<double>(V) * beta;
    double numer = 0.0;
    double denom = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        for (TokenId x = 1; x <= V; ++x) {
            std::uint64_t n = word_topic[x][k];
            if (n > 0) numer += digamma(static_cast<double>(n) + beta) - digamma(beta);
        }
        denom += digamma(static_cast<double>(topic_tokens[k]) + vb) - digamma(vb);
    }
    denom *= static_cast<double>(V);
    double updated = beta * numer / denom;
    return std::isfinite(updated) ? std::max(kHyperFloor, updated) : updated;
}

void optimize_hyperparameters(const TopicModelState& state, TopicModelConfig& config) {
    const std::size_t docs = state.doc_topic.size();
    const std::uint32_t K = config.topics;
    if (docs == 0 || K == 0) return;

    std::vector<double> doc_len(docs, 0.0);
    for (std::size_t d = 0; d < docs; ++d)
        for (std::uint32_t k = 0; k < K; ++k)
            doc_len[d] += static_cast<double>(state.doc_topic[d][k]);

    std::vector<double> alpha = config.alpha;
    bool ok = true;
    for (int round = 0; round < 100; ++round) {
        std::vector<double> next = alpha_fixed_point_step(state.doc_topic, doc_len, alpha);
        double max_rel = 0.0;
        for (std::uint32_t k = 0; k < K; ++k) {
            if (!std::isfinite(next[k])) {
                std::cerr << "topmine: alpha fixed-point update non-finite, keeping previous values\n";
                ok = false;
                break;
            }
            max_rel = std::max(max_rel, std::abs(next[k] - alpha[k]) / alpha[k]);
        }
        if (!ok) break;
        alpha = std::move(next);
        if (max_rel < 1e-6) break;
    }
    if (ok) config.alpha = std::move(alpha);

    if (!config.optimize_beta || !config.beta_words.empty()) return;
    if (state.word_topic.size() <= 1) return;
    double beta = config.beta;
    for (int round = 0; round < 100; ++round) {
        double updated = beta_fixed_point_step(state.word_topic, state.topic_tokens, beta);
        if (!std::isfinite(updated)) {
            std::cerr << "topmine: beta fixed-point update non-finite, keeping previous value\n";
            return;
        }
        double rel = std::abs(updated - beta) / beta;
        beta = updated;
        if (rel < 1e-6) break;
    }
    config.beta = beta;
}

TopicEstimates compute_estimates(const TopicModelState& state, const TopicModelConfig& config) {
    TopicEstimates est;
    const std::uint32_t K = config.topics;
    const std::size_t docs = state.doc_topic.size();
    const std::size_t V = state.word_topic.empty() ? 0 : state.word_topic.size() - 1;
    double alpha_sum = 0.0;
    for (double a : config.alpha) alpha_sum += a;
    const double beta_sum = config.beta_sum(V);

    est.theta.assign(docs, std::vector<double>(K, 0.0));
    for (std::size_t d = 0; d < docs; ++d) {
        double len = 0.0;
        for (std::uint32_t k = 0; k < K; ++k) len += static_cast<double>(state.doc_topic[d][k]);
        for (std::uint32_t k = 0; k < K; ++k)
            est.theta[d][k] =
                (static_cast<double>(state.doc_topic[d][k]) + config.alpha[k]) / (len + alpha_sum);
    }
    est.phi.assign(K, std::vector<double>(V + 1, 0.0));
    for (std::uint32_t k = 0; k < K; ++k) {
        double denom = beta_sum + static_cast<double>(state.topic_tokens[k]);
        for (TokenId x = 1; x <= V; ++x)
            est.phi[k][x] =
                (static_cast<double>(state.word_topic[x][k]) + config.beta_at(x)) / denom;
    }
    return est;
}

namespace {

nlohmann::json config_to_json(const TopicModelConfig& config) {
    nlohmann::json j;
    j["topics"] = config.topics;
    j["alpha"] = config.alpha;
    j["beta"] = config.beta;
    if (!config.beta_words.empty()) j["beta_words"] = config.beta_words;
    j["iterations"] = config.iterations;
    j["burn_in"] = config.burn_in;
    j["optimize_hyperparams"] = config.optimize_hyperparams;
    j["optimize_beta"] = config.optimize_beta;
    j["optimize_interval"] = config.optimize_interval;
    j["seed"] = config.seed;
    return j;
}

TopicModelConfig config_from_json(const nlohmann::json& j) {
    TopicModelConfig config;
    config.topics = j.at("topics").get<std::uint32_t>();
    config.alpha = j.at("alpha").get<std::vector<double>>();
    config.beta = j.at("beta").get<double>();
    if (j.contains("beta_words")) config.beta_words = j.at("beta_words").get<std::vector<double>>();
    config.iterations = j.at("iterations").get<std::uint32_t>();
    config.burn_in = j.at("burn_in").get<std::uint32_t>();
    config.optimize_hyperparams = j.at("optimize_hyperparams").get<bool>();
    config.optimize_beta = j.at("optimize_beta").get<bool>();
    config.optimize_interval = j.at("optimize_interval").get<std::uint32_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    return config;
}

std::string hash_hex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

void save_checkpoint(const std::string& path, const GibbsResult& result, const Corpus& corpus) {
    nlohmann::json j;
    j["format"] = "topmine.checkpoint.v1";
    j["config"] = config_to_json(result.config);
    j["vocab_hash"] = hash_hex(corpus.vocab.content_hash());
    j["clique_topics"] = result.state.clique_topics;
    j["topic_tokens"] = result.state.topic_tokens;
    j["doc_topic"] = result.state.doc_topic;
    j["word_topic"] = result.state.word_topic;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump() << '\n';
}

GibbsResult load_checkpoint(const std::string& path, const Corpus& corpus,
                            const std::vector<Partition>& partitions) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != std::string("topmine.checkpoint.v1"))
        throw std::runtime_error("unrecognized checkpoint format in " + path);
    if (j.at("vocab_hash").get<std::string>() != hash_hex(corpus.vocab.content_hash()))
        throw std::runtime_error("checkpoint vocabulary does not match corpus");

    GibbsResult result;
    result.config = config_from_json(j.at("config"));
    auto clique_topics = j.at("clique_topics").get<std::vector<std::vector<std::uint32_t>>>();
    result.state = recount_state(corpus, partitions, clique_topics, result.config.topics);

    TopicModelState stored;
    stored.topic_tokens = j.at("topic_tokens").get<std::vector<std::uint64_t>>();
    stored.doc_topic = j.at("doc_topic").get<std::vector<std::vector<std::uint64_t>>>();
    stored.word_topic = j.at("word_topic").get<std::vector<std::vector<std::uint64_t>>>();
    stored.clique_topics = result.state.clique_topics;
    if (!counts_match(result.state, stored))
        throw std::runtime_error("checkpoint count matrices fail consistency recheck");
    result.estimates = compute_estimates(result.state, result.config);
    return result;
}

}  // namespace topmine
