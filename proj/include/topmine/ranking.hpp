#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "topmine/corpus.hpp"
#include "topmine/phrase_lda.hpp"
#include "topmine/segmenter.hpp"

namespace topmine {

using PhraseTokens = std::vector<TokenId>;
// Ordered map keeps iteration deterministic for report building.
using TopicalFrequency = std::map<std::pair<PhraseTokens, std::uint32_t>, std::uint64_t>;

// Indicator-sum over the final sample: how many instances of each phrase
// were assigned to each topic.
TopicalFrequency topical_frequency(const Corpus& corpus,
                                   const std::vector<Partition>& partitions,
                                   const std::vector<std::vector<std::uint32_t>>& assignments);

struct RankedPhrase {
    PhraseTokens tokens;
    std::string display;
    std::uint64_t tf = 0;
};

struct TopicReport {
    std::uint32_t topic = 0;
    std::vector<RankedPhrase> phrases;                    // multi-word, TF desc
    std::vector<std::pair<std::string, double>> words;    // probability desc
};

using PhraseRenderer = std::function<std::string(const PhraseTokens&)>;

// Per-topic visualization: top_n words by estimated probability and top_n
// multi-word phrases by topical frequency. Ties break lexicographically on
// the space-joined vocabulary words.
std::vector<TopicReport> report(const TopicEstimates& estimates, const TopicalFrequency& tf,
                                const Vocabulary& vocab, std::uint32_t top_n,
                                const PhraseRenderer& renderer = {});

std::string join_vocab_words(const Vocabulary& vocab, const PhraseTokens& tokens);

}  // namespace topmine
