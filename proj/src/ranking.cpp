#include "topmine/ranking.hpp"

#include <algorithm>
#include <stdexcept>

namespace topmine {

TopicalFrequency topical_frequency(const Corpus& corpus,
                                   const std::vector<Partition>& partitions,
                                   const std::vector<std::vector<std::uint32_t>>& assignments) {
    if (partitions.size() != corpus.docs.size() || assignments.size() != corpus.docs.size())
        throw std::invalid_argument("topical_frequency: per-document inputs do not line up");
    TopicalFrequency tf;
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
        const Document& doc = corpus.docs[d];
        for (std::size_t g = 0; g < partitions[d].size(); ++g) {
            const PhraseSpan& span = partitions[d][g];
            PhraseTokens phrase(doc.tokens.begin() + span.begin, doc.tokens.begin() + span.end);
            ++tf[{std::move(phrase), assignments[d][g]}];
        }
    }
    return tf;
}

std::string join_vocab_words(const Vocabulary& vocab, const PhraseTokens& tokens) {
    std::string out;
    for (TokenId id : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += vocab.word(id);
    }
    return out;
}

std::vector<TopicReport> report(const TopicEstimates& estimates, const TopicalFrequency& tf,
                                const Vocabulary& vocab, std::uint32_t top_n,
                                const PhraseRenderer& renderer) {
    if (top_n < 1) throw std::invalid_argument("report: top_n must be >= 1");
    const std::size_t topics = estimates.phi.size();
    std::vector<TopicReport> reports(topics);

    struct Entry {
        std::string sort_key;
        RankedPhrase ranked;
    };
    std::vector<std::vector<Entry>> by_topic(topics);
    for (const auto& [key, count] : tf) {
        const auto& [tokens, topic] = key;
        if (tokens.size() < 2 || count == 0 || topic >= topics) continue;
        Entry e;
        e.sort_key = join_vocab_words(vocab, tokens);
        e.ranked.tokens = tokens;
        e.ranked.display = renderer ? renderer(tokens) : e.sort_key;
        e.ranked.tf = count;
        by_topic[topic].push_back(std::move(e));
    }

    const std::size_t vocab_size = vocab.size();
    for (std::size_t k = 0; k < topics; ++k) {
        TopicReport& rep = reports[k];
        rep.topic = static_cast<std::uint32_t>(k);

        auto& entries = by_topic[k];
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.ranked.tf != b.ranked.tf) return a.ranked.tf > b.ranked.tf;
            return a.sort_key < b.sort_key;
        });
        for (std::size_t i = 0; i < entries.size() && i < top_n; ++i)
            rep.phrases.push_back(std::move(entries[i].ranked));

        std::vector<std::pair<std::string, double>> words;
        words.reserve(vocab_size);
        for (TokenId x = 1; x <= vocab_size; ++x)
            words.emplace_back(vocab.word(x), estimates.phi[k][x]);
        std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (words.size() > top_n) words.resize(top_n);
        rep.words = std::move(words);
    }
    return reports;
}

}  // namespace topmine
