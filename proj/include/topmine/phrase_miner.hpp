#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "topmine/corpus.hpp"
#include "topmine/util.hpp"

namespace topmine {

struct PhraseHash {
    using is_transparent = void;
    std::size_t operator()(std::span<const TokenId> key) const noexcept {
        return static_cast<std::size_t>(fnv1a64(key.data(), key.size() * sizeof(TokenId)));
    }
    std::size_t operator()(const std::vector<TokenId>& key) const noexcept {
        return (*this)(std::span<const TokenId>(key));
    }
};

struct PhraseEq {
    using is_transparent = void;
    template <class A, class B>
    bool operator()(const A& a, const B& b) const noexcept {
        return std::equal(std::begin(a), std::end(a), std::begin(b), std::end(b)) &&
               std::size(a) == std::size(b);
    }
};

using PhraseCountMap = std::unordered_map<std::vector<TokenId>, std::uint64_t, PhraseHash, PhraseEq>;

// Minimum support: either an absolute count, or a rate that grows with the
// corpus so that eps = max(floor, ceil(rate * L)).
struct MinSupport {
    static MinSupport absolute(std::uint64_t count) { return {false, 0.0, count, 1}; }
    static MinSupport rate(double rho, std::uint64_t floor = 1) { return {true, rho, 0, floor}; }

    std::uint64_t resolve(std::uint64_t total_tokens) const;

    bool is_rate = false;
    double rho = 0.0;
    std::uint64_t count = 5;
    std::uint64_t floor = 1;
};

class PhraseCounter {
public:
    PhraseCounter() = default;
    PhraseCounter(PhraseCountMap counts, std::uint64_t min_support)
        : counts_(std::move(counts)), min_support_(min_support) {}

    // Stored corpus frequency f(P); 0 for unstored (or empty) phrases.
    std::uint64_t count_of(std::span<const TokenId> phrase) const {
        if (phrase.empty()) return 0;
        auto it = counts_.find(phrase);
        return it == counts_.end() ? 0 : it->second;
    }

    std::uint64_t min_support() const { return min_support_; }
    std::size_t size() const { return counts_.size(); }
    const PhraseCountMap& entries() const { return counts_; }

private:
    PhraseCountMap counts_;
    std::uint64_t min_support_ = 0;
};

struct MiningOptions {
    MinSupport support = MinSupport::absolute(5);
    // Bounds memory on adversarial input; must exceed any phrase length the
    // downstream consumers care about.
    std::uint32_t max_phrase_len = 6;
    int threads = 1;
};

struct MiningStats {
    // Per document: the phrase length n at which its active set emptied,
    // guaranteeing it holds no frequent phrase of length >= n. 0 means the
    // document was still live when the length cap ended the scan.
    std::vector<std::uint32_t> dropped_at_length;
    std::uint32_t rounds = 0;
    std::uint64_t resolved_support = 0;
};

// Frequent contiguous phrase mining over document chunks. Returns exact
// corpus frequencies for every within-chunk token sequence with frequency
// >= eps, up to the length cap. Output is a pure function of (corpus, eps):
// multi-threaded runs shard documents per length round and merge counters at
// the round barrier, which only reorders integer additions.
PhraseCounter mine(const Corpus& corpus, const MiningOptions& options,
                   MiningStats* stats = nullptr);

}  // namespace topmine
