#include "topmine/phrase_miner.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace topmine {

std::uint64_t MinSupport::resolve(std::uint64_t total_tokens) const {
    std::uint64_t eps;
    if (is_rate) {
        auto scaled = static_cast<std::uint64_t>(std::ceil(rho * static_cast<double>(total_tokens)));
        eps = std::max(floor, scaled);
    } else {
        eps = count;
    }
    if (eps == 0) throw std::invalid_argument("minimum support must be >= 1");
    return eps;
}

namespace {

struct DocScan {
    std::vector<std::uint32_t> active;  // sorted candidate start positions
    std::vector<std::uint32_t> chunk;   // chunk id per token position
    bool alive = true;
};

// One document, one length round: keep positions whose length-(n-1) phrase is
// frequent, count every length-n phrase whose two overlapping sub-phrases
// both survived, then retire the last surviving index (it can never start a
// longer phrase: if its length-n phrase were frequent, the next position
// would also have survived).
void round_for_doc(const Document& doc, DocScan& scan, std::uint32_t n,
                   std::uint64_t eps, const PhraseCountMap& previous,
                   PhraseCountMap& fresh, std::uint32_t* dropped_at) {
    std::vector<std::uint32_t> survivors;
    survivors.reserve(scan.active.size());
    std::vector<TokenId> key;
    key.reserve(n);
    for (std::uint32_t pos : scan.active) {
        key.assign(doc.tokens.begin() + pos, doc.tokens.begin() + pos + (n - 1));
        auto it = previous.find(key);
        if (it != previous.end() && it->second >= eps) survivors.push_back(pos);
    }
    for (std::size_t j = 0; j + 1 < survivors.size(); ++j) {
        std::uint32_t pos = survivors[j];
        if (survivors[j + 1] != pos + 1) continue;
        // Frequency of the two sub-phrases says nothing about where THIS
        // occurrence sits, so the whole span must be checked against the
        // chunk map (ids are monotone, endpoints suffice).
        if (scan.chunk[pos] != scan.chunk[pos + n - 1]) continue;
        key.assign(doc.tokens.begin() + pos, doc.tokens.begin() + pos + n);
        ++fresh[key];
    }
    if (!survivors.empty()) survivors.pop_back();
    scan.active = std::move(survivors);
    if (scan.active.empty()) {
        scan.alive = false;
        *dropped_at = n;
    }
}

}  // namespace

PhraseCounter mine(const Corpus& corpus, const MiningOptions& options, MiningStats* stats) {
    const std::uint64_t eps = options.support.resolve(corpus.total_tokens);
    if (options.max_phrase_len == 0)
        throw std::invalid_argument("max phrase length must be >= 1");

    std::vector<DocScan> scans(corpus.docs.size());
    std::vector<std::uint32_t> dropped(corpus.docs.size(), 0);
    PhraseCountMap counts;

    // Length-1 pass: every position is active.
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
        const Document& doc = corpus.docs[d];
        DocScan& scan = scans[d];
        scan.chunk = chunk_ids(doc);
        scan.active.resize(doc.tokens.size());
        std::vector<TokenId> key(1);
        for (std::uint32_t i = 0; i < doc.tokens.size(); ++i) {
            scan.active[i] = i;
            key[0] = doc.tokens[i];
            ++counts[key];
        }
        if (doc.tokens.empty()) {
            scan.alive = false;
            dropped[d] = 2;
        }
    }

    std::uint32_t rounds = 1;
    for (std::uint32_t n = 2; n <= options.max_phrase_len; ++n) {
        std::vector<std::size_t> live;
        for (std::size_t d = 0; d < scans.size(); ++d)
            if (scans[d].alive) live.push_back(d);
        if (live.empty()) break;
        rounds = n;

        if (options.threads <= 1) {
            for (std::size_t d : live)
                round_for_doc(corpus.docs[d], scans[d], n, eps, counts, counts, &dropped[d]);
        } else {
            // Workers read the previous round's counts and accumulate this
            // round's into private maps; the merge at the barrier keeps
            // output identical to the single-threaded scan.
            std::vector<PhraseCountMap> partial;
            std::mutex mu;
            parallel_for(live.size(), options.threads, [&](std::size_t lo, std::size_t hi) {
                PhraseCountMap local;
                for (std::size_t j = lo; j < hi; ++j) {
                    std::size_t d = live[j];
                    round_for_doc(corpus.docs[d], scans[d], n, eps, counts, local, &dropped[d]);
                }
                std::lock_guard<std::mutex> lock(mu);
                partial.push_back(std::move(local));
            });
            for (auto& local : partial)
                for (auto& [phrase, c] : local) counts[phrase] += c;
        }
    }

    // Candidates counted on the way up that never reached support.
    for (auto it = counts.begin(); it != counts.end();)
        it = it->second < eps ? counts.erase(it) : std::next(it);

    if (stats) {
        stats->dropped_at_length = std::move(dropped);
        stats->rounds = rounds;
        stats->resolved_support = eps;
    }
    return PhraseCounter(std::move(counts), eps);
}

}  // namespace topmine
