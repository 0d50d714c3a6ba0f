#include "topmine/segmenter.hpp"

#include <cmath>
#include <limits>
#include <queue>

#include "topmine/util.hpp"

namespace topmine {

double significance(std::uint64_t f1, std::uint64_t f2, std::uint64_t f12,
                    std::uint64_t total_tokens) {
    if (f12 == 0) return -std::numeric_limits<double>::infinity();
    double expected = static_cast<double>(f1) * static_cast<double>(f2) /
                      static_cast<double>(total_tokens);
    return (static_cast<double>(f12) - expected) / std::sqrt(static_cast<double>(f12));
}

namespace {

struct Candidate {
    double score;
    std::size_t left_begin;
    std::size_t combined_len;
    std::size_t left_slot;
    std::size_t right_slot;
};

// Max-heap order: higher score first, then leftmost pair, then the longer
// combined span.
struct CandidateWorse {
    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.score != b.score) return a.score < b.score;
        if (a.left_begin != b.left_begin) return a.left_begin > b.left_begin;
        return a.combined_len < b.combined_len;
    }
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

}  // namespace

Partition segment_document(const Document& doc, const PhraseCounter& counter,
                           const SignificanceParams& params,
                           std::vector<MergeRecord>* merge_log) {
    if (merge_log) merge_log->clear();
    Partition partition;
    if (doc.tokens.empty()) return partition;

    // Span slots in a doubly linked list; merges retire both operands and
    // append a fresh slot, so heap entries naming dead slots are skipped
    // when popped instead of being decrease-keyed.
    std::vector<std::size_t> begin_of, end_of, prev_of, next_of;
    std::vector<std::uint8_t> alive;
    auto new_slot = [&](std::size_t b, std::size_t e) {
        begin_of.push_back(b);
        end_of.push_back(e);
        prev_of.push_back(kNone);
        next_of.push_back(kNone);
        alive.push_back(1);
        return begin_of.size() - 1;
    };

    std::priority_queue<Candidate, std::vector<Candidate>, CandidateWorse> heap;
    std::vector<TokenId> key;

    auto pair_score = [&](std::size_t l, std::size_t r) {
        key.assign(doc.tokens.begin() + begin_of[l], doc.tokens.begin() + end_of[r]);
        std::uint64_t f12 = counter.count_of(key);
        if (f12 == 0) return -std::numeric_limits<double>::infinity();
        std::uint64_t f1 = counter.count_of(
            std::span<const TokenId>(doc.tokens.data() + begin_of[l], end_of[l] - begin_of[l]));
        std::uint64_t f2 = counter.count_of(
            std::span<const TokenId>(doc.tokens.data() + begin_of[r], end_of[r] - begin_of[r]));
        return significance(f1, f2, f12, params.total_tokens);
    };
    auto push_pair = [&](std::size_t l, std::size_t r) {
        double s = pair_score(l, r);
        if (std::isinf(s) && s < 0) return;  // unmined concatenation, can never merge
        heap.push({s, begin_of[l], end_of[r] - begin_of[l], l, r});
    };

    std::size_t head = kNone;
    std::size_t tail = kNone;
    auto ids = chunk_ids(doc);
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        std::size_t slot = new_slot(i, i + 1);
        if (tail != kNone) {
            next_of[tail] = slot;
            prev_of[slot] = tail;
            if (ids[i - 1] == ids[i]) push_pair(tail, slot);
        } else {
            head = slot;
        }
        tail = slot;
    }

    while (!heap.empty()) {
        Candidate best = heap.top();
        heap.pop();
        if (!alive[best.left_slot] || !alive[best.right_slot]) continue;
        if (next_of[best.left_slot] != best.right_slot) continue;
        if (best.score < params.threshold) break;

        if (merge_log)
            merge_log->push_back({begin_of[best.left_slot], end_of[best.left_slot],
                                  end_of[best.right_slot], best.score});

        std::size_t merged = new_slot(begin_of[best.left_slot], end_of[best.right_slot]);
        std::size_t left_nb = prev_of[best.left_slot];
        std::size_t right_nb = next_of[best.right_slot];
        alive[best.left_slot] = 0;
        alive[best.right_slot] = 0;
        prev_of[merged] = left_nb;
        next_of[merged] = right_nb;
        if (left_nb != kNone) next_of[left_nb] = merged;
        else head = merged;
        if (right_nb != kNone) prev_of[right_nb] = merged;
        if (left_nb != kNone && ids[end_of[left_nb] - 1] == ids[begin_of[merged]])
            push_pair(left_nb, merged);
        if (right_nb != kNone && ids[end_of[merged] - 1] == ids[begin_of[right_nb]])
            push_pair(merged, right_nb);
    }

    for (std::size_t s = head; s != kNone; s = next_of[s])
        partition.push_back({begin_of[s], end_of[s]});
    return partition;
}

std::vector<Partition> segment_corpus(const Corpus& corpus, const PhraseCounter& counter,
                                      const SignificanceParams& params, int threads) {
    std::vector<Partition> partitions(corpus.docs.size());
    parallel_for(corpus.docs.size(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t d = lo; d < hi; ++d)
            partitions[d] = segment_document(corpus.docs[d], counter, params);
    });
    return partitions;
}

bool partition_valid(const Document& doc, const Partition& partition,
                     const PhraseCounter* counter) {
    std::size_t expect = 0;
    auto ids = chunk_ids(doc);
    for (const PhraseSpan& span : partition) {
        if (span.begin != expect || span.end <= span.begin || span.end > doc.tokens.size())
            return false;
        if (ids[span.begin] != ids[span.end - 1]) return false;
        if (counter && span.length() > 1) {
            std::span<const TokenId> phrase(doc.tokens.data() + span.begin, span.length());
            if (counter->count_of(phrase) == 0) return false;
        }
        expect = span.end;
    }
    return expect == doc.tokens.size();
}

}  // namespace topmine
