#include "topmine/corpus.hpp"

#include <algorithm>
#include <cctype>

#include "topmine/util.hpp"

namespace topmine {

TokenId Vocabulary::intern(const std::string& word) {
    auto it = word_to_id_.find(word);
    if (it != word_to_id_.end()) return it->second;
    TokenId id = static_cast<TokenId>(id_to_word_.size());
    word_to_id_.emplace(word, id);
    id_to_word_.push_back(word);
    return id;
}

TokenId Vocabulary::id_of(const std::string& word) const {
    auto it = word_to_id_.find(word);
    return it == word_to_id_.end() ? 0 : it->second;
}

std::uint64_t Vocabulary::content_hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 1; i < id_to_word_.size(); ++i) {
        h = fnv1a64(id_to_word_[i], h);
        h = fnv1a64("\x1f", 1, h);
    }
    return h;
}

std::vector<std::pair<std::size_t, std::size_t>> chunk_spans(const Document& doc) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    if (doc.tokens.empty()) return spans;
    std::size_t lo = 0;
    for (std::size_t b : doc.chunk_bounds) {
        spans.emplace_back(lo, b);
        lo = b;
    }
    spans.emplace_back(lo, doc.tokens.size());
    return spans;
}

std::vector<std::uint32_t> chunk_ids(const Document& doc) {
    std::vector<std::uint32_t> ids(doc.tokens.size());
    std::uint32_t cur = 0;
    std::size_t next_bound = 0;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        while (next_bound < doc.chunk_bounds.size() && doc.chunk_bounds[next_bound] == i) {
            ++cur;
            ++next_bound;
        }
        ids[i] = cur;
    }
    return ids;
}

bool valid_utf8(const std::string& text) {
    const auto* p = reinterpret_cast<const unsigned char*>(text.data());
    std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        unsigned char c = p[i];
        std::size_t len;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0) len = 4;
        else return false;
        if (i + len > n) return false;
        for (std::size_t j = 1; j < len; ++j)
            if ((p[i + j] & 0xC0) != 0x80) return false;
        if (len == 2 && c < 0xC2) return false;                      // overlong
        if (len == 3 && c == 0xE0 && p[i + 1] < 0xA0) return false;  // overlong
        if (len == 3 && c == 0xED && p[i + 1] >= 0xA0) return false; // surrogate
        if (len == 4 && c == 0xF0 && p[i + 1] < 0x90) return false;  // overlong
        if (len == 4 && (c > 0xF4 || (c == 0xF4 && p[i + 1] >= 0x90))) return false;
        i += len;
    }
    return true;
}

namespace {

bool is_chunk_punct(unsigned char c) {
    switch (c) {
        case '.': case ',': case ';': case ':': case '?': case '!':
        case '(': case ')':
            return true;
        default:
            return false;
    }
}

bool is_token_char(unsigned char c) {
    if (c >= 0x80) return true;  // multi-byte UTF-8 stays inside tokens
    return std::isalnum(c) || c == '\'' || c == '-' || c == '_';
}

std::string ascii_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (static_cast<unsigned char>(c) < 0x80)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

struct FilteredDoc {
    std::vector<std::string> raw_tokens;
    std::vector<std::string> kept_words;       // normalized surface forms
    std::vector<std::size_t> chunk_bounds;
    std::vector<std::size_t> origin_map;
};

FilteredDoc filter_document(const RawDocument& raw, const IngestOptions& options) {
    FilteredDoc out;
    std::vector<std::uint8_t> break_before;
    tokenize_raw(raw.text, out.raw_tokens, break_before);

    bool pending_break = false;
    for (std::size_t r = 0; r < out.raw_tokens.size(); ++r) {
        if (break_before[r]) pending_break = true;
        std::string word = options.lowercase ? ascii_lower(out.raw_tokens[r]) : out.raw_tokens[r];
        if (options.remove_stopwords && options.stopwords.count(word)) {
            pending_break = true;
            continue;
        }
        if (options.normalizer) word = options.normalizer(word);
        if (word.empty()) {
            pending_break = true;
            continue;
        }
        if (pending_break && !out.kept_words.empty())
            out.chunk_bounds.push_back(out.kept_words.size());
        pending_break = false;
        out.kept_words.push_back(std::move(word));
        out.origin_map.push_back(r);
    }
    return out;
}

}  // namespace

void tokenize_raw(const std::string& text, std::vector<std::string>& raw_tokens,
                  std::vector<std::uint8_t>& break_before) {
    raw_tokens.clear();
    break_before.assign(1, 0);
    std::string cur;
    bool pending = false;
    auto flush = [&] {
        if (!cur.empty()) {
            raw_tokens.push_back(cur);
            break_before.back() = pending ? 1 : 0;
            break_before.push_back(0);
            pending = false;
            cur.clear();
        }
    };
    for (unsigned char c : text) {
        if (is_token_char(c)) {
            cur.push_back(static_cast<char>(c));
        } else {
            flush();
            if (is_chunk_punct(c)) pending = true;
        }
    }
    flush();
    if (pending && !break_before.empty()) break_before.back() = 1;
}

Corpus ingest(const std::vector<RawDocument>& raw_docs, const IngestOptions& options,
              std::vector<std::vector<std::string>>* raw_tokens_out, int threads) {
    for (const auto& raw : raw_docs)
        if (!valid_utf8(raw.text))
            throw DecodeError("invalid UTF-8 in document '" + raw.id + "'");

    std::vector<FilteredDoc> filtered(raw_docs.size());
    parallel_for(raw_docs.size(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            filtered[i] = filter_document(raw_docs[i], options);
    });

    // Second pass interns words sequentially so ids depend only on input order.
    Corpus corpus;
    corpus.docs.resize(raw_docs.size());
    if (raw_tokens_out) raw_tokens_out->resize(raw_docs.size());
    for (std::size_t i = 0; i < raw_docs.size(); ++i) {
        Document& doc = corpus.docs[i];
        doc.doc_id = raw_docs[i].id;
        doc.tokens.reserve(filtered[i].kept_words.size());
        for (const auto& w : filtered[i].kept_words)
            doc.tokens.push_back(corpus.vocab.intern(w));
        doc.chunk_bounds = std::move(filtered[i].chunk_bounds);
        doc.origin_map = std::move(filtered[i].origin_map);
        corpus.total_tokens += doc.tokens.size();
        if (raw_tokens_out) (*raw_tokens_out)[i] = std::move(filtered[i].raw_tokens);
    }
    return corpus;
}

std::string render_phrase(const Document& doc, std::size_t begin, std::size_t end,
                          const std::vector<std::string>& raw_tokens) {
    if (begin >= end || end > doc.tokens.size())
        throw std::out_of_range("phrase span [" + std::to_string(begin) + ", " +
                                std::to_string(end) + ") out of bounds in document '" +
                                doc.doc_id + "'");
    std::size_t raw_lo = doc.origin_map.at(begin);
    std::size_t raw_hi = doc.origin_map.at(end - 1);
    std::string out;
    for (std::size_t r = raw_lo; r <= raw_hi; ++r) {
        if (!out.empty()) out.push_back(' ');
        out += raw_tokens.at(r);
    }
    return out;
}

const std::unordered_set<std::string>& default_stopwords() {
    static const std::unordered_set<std::string> words = {
        "a", "about", "above", "after", "again", "all", "also", "am", "an", "and",
        "any", "are", "as", "at", "be", "because", "been", "before", "being",
        "below", "between", "both", "but", "by", "can", "could", "did", "do",
        "does", "doing", "down", "during", "each", "few", "for", "from",
        "further", "had", "has", "have", "having", "he", "her", "here", "hers",
        "him", "his", "how", "i", "if", "in", "into", "is", "it", "its",
        "itself", "just", "me", "more", "most", "my", "no", "nor", "not", "now",
        "of", "off", "on", "once", "only", "or", "other", "our", "ours", "out",
        "over", "own", "s", "same", "she", "should", "so", "some", "such", "t",
        "than", "that", "the", "their", "theirs", "them", "then", "there",
        "these", "they", "this", "those", "through", "to", "too", "under",
        "until", "up", "very", "was", "we", "were", "what", "when", "where",
        "which", "while", "who", "whom", "why", "will", "with", "would", "you",
        "your", "yours",
    };
    return words;
}

}  // namespace topmine
