#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace topmine {

using TokenId = std::uint32_t;  // dense ids 1..V; 0 is reserved as "no word"

class Vocabulary {
public:
    Vocabulary() : id_to_word_(1) {}

    TokenId intern(const std::string& word);
    TokenId id_of(const std::string& word) const;  // 0 when absent
    const std::string& word(TokenId id) const { return id_to_word_.at(id); }
    std::size_t size() const { return id_to_word_.size() - 1; }  // V

    const std::vector<std::string>& words() const { return id_to_word_; }
    std::uint64_t content_hash() const;

private:
    std::unordered_map<std::string, TokenId> word_to_id_;
    std::vector<std::string> id_to_word_;  // slot 0 unused
};

struct Document {
    std::string doc_id;
    std::vector<TokenId> tokens;
    // Interior split positions in (0, tokens.size()), strictly increasing.
    // Chunks are the maximal runs between consecutive bounds; phrases never
    // cross them.
    std::vector<std::size_t> chunk_bounds;
    // For each kept token, its index in the raw (unfiltered) token stream.
    std::vector<std::size_t> origin_map;
};

struct Corpus {
    std::vector<Document> docs;
    Vocabulary vocab;
    std::uint64_t total_tokens = 0;  // L
};

// Chunks of a document as [begin, end) spans covering all tokens.
std::vector<std::pair<std::size_t, std::size_t>> chunk_spans(const Document& doc);
// Chunk index per token position.
std::vector<std::uint32_t> chunk_ids(const Document& doc);

struct RawDocument {
    std::string id;
    std::string text;
};

struct IngestOptions {
    bool lowercase = true;
    bool remove_stopwords = true;
    std::unordered_set<std::string> stopwords;
    // Optional word normalizer (e.g. a stemmer); identity when unset.
    // An empty result drops the token like a stop word.
    std::function<std::string(const std::string&)> normalizer;
};

class DecodeError : public std::runtime_error {
public:
    explicit DecodeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Splits text into raw surface tokens; phrase-invariant punctuation
// (. , ; : ? ! and parentheses) records a break between adjacent tokens.
// break_before has raw_tokens.size()+1 entries. Throws DecodeError on
// invalid UTF-8.
void tokenize_raw(const std::string& text, std::vector<std::string>& raw_tokens,
                  std::vector<std::uint8_t>& break_before);

// Builds the filtered, chunked corpus. Vocabulary ids are assigned in first
// appearance order over documents, so output is deterministic for any thread
// count. raw_tokens_out, when given, receives the unfiltered token stream per
// document (needed later to render phrases with their stop words back in).
Corpus ingest(const std::vector<RawDocument>& raw_docs, const IngestOptions& options,
              std::vector<std::vector<std::string>>* raw_tokens_out = nullptr,
              int threads = 1);

// Original surface text covering a span of kept tokens, including interior
// raw tokens (stop words) that were filtered out. Span is [begin, end) over
// doc.tokens; throws std::out_of_range when it does not fit.
std::string render_phrase(const Document& doc, std::size_t begin, std::size_t end,
                          const std::vector<std::string>& raw_tokens);

// Words removed before mining when no stop-word file is supplied.
const std::unordered_set<std::string>& default_stopwords();

bool valid_utf8(const std::string& text);

}  // namespace topmine
