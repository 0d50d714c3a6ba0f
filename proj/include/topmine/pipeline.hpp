#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topmine/corpus.hpp"
#include "topmine/evaluation.hpp"
#include "topmine/phrase_lda.hpp"
#include "topmine/phrase_miner.hpp"
#include "topmine/ranking.hpp"
#include "topmine/segmenter.hpp"

namespace topmine {

// Declarative run description; CLI flags override individual fields and the
// TOPMINE_WORKDIR environment variable overrides workdir.
struct PipelineConfig {
    std::string input;
    std::string input_format = "jsonl";  // or "text": one document per line
    std::string workdir = "out";
    int threads = 1;

    bool lowercase = true;
    bool remove_stopwords = true;
    std::string stopwords_file;  // empty -> built-in list

    MinSupport support = MinSupport::absolute(5);
    std::uint32_t max_phrase_len = 6;

    double threshold = 4.0;

    std::uint32_t topics = 10;
    std::vector<double> alpha;     // explicit per-topic values...
    double alpha_symmetric = 0.5;  // ...or this value for every topic
    double beta = 0.01;
    std::uint32_t iterations = 1000;
    std::uint32_t burn_in = 500;
    bool optimize_hyperparams = false;
    bool optimize_beta = false;
    std::uint32_t optimize_interval = 50;
    std::uint64_t seed = 0;
    bool seed_set = false;  // seeds are mandatory; no wall-clock fallback

    std::uint32_t top_n = 10;

    double holdout = 0.1;
    std::uint32_t folds = 1;
    std::uint32_t fold_in_sweeps = 100;

    TopicModelConfig model_config() const;
};

PipelineConfig load_pipeline_config(const std::string& path);

// Pure validation: human-readable violations, empty when runnable.
std::vector<std::string> validate_config(const PipelineConfig& config);

enum class Stage { kIngest, kMine, kSegment, kTrain, kTopics, kPerplexity };

// Parses one of: ingest, mine, segment, train, topics, perplexity.
bool parse_stage(const std::string& name, Stage* out);

struct ExitCode {
    static constexpr int kOk = 0;
    static constexpr int kStageFailure = 1;
    static constexpr int kMissingInput = 2;
};

// Runs ingest..up_to in order. Each stage reads only on-disk artifacts of
// earlier stages and publishes its own by atomic rename, leaving a .partial
// file behind on failure.
int run_pipeline(const PipelineConfig& config, Stage up_to = Stage::kPerplexity);

// Individual stages, usable for resuming. Artifact names under workdir:
// corpus.json, phrases.tsv, segments.jsonl, model.json, topics.tsv,
// topics.txt, metrics.csv.
void stage_ingest(const PipelineConfig& config);
void stage_mine(const PipelineConfig& config);
void stage_segment(const PipelineConfig& config);
void stage_train(const PipelineConfig& config);
void stage_topics(const PipelineConfig& config);
void stage_perplexity(const PipelineConfig& config);

// --- artifact IO -----------------------------------------------------------

struct CorpusArtifact {
    Corpus corpus;
    std::vector<std::vector<std::string>> raw_tokens;
};

void save_corpus_artifact(const std::string& path, const CorpusArtifact& artifact);
CorpusArtifact load_corpus_artifact(const std::string& path);

void write_phrases_tsv(const std::string& path, const PhraseCounter& counter,
                       const Vocabulary& vocab);
PhraseCounter load_phrases_tsv(const std::string& path, const Vocabulary& vocab,
                               std::uint64_t min_support);

void write_segments_jsonl(const std::string& path, const Corpus& corpus,
                          const std::vector<Partition>& partitions);
std::vector<Partition> load_segments_jsonl(const std::string& path, const Corpus& corpus);

void write_topics_tsv(const std::string& path, const std::vector<TopicReport>& reports);
void write_topics_table(const std::string& path, const std::vector<TopicReport>& reports);
void write_metrics_csv(const std::string& path, const std::vector<PerplexityResult>& rows,
                       const std::vector<std::uint32_t>& fold_of_row);

std::vector<RawDocument> read_jsonl_documents(const std::string& path);
std::vector<RawDocument> read_text_documents(const std::string& path);
std::unordered_set<std::string> load_stopword_file(const std::string& path);

}  // namespace topmine
