#include "topmine/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "topmine/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace topmine {

namespace {

std::string workdir_path(const PipelineConfig& config, const char* name) {
    return (fs::path(config.workdir) / name).string();
}

// Stages publish artifacts by writing <name>.partial and renaming once the
// writer ran to completion, so an interrupted stage never leaves a final
// artifact behind.
void write_atomic(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    fs::create_directories(fs::path(path).parent_path());
    std::string partial = path + ".partial";
    {
        std::ofstream out(partial, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + partial);
        writer(out);
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + partial);
    }
    fs::rename(partial, path);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return in;
}

}  // namespace

TopicModelConfig PipelineConfig::model_config() const {
    TopicModelConfig model;
    model.topics = topics;
    model.alpha = alpha.empty() ? std::vector<double>(topics, alpha_symmetric) : alpha;
    model.beta = beta;
    model.iterations = iterations;
    model.burn_in = burn_in;
    model.optimize_hyperparams = optimize_hyperparams;
    model.optimize_beta = optimize_beta;
    model.optimize_interval = optimize_interval;
    model.seed = seed;
    return model;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    auto in = open_input(path);
    json j = json::parse(in);
    PipelineConfig c;
    c.input = j.value("input", c.input);
    c.input_format = j.value("input_format", c.input_format);
    c.workdir = j.value("workdir", c.workdir);
    c.threads = j.value("threads", c.threads);
    if (j.contains("ingest")) {
        const auto& ji = j["ingest"];
        c.lowercase = ji.value("lowercase", c.lowercase);
        c.remove_stopwords = ji.value("remove_stopwords", c.remove_stopwords);
        c.stopwords_file = ji.value("stopwords_file", c.stopwords_file);
    }
    if (j.contains("mining")) {
        const auto& jm = j["mining"];
        if (jm.contains("support_rate"))
            c.support = MinSupport::rate(jm["support_rate"].get<double>(),
                                         jm.value("support_floor", std::uint64_t{1}));
        else if (jm.contains("min_support"))
            c.support = MinSupport::absolute(jm["min_support"].get<std::uint64_t>());
        c.max_phrase_len = jm.value("max_phrase_len", c.max_phrase_len);
    }
    if (j.contains("segmentation"))
        c.threshold = j["segmentation"].value("threshold", c.threshold);
    if (j.contains("model")) {
        const auto& jm = j["model"];
        c.topics = jm.value("topics", c.topics);
        if (jm.contains("alpha")) {
            if (jm["alpha"].is_array()) c.alpha = jm["alpha"].get<std::vector<double>>();
            else c.alpha_symmetric = jm["alpha"].get<double>();
        }
        c.beta = jm.value("beta", c.beta);
        c.iterations = jm.value("iterations", c.iterations);
        c.burn_in = jm.contains("burn_in") ? jm["burn_in"].get<std::uint32_t>()
                                           : c.iterations / 2;
        c.optimize_hyperparams = jm.value("optimize_hyperparams", c.optimize_hyperparams);
        c.optimize_beta = jm.value("optimize_beta", c.optimize_beta);
        c.optimize_interval = jm.value("optimize_interval", c.optimize_interval);
        if (jm.contains("seed")) {
            c.seed = jm["seed"].get<std::uint64_t>();
            c.seed_set = true;
        }
    }
    if (j.contains("report")) c.top_n = j["report"].value("top_n", c.top_n);
    if (j.contains("evaluation")) {
        const auto& je = j["evaluation"];
        c.holdout = je.value("holdout", c.holdout);
        c.folds = je.value("folds", c.folds);
        c.fold_in_sweeps = je.value("fold_in_sweeps", c.fold_in_sweeps);
    }
    if (const char* env = std::getenv("TOPMINE_WORKDIR"); env && *env) c.workdir = env;
    return c;
}

std::vector<std::string> validate_config(const PipelineConfig& config) {
    std::vector<std::string> v;
    if (config.input.empty())
        v.push_back("input: no input file configured");
    else if (!fs::exists(config.input))
        v.push_back("input: missing file " + config.input);
    if (config.input_format != "jsonl" && config.input_format != "text")
        v.push_back("input_format: must be jsonl or text");
    if (!config.stopwords_file.empty() && !fs::exists(config.stopwords_file))
        v.push_back("ingest: missing stop-word file " + config.stopwords_file);
    if (config.threads < 1) v.push_back("threads: must be >= 1");

    if (config.support.is_rate) {
        if (!(config.support.rho > 0.0))
            v.push_back("phrase_miner precondition: support rate must be > 0");
        if (config.support.floor < 1)
            v.push_back("phrase_miner precondition: support floor must be >= 1 (eps >= 1)");
    } else if (config.support.count < 1) {
        v.push_back("phrase_miner precondition: min_support must be >= 1 (eps >= 1)");
    }
    if (config.max_phrase_len < 1) v.push_back("mining: max_phrase_len must be >= 1");
    if (!std::isfinite(config.threshold)) v.push_back("segmentation: threshold must be finite");

    if (config.topics < 1) v.push_back("model: topics must be >= 1");
    if (!config.alpha.empty() && config.alpha.size() != config.topics)
        v.push_back("model: alpha vector must have one entry per topic");
    for (double a : config.alpha)
        if (!(a > 0.0)) v.push_back("model: alpha entries must be > 0");
    if (config.alpha.empty() && !(config.alpha_symmetric > 0.0))
        v.push_back("model: alpha must be > 0");
    if (!(config.beta > 0.0)) v.push_back("model: beta must be > 0");
    if (config.iterations > 0 && config.burn_in >= config.iterations)
        v.push_back("model: burn_in must be < iterations");
    if (!config.seed_set) v.push_back("model: seed is required (runs must be reproducible)");

    if (config.top_n < 1) v.push_back("report: top_n must be >= 1");
    if (!(config.holdout > 0.0 && config.holdout < 1.0))
        v.push_back("evaluation: holdout must be in (0, 1)");
    if (config.folds < 1) v.push_back("evaluation: folds must be >= 1");
    return v;
}

bool parse_stage(const std::string& name, Stage* out) {
    static const std::map<std::string, Stage> names = {
        {"ingest", Stage::kIngest},   {"mine", Stage::kMine},
        {"segment", Stage::kSegment}, {"train", Stage::kTrain},
        {"topics", Stage::kTopics},   {"perplexity", Stage::kPerplexity},
    };
    auto it = names.find(name);
    if (it == names.end()) return false;
    *out = it->second;
    return true;
}

// --- artifact IO -------------------------------------------------------------

void save_corpus_artifact(const std::string& path, const CorpusArtifact& artifact) {
    write_atomic(path, [&](std::ostream& out) {
        json j;
        j["format"] = "topmine.corpus.v1";
        json words = json::array();
        for (std::size_t id = 1; id <= artifact.corpus.vocab.size(); ++id)
            words.push_back(artifact.corpus.vocab.word(static_cast<TokenId>(id)));
        j["vocab"] = std::move(words);
        json docs = json::array();
        for (std::size_t d = 0; d < artifact.corpus.docs.size(); ++d) {
            const Document& doc = artifact.corpus.docs[d];
            json jd;
            jd["id"] = doc.doc_id;
            jd["tokens"] = doc.tokens;
            jd["chunk_bounds"] = doc.chunk_bounds;
            jd["origin_map"] = doc.origin_map;
            jd["raw_tokens"] = artifact.raw_tokens[d];
            docs.push_back(std::move(jd));
        }
        j["docs"] = std::move(docs);
        out << j.dump() << '\n';
    });
}

CorpusArtifact load_corpus_artifact(const std::string& path) {
    auto in = open_input(path);
    json j = json::parse(in);
    if (j.value("format", "") != std::string("topmine.corpus.v1"))
        throw std::runtime_error("unrecognized corpus artifact: " + path);
    CorpusArtifact artifact;
    for (const auto& w : j.at("vocab")) artifact.corpus.vocab.intern(w.get<std::string>());
    for (const auto& jd : j.at("docs")) {
        Document doc;
        doc.doc_id = jd.at("id").get<std::string>();
        doc.tokens = jd.at("tokens").get<std::vector<TokenId>>();
        doc.chunk_bounds = jd.at("chunk_bounds").get<std::vector<std::size_t>>();
        doc.origin_map = jd.at("origin_map").get<std::vector<std::size_t>>();
        artifact.corpus.total_tokens += doc.tokens.size();
        artifact.corpus.docs.push_back(std::move(doc));
        artifact.raw_tokens.push_back(jd.at("raw_tokens").get<std::vector<std::string>>());
    }
    return artifact;
}

void write_phrases_tsv(const std::string& path, const PhraseCounter& counter,
                       const Vocabulary& vocab) {
    std::vector<std::pair<std::string, std::uint64_t>> rows;
    rows.reserve(counter.size());
    for (const auto& [tokens, count] : counter.entries())
        rows.emplace_back(join_vocab_words(vocab, tokens), count);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    write_atomic(path, [&](std::ostream& out) {
        for (const auto& [phrase, count] : rows) out << phrase << '\t' << count << '\n';
    });
}

PhraseCounter load_phrases_tsv(const std::string& path, const Vocabulary& vocab,
                               std::uint64_t min_support) {
    auto in = open_input(path);
    PhraseCountMap counts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto tab = line.rfind('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected phrase<TAB>count");
        std::vector<TokenId> tokens;
        std::istringstream words(line.substr(0, tab));
        std::string word;
        while (words >> word) {
            TokenId id = vocab.id_of(word);
            if (id == 0)
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": word not in corpus vocabulary: " + word);
            tokens.push_back(id);
        }
        counts[tokens] = std::stoull(line.substr(tab + 1));
    }
    return PhraseCounter(std::move(counts), min_support);
}

void write_segments_jsonl(const std::string& path, const Corpus& corpus,
                          const std::vector<Partition>& partitions) {
    write_atomic(path, [&](std::ostream& out) {
        for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
            const Document& doc = corpus.docs[d];
            json phrases = json::array();
            for (const PhraseSpan& span : partitions[d]) {
                json words = json::array();
                for (std::size_t i = span.begin; i < span.end; ++i)
                    words.push_back(corpus.vocab.word(doc.tokens[i]));
                phrases.push_back(std::move(words));
            }
            json j;
            j["id"] = doc.doc_id;
            j["phrases"] = std::move(phrases);
            out << j.dump() << '\n';
        }
    });
}

std::vector<Partition> load_segments_jsonl(const std::string& path, const Corpus& corpus) {
    auto in = open_input(path);
    std::vector<Partition> partitions;
    std::string line;
    std::size_t d = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (d >= corpus.docs.size())
            throw std::runtime_error(path + ": more segment rows than corpus documents");
        const Document& doc = corpus.docs[d];
        json j = json::parse(line);
        if (j.at("id").get<std::string>() != doc.doc_id)
            throw std::runtime_error(path + ": document order does not match corpus at " +
                                     doc.doc_id);
        Partition partition;
        std::size_t pos = 0;
        for (const auto& phrase : j.at("phrases")) {
            std::size_t begin = pos;
            for (const auto& w : phrase) {
                TokenId id = corpus.vocab.id_of(w.get<std::string>());
                if (pos >= doc.tokens.size() || id == 0 || doc.tokens[pos] != id)
                    throw std::runtime_error(path + ": segments do not reconstruct document " +
                                             doc.doc_id);
                ++pos;
            }
            partition.push_back({begin, pos});
        }
        if (pos != doc.tokens.size())
            throw std::runtime_error(path + ": segments do not cover document " + doc.doc_id);
        partitions.push_back(std::move(partition));
        ++d;
    }
    if (d != corpus.docs.size())
        throw std::runtime_error(path + ": fewer segment rows than corpus documents");
    return partitions;
}

void write_topics_tsv(const std::string& path, const std::vector<TopicReport>& reports) {
    write_atomic(path, [&](std::ostream& out) {
        out << "topic\trank\tkind\ttext\tscore\n";
        for (const TopicReport& rep : reports) {
            for (std::size_t i = 0; i < rep.words.size(); ++i)
                out << rep.topic << '\t' << i + 1 << "\tword\t" << rep.words[i].first << '\t'
                    << format_double(rep.words[i].second) << '\n';
            for (std::size_t i = 0; i < rep.phrases.size(); ++i)
                out << rep.topic << '\t' << i + 1 << "\tphrase\t" << rep.phrases[i].display
                    << '\t' << rep.phrases[i].tf << '\n';
        }
    });
}

void write_topics_table(const std::string& path, const std::vector<TopicReport>& reports) {
    write_atomic(path, [&](std::ostream& out) {
        for (const TopicReport& rep : reports) {
            out << "=== Topic " << rep.topic << " ===\n";
            std::size_t rows = std::max(rep.words.size(), rep.phrases.size());
            std::size_t width = 12;
            for (const auto& [word, _] : rep.words) width = std::max(width, word.size() + 2);
            for (std::size_t i = 0; i < rows; ++i) {
                std::string left = i < rep.words.size() ? rep.words[i].first : "";
                left.resize(width, ' ');
                out << "  " << left;
                if (i < rep.phrases.size())
                    out << rep.phrases[i].display << " (" << rep.phrases[i].tf << ")";
                out << '\n';
            }
            out << '\n';
        }
    });
}

void write_metrics_csv(const std::string& path, const std::vector<PerplexityResult>& rows,
                       const std::vector<std::uint32_t>& fold_of_row) {
    write_atomic(path, [&](std::ostream& out) {
        out << "model,fold,held_out_docs,held_out_tokens,oov_skipped,all_oov_docs,"
               "log_likelihood,perplexity,bits\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const PerplexityResult& r = rows[i];
            out << r.model_name << ',' << fold_of_row[i] << ',' << r.held_out_docs << ','
                << r.held_out_tokens << ',' << r.oov_skipped << ',' << r.all_oov_docs << ','
                << format_double(r.log_likelihood) << ',' << format_double(r.perplexity) << ','
                << format_double(r.bits) << '\n';
        }
    });
}

std::vector<RawDocument> read_jsonl_documents(const std::string& path) {
    auto in = open_input(path);
    std::vector<RawDocument> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("id") || !j.contains("text"))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected {\"id\":..., \"text\":...}");
        docs.push_back({j["id"].get<std::string>(), j["text"].get<std::string>()});
    }
    return docs;
}

std::vector<RawDocument> read_text_documents(const std::string& path) {
    auto in = open_input(path);
    std::vector<RawDocument> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        docs.push_back({std::to_string(line_no), line});
    }
    return docs;
}

std::unordered_set<std::string> load_stopword_file(const std::string& path) {
    auto in = open_input(path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) words.insert(line);
    }
    return words;
}

// --- stages ------------------------------------------------------------------

namespace {

IngestOptions ingest_options(const PipelineConfig& config) {
    IngestOptions options;
    options.lowercase = config.lowercase;
    options.remove_stopwords = config.remove_stopwords;
    if (config.remove_stopwords)
        options.stopwords = config.stopwords_file.empty()
                                ? default_stopwords()
                                : load_stopword_file(config.stopwords_file);
    return options;
}

std::vector<RawDocument> read_input(const PipelineConfig& config) {
    return config.input_format == "text" ? read_text_documents(config.input)
                                         : read_jsonl_documents(config.input);
}

Partition singleton_partition(const Document& doc) {
    Partition partition;
    partition.reserve(doc.tokens.size());
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) partition.push_back({i, i + 1});
    return partition;
}

}  // namespace

void stage_ingest(const PipelineConfig& config) {
    CorpusArtifact artifact;
    artifact.corpus =
        ingest(read_input(config), ingest_options(config), &artifact.raw_tokens, config.threads);
    save_corpus_artifact(workdir_path(config, "corpus.json"), artifact);
    std::cout << "[ingest] " << artifact.corpus.docs.size() << " documents, "
              << artifact.corpus.total_tokens << " tokens, V=" << artifact.corpus.vocab.size()
              << "\n";
}

void stage_mine(const PipelineConfig& config) {
    auto artifact = load_corpus_artifact(workdir_path(config, "corpus.json"));
    MiningOptions options;
    options.support = config.support;
    options.max_phrase_len = config.max_phrase_len;
    options.threads = config.threads;
    MiningStats stats;
    PhraseCounter counter = mine(artifact.corpus, options, &stats);
    write_phrases_tsv(workdir_path(config, "phrases.tsv"), counter, artifact.corpus.vocab);
    std::cout << "[mine] " << counter.size() << " frequent phrases (eps="
              << stats.resolved_support << ", rounds=" << stats.rounds << ")\n";
}

void stage_segment(const PipelineConfig& config) {
    auto artifact = load_corpus_artifact(workdir_path(config, "corpus.json"));
    std::uint64_t eps = config.support.resolve(artifact.corpus.total_tokens);
    PhraseCounter counter =
        load_phrases_tsv(workdir_path(config, "phrases.tsv"), artifact.corpus.vocab, eps);
    SignificanceParams params{config.threshold, artifact.corpus.total_tokens};
    auto partitions = segment_corpus(artifact.corpus, counter, params, config.threads);
    write_segments_jsonl(workdir_path(config, "segments.jsonl"), artifact.corpus, partitions);
    std::uint64_t multi = 0;
    for (const auto& partition : partitions)
        for (const auto& span : partition) multi += span.length() > 1;
    std::cout << "[segment] " << multi << " multi-word phrase instances (threshold="
              << config.threshold << ")\n";
}

void stage_train(const PipelineConfig& config) {
    auto artifact = load_corpus_artifact(workdir_path(config, "corpus.json"));
    auto partitions =
        load_segments_jsonl(workdir_path(config, "segments.jsonl"), artifact.corpus);
    GibbsResult result = gibbs_run(artifact.corpus, partitions, config.model_config());
    save_checkpoint(workdir_path(config, "model.json"), result, artifact.corpus);
    std::cout << "[train] " << config.topics << " topics, " << config.iterations
              << " iterations (seed=" << config.seed << ")\n";
}

void stage_topics(const PipelineConfig& config) {
    auto artifact = load_corpus_artifact(workdir_path(config, "corpus.json"));
    auto partitions =
        load_segments_jsonl(workdir_path(config, "segments.jsonl"), artifact.corpus);
    GibbsResult result =
        load_checkpoint(workdir_path(config, "model.json"), artifact.corpus, partitions);

    auto tf = topical_frequency(artifact.corpus, partitions, result.state.clique_topics);

    // Display form of each phrase: the most frequent raw rendering among its
    // instances (stop words reinserted), ties to the lexicographically first.
    std::map<PhraseTokens, std::map<std::string, std::uint64_t>> renderings;
    for (std::size_t d = 0; d < artifact.corpus.docs.size(); ++d) {
        const Document& doc = artifact.corpus.docs[d];
        for (const PhraseSpan& span : partitions[d]) {
            if (span.length() < 2) continue;
            PhraseTokens tokens(doc.tokens.begin() + span.begin, doc.tokens.begin() + span.end);
            ++renderings[tokens][render_phrase(doc, span.begin, span.end, artifact.raw_tokens[d])];
        }
    }
    PhraseRenderer renderer = [&](const PhraseTokens& tokens) {
        auto it = renderings.find(tokens);
        if (it == renderings.end()) return join_vocab_words(artifact.corpus.vocab, tokens);
        std::string best;
        std::uint64_t best_count = 0;
        for (const auto& [text, count] : it->second)
            if (count > best_count) { best = text; best_count = count; }
        return best;
    };

    auto reports = report(result.estimates, tf, artifact.corpus.vocab, config.top_n, renderer);
    write_topics_tsv(workdir_path(config, "topics.tsv"), reports);
    write_topics_table(workdir_path(config, "topics.txt"), reports);
    std::cout << "[topics] wrote " << reports.size() << " topic reports (top_n=" << config.top_n
              << ")\n";
}

void stage_perplexity(const PipelineConfig& config) {
    auto artifact = load_corpus_artifact(workdir_path(config, "corpus.json"));
    const Corpus& corpus = artifact.corpus;
    const std::size_t total_docs = corpus.docs.size();
    const std::size_t block =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                     config.holdout * static_cast<double>(total_docs))));
    if (static_cast<std::size_t>(config.folds) * block > total_docs)
        throw std::runtime_error("perplexity: not enough documents for " +
                                 std::to_string(config.folds) + " folds of " +
                                 std::to_string(block) + " held-out documents");

    std::vector<PerplexityResult> rows;
    std::vector<std::uint32_t> fold_of_row;
    for (std::uint32_t f = 0; f < config.folds; ++f) {
        // Fold f holds out the f-th block counted from the end of the corpus.
        std::size_t hold_end = total_docs - static_cast<std::size_t>(f) * block;
        std::size_t hold_begin = hold_end - block;

        Corpus train;
        train.vocab = corpus.vocab;
        std::vector<const Document*> held_out;
        for (std::size_t d = 0; d < total_docs; ++d) {
            if (d >= hold_begin && d < hold_end) {
                held_out.push_back(&corpus.docs[d]);
            } else {
                train.docs.push_back(corpus.docs[d]);
                train.total_tokens += corpus.docs[d].tokens.size();
            }
        }

        // Phrase statistics come from the retained documents only.
        MiningOptions mining;
        mining.support = config.support;
        mining.max_phrase_len = config.max_phrase_len;
        mining.threads = config.threads;
        PhraseCounter counter = mine(train, mining);
        SignificanceParams params{config.threshold, train.total_tokens};
        auto phrase_partitions = segment_corpus(train, counter, params, config.threads);
        std::vector<Partition> token_partitions;
        token_partitions.reserve(train.docs.size());
        for (const Document& doc : train.docs)
            token_partitions.push_back(singleton_partition(doc));

        TopicModelConfig model = config.model_config();
        model.seed = config.seed + f;
        PerplexityConfig eval;
        eval.fold_in_sweeps = config.fold_in_sweeps;
        eval.seed = config.seed + f;
        eval.threads = config.threads;

        GibbsResult phrase_model = gibbs_run(train, phrase_partitions, model);
        eval.alpha = phrase_model.config.alpha;
        rows.push_back(perplexity(phrase_model.estimates.phi, held_out, eval, "phrase_lda"));
        fold_of_row.push_back(f);

        GibbsResult token_model = gibbs_run(train, token_partitions, model);
        eval.alpha = token_model.config.alpha;
        rows.push_back(perplexity(token_model.estimates.phi, held_out, eval, "lda"));
        fold_of_row.push_back(f);
    }
    write_metrics_csv(workdir_path(config, "metrics.csv"), rows, fold_of_row);
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::cout << "[perplexity] fold " << fold_of_row[i] << ' ' << rows[i].model_name << ": "
                  << format_double(rows[i].perplexity) << " (" << format_double(rows[i].bits)
                  << " bits)\n";
}

int run_pipeline(const PipelineConfig& config, Stage up_to) {
    auto violations = validate_config(config);
    if (!violations.empty()) {
        bool missing_input = false;
        for (const auto& v : violations) {
            std::cerr << "config: " << v << '\n';
            if (v.rfind("input:", 0) == 0) missing_input = true;
        }
        return missing_input ? ExitCode::kMissingInput : ExitCode::kStageFailure;
    }

    struct Step {
        Stage stage;
        const char* name;
        void (*run)(const PipelineConfig&);
    };
    static const Step steps[] = {
        {Stage::kIngest, "ingest", stage_ingest},
        {Stage::kMine, "mine", stage_mine},
        {Stage::kSegment, "segment", stage_segment},
        {Stage::kTrain, "train", stage_train},
        {Stage::kTopics, "topics", stage_topics},
        {Stage::kPerplexity, "perplexity", stage_perplexity},
    };
    for (const Step& step : steps) {
        try {
            step.run(config);
        } catch (const std::exception& e) {
            std::cerr << "stage " << step.name << " failed: " << e.what() << '\n';
            return ExitCode::kStageFailure;
        }
        if (step.stage == up_to) break;
    }
    return ExitCode::kOk;
}

}  // namespace topmine
