// topmine: corpus -> frequent phrases -> bag-of-phrases segmentation ->
// phrase-constrained topic model -> ranked topical phrases + perplexity.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topmine/evaluation.hpp"
#include "topmine/pipeline.hpp"
#include "topmine/util.hpp"

using namespace topmine;

namespace {

std::vector<std::uint64_t> parse_sizes(const std::string& csv) {
    std::vector<std::uint64_t> sizes;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        std::string item = csv.substr(pos, comma - pos);
        if (!item.empty()) sizes.push_back(static_cast<std::uint64_t>(std::stod(item)));
        pos = comma + 1;
    }
    return sizes;
}

int run_stage(const PipelineConfig& config, void (*stage)(const PipelineConfig&)) {
    try {
        stage(config);
        return ExitCode::kOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitCode::kStageFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topical phrase mining pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_path;
    std::string workdir;
    int threads = 0;
    app.add_option("--config", config_path, "pipeline config file (JSON)");
    app.add_option("--workdir", workdir, "working directory for artifacts");
    app.add_option("--threads", threads, "worker threads (1 = reference mode)");

    // ingest
    auto* cmd_ingest = app.add_subcommand("ingest", "tokenize and filter the input corpus");
    std::string input, input_format = "jsonl", stopwords_file;
    bool lowercase = true, no_stopwords = false;
    cmd_ingest->add_option("--input", input, "input file");
    cmd_ingest->add_option("--format", input_format, "jsonl | text");
    cmd_ingest->add_option("--stopwords", stopwords_file, "stop-word list, one per line");
    cmd_ingest->add_flag("--lowercase,!--no-lowercase", lowercase, "lowercase tokens");
    cmd_ingest->add_flag("--no-stopwords", no_stopwords, "keep stop words");

    // mine
    auto* cmd_mine = app.add_subcommand("mine", "mine frequent phrases");
    std::uint64_t min_support = 0, support_floor = 1;
    double support_rate = 0.0;
    std::uint32_t max_len = 0;
    cmd_mine->add_option("--min-support", min_support, "absolute minimum support");
    cmd_mine->add_option("--support-rate", support_rate, "minimum support as a token rate");
    cmd_mine->add_option("--support-floor", support_floor, "floor for rate-based support");
    cmd_mine->add_option("--max-len", max_len, "maximum phrase length");

    // segment
    auto* cmd_segment = app.add_subcommand("segment", "segment documents into phrases");
    double threshold = 0.0;
    cmd_segment->add_option("--threshold", threshold, "significance merge threshold");

    // train
    auto* cmd_train = app.add_subcommand("train", "run the phrase-constrained topic model");
    std::uint32_t topics = 0, iters = 0, burn_in = 0, optimize_interval = 0;
    std::uint64_t seed = 0;
    double alpha = 0.0, beta = 0.0;
    bool optimize_hyper = false, optimize_beta = false;
    cmd_train->add_option("--topics", topics, "number of topics");
    cmd_train->add_option("--iters", iters, "Gibbs iterations");
    cmd_train->add_option("--burn-in", burn_in, "burn-in iterations");
    cmd_train->add_option("--seed", seed, "RNG seed");
    cmd_train->add_option("--alpha", alpha, "symmetric document-topic prior");
    cmd_train->add_option("--beta", beta, "symmetric topic-word prior");
    cmd_train->add_flag("--optimize-hyper", optimize_hyper, "fixed-point alpha updates");
    cmd_train->add_flag("--optimize-beta", optimize_beta, "fixed-point symmetric beta update");
    cmd_train->add_option("--optimize-interval", optimize_interval,
                          "iterations between hyperparameter updates");

    // topics
    auto* cmd_topics = app.add_subcommand("topics", "rank topical phrases and words");
    std::uint32_t top_n = 0;
    cmd_topics->add_option("--top-n", top_n, "entries per topic");

    // perplexity
    auto* cmd_perplexity =
        app.add_subcommand("perplexity", "held-out perplexity, PhraseLDA vs LDA");
    double holdout = 0.0;
    std::uint32_t folds = 0, sweeps = 0;
    cmd_perplexity->add_option("--holdout", holdout, "held-out fraction of documents");
    cmd_perplexity->add_option("--folds", folds, "number of trailing-block folds");
    cmd_perplexity->add_option("--sweeps", sweeps, "fold-in Gibbs sweeps");
    cmd_perplexity->add_option("--seed", seed, "RNG seed");
    cmd_perplexity->add_option("--topics", topics, "number of topics");
    cmd_perplexity->add_option("--iters", iters, "Gibbs iterations");

    // bench
    auto* cmd_bench = app.add_subcommand("bench", "runtime decomposition on synthetic corpora");
    std::string sizes_csv = "1e4,2e4,4e4", bench_out;
    std::uint32_t bench_topics = 10, bench_iters = 2000;
    std::uint64_t bench_seed = 7;
    cmd_bench->add_option("--sizes", sizes_csv, "comma-separated token counts");
    cmd_bench->add_option("--topics", bench_topics, "topics for the modeling phase");
    cmd_bench->add_option("--iters", bench_iters, "Gibbs iterations for the modeling phase");
    cmd_bench->add_option("--seed", bench_seed, "generator seed");
    cmd_bench->add_option("--out", bench_out, "also write the CSV here");

    // run
    auto* cmd_run = app.add_subcommand("run", "full pipeline from a config file");
    std::string stage_name;
    cmd_run->add_option("--stage", stage_name, "stop after this stage");

    CLI11_PARSE(app, argc, argv);

    PipelineConfig config;
    if (!config_path.empty()) {
        try {
            config = load_pipeline_config(config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return ExitCode::kStageFailure;
        }
    }
    if (!workdir.empty()) config.workdir = workdir;
    if (threads > 0) config.threads = threads;

    if (*cmd_ingest) {
        if (cmd_ingest->count("--input")) config.input = input;
        if (cmd_ingest->count("--format")) config.input_format = input_format;
        if (cmd_ingest->count("--stopwords")) config.stopwords_file = stopwords_file;
        if (cmd_ingest->count("--lowercase") || cmd_ingest->count("--no-lowercase"))
            config.lowercase = lowercase;
        if (no_stopwords) config.remove_stopwords = false;
        return run_stage(config, stage_ingest);
    }
    if (*cmd_mine) {
        if (cmd_mine->count("--support-rate"))
            config.support = MinSupport::rate(support_rate, support_floor);
        else if (cmd_mine->count("--min-support"))
            config.support = MinSupport::absolute(min_support);
        if (cmd_mine->count("--max-len")) config.max_phrase_len = max_len;
        return run_stage(config, stage_mine);
    }
    if (*cmd_segment) {
        if (cmd_segment->count("--threshold")) config.threshold = threshold;
        return run_stage(config, stage_segment);
    }
    if (*cmd_train) {
        if (cmd_train->count("--topics")) config.topics = topics;
        if (cmd_train->count("--iters")) {
            config.iterations = iters;
            if (!cmd_train->count("--burn-in") && config.burn_in >= iters)
                config.burn_in = iters / 2;
        }
        if (cmd_train->count("--burn-in")) config.burn_in = burn_in;
        if (cmd_train->count("--seed")) {
            config.seed = seed;
            config.seed_set = true;
        }
        if (cmd_train->count("--alpha")) {
            config.alpha.clear();
            config.alpha_symmetric = alpha;
        }
        if (cmd_train->count("--beta")) config.beta = beta;
        if (optimize_hyper) config.optimize_hyperparams = true;
        if (optimize_beta) config.optimize_beta = true;
        if (cmd_train->count("--optimize-interval")) config.optimize_interval = optimize_interval;
        if (!config.seed_set) {
            std::cerr << "error: train requires --seed (or a config file with model.seed)\n";
            return ExitCode::kStageFailure;
        }
        return run_stage(config, stage_train);
    }
    if (*cmd_topics) {
        if (cmd_topics->count("--top-n")) config.top_n = top_n;
        return run_stage(config, stage_topics);
    }
    if (*cmd_perplexity) {
        if (cmd_perplexity->count("--holdout")) config.holdout = holdout;
        if (cmd_perplexity->count("--folds")) config.folds = folds;
        if (cmd_perplexity->count("--sweeps")) config.fold_in_sweeps = sweeps;
        if (cmd_perplexity->count("--topics")) config.topics = topics;
        if (cmd_perplexity->count("--iters")) {
            config.iterations = iters;
            if (config.burn_in >= iters) config.burn_in = iters / 2;
        }
        if (cmd_perplexity->count("--seed")) {
            config.seed = seed;
            config.seed_set = true;
        }
        if (!config.seed_set) {
            std::cerr << "error: perplexity requires --seed (or a config file with model.seed)\n";
            return ExitCode::kStageFailure;
        }
        return run_stage(config, stage_perplexity);
    }
    if (*cmd_bench) {
        BenchConfig bench;
        bench.topics = bench_topics;
        bench.iterations = bench_iters;
        bench.seed = bench_seed;
        try {
            auto rows = runtime_decomposition(parse_sizes(sizes_csv), bench);
            std::string csv = "tokens,mining_seconds,modeling_seconds\n";
            for (const auto& row : rows)
                csv += std::to_string(row.tokens) + "," + format_double(row.mining_seconds) +
                       "," + format_double(row.modeling_seconds) + "\n";
            std::cout << csv;
            if (!bench_out.empty()) {
                std::ofstream out(bench_out, std::ios::binary);
                out << csv;
            }
            return ExitCode::kOk;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return ExitCode::kStageFailure;
        }
    }
    if (*cmd_run) {
        if (config_path.empty()) {
            std::cerr << "error: run requires --config\n";
            return ExitCode::kStageFailure;
        }
        Stage up_to = Stage::kPerplexity;
        if (!stage_name.empty() && !parse_stage(stage_name, &up_to)) {
            std::cerr << "error: unknown stage '" << stage_name << "'\n";
            return ExitCode::kStageFailure;
        }
        return run_pipeline(config, up_to);
    }
    return ExitCode::kOk;
}
