// Command-line front end: ties ingest, document building, training, scoring,
// evaluation, statistics, and repository scanning to one binary.
//
// Exit codes: 0 success, 1 usage error, 2 data or environment error,
// 3 completed with partial results (some commits failed and were skipped).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patchscout/classifier.hpp"
#include "patchscout/config.hpp"
#include "patchscout/encoder.hpp"
#include "patchscout/errors.hpp"
#include "patchscout/eval.hpp"
#include "patchscout/ingest.hpp"
#include "patchscout/pipeline.hpp"
#include "patchscout/remote_scorer.hpp"

namespace {

using namespace patchscout;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

struct GlobalFlags {
    std::string config_path;
    std::string repos_dir = ".";
    std::optional<int> max_width;
    std::optional<int> window;
    std::optional<int> threads;
    std::optional<uint64_t> seed;
    std::optional<std::string> boundary_policy;
};

Config resolve_config(const GlobalFlags& flags) {
    Config config;
    if (!flags.config_path.empty()) {
        config = load_config(flags.config_path);
    }
    if (flags.max_width) config.max_width = *flags.max_width;
    if (flags.window) config.window = *flags.window;
    if (flags.threads) config.threads = *flags.threads;
    if (flags.seed) config.seed = *flags.seed;
    if (flags.boundary_policy) {
        config.boundary_policy = boundary_policy_from_string(*flags.boundary_policy);
    }
    return config;
}

// Document-shaping flags shared by `context` and `scan`.
struct ShapeFlags {
    std::string width_mode = "adaptive";
    int constant_width = 3;
    bool no_slicing = false;
    bool no_message = false;

    PipelineOptions pipeline() const {
        PipelineOptions options;
        options.width_mode =
            width_mode == "constant" ? WidthMode::Constant : WidthMode::Adaptive;
        options.constant_width = constant_width;
        options.slicing = !no_slicing;
        options.include_message = !no_message;
        return options;
    }
};

void add_shape_flags(CLI::App* cmd, ShapeFlags& flags) {
    cmd->add_option("--width-mode", flags.width_mode,
                    "context width selection: adaptive or constant")
        ->check(CLI::IsMember({"adaptive", "constant"}));
    cmd->add_option("--constant-width", flags.constant_width,
                    "context lines per boundary in constant mode")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--no-slicing", flags.no_slicing,
                  "diff whole files instead of reduced ones");
    cmd->add_flag("--no-message", flags.no_message,
                  "leave the commit message out of documents");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LookupError("file not found: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open for writing: " + path);
    }
    out << text;
    out.flush();
    if (!out) {
        throw Error("write failed: " + path);
    }
}

void report_failures(const std::vector<BuildFailure>& failures,
                     const char* stage) {
    for (const BuildFailure& failure : failures) {
        std::cerr << stage << ": " << failure.repo << "/" << failure.commit
                  << ": " << failure.reason << "\n";
    }
}

int run_ingest(const GlobalFlags& globals, const std::string& manifest_path,
               const std::string& out_path) {
    DatasetManifest manifest = load_manifest(manifest_path);
    IngestResult result = load_manifest_commits(manifest, globals.repos_dir);
    save_commit_records(result.records, out_path);
    report_failures(result.failures, "ingest");
    std::cout << "ingested " << result.records.size() << " of "
              << manifest.records.size() << " commits -> " << out_path << "\n";
    return result.failures.empty() ? kExitOk : kExitPartial;
}

int run_context(const Config& config, const std::string& records_path,
                const std::string& out_path, const ShapeFlags& shape) {
    std::vector<CommitRecord> records = load_commit_records(records_path);
    CorpusBuild build = build_documents(records, config, shape.pipeline());
    save_documents(build.documents, out_path);
    report_failures(build.failures, "context");
    std::cout << "built " << build.documents.size() << " of " << records.size()
              << " documents -> " << out_path << "\n";
    return build.failures.empty() ? kExitOk : kExitPartial;
}

int run_train(const Config& config, const std::string& docs_path,
              const std::string& out_path) {
    std::vector<ContextDocument> documents = load_documents(docs_path);
    HashedNgramEncoder encoder(config.encoder_dim, config.seed);

    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    size_t unlabeled = 0;
    for (const ContextDocument& doc : documents) {
        if (doc.split != "train") continue;
        if (doc.label != 0 && doc.label != 1) {
            ++unlabeled;
            continue;
        }
        features.push_back(encoder.encode(doc.text));
        labels.push_back(doc.label);
    }
    if (unlabeled > 0) {
        std::cerr << "train: skipped " << unlabeled
                  << " unlabeled train-split documents\n";
    }

    TrainConfig train_config;
    train_config.learning_rate = config.learning_rate;
    train_config.positive_weight = config.positive_weight;
    train_config.epochs = config.epochs;
    train_config.batch_size = config.batch_size;
    train_config.seed = config.seed;

    TrainResult result = train_head(features, labels, train_config);
    write_text_file(out_path, save_head(result.head));

    for (size_t epoch = 0; epoch < result.epoch_losses.size(); ++epoch) {
        std::cout << "epoch " << (epoch + 1) << " loss "
                  << result.epoch_losses[epoch] << "\n";
    }
    std::cout << "trained on " << features.size() << " documents -> "
              << out_path << "\n";
    return kExitOk;
}

int run_score(const Config& config, const std::string& docs_path,
              const std::string& head_path, const std::string& remote_url,
              const std::string& out_path) {
    std::vector<ContextDocument> documents = load_documents(docs_path);
    std::vector<ScoreRecord> scores;
    scores.reserve(documents.size());

    if (!remote_url.empty()) {
        RemoteScorerConfig remote_config;
        remote_config.endpoint = remote_url;
        RemoteScorer scorer(remote_config);
        for (const ContextDocument& doc : documents) {
            scores.push_back({doc.repo, doc.commit, scorer.score(doc.text)});
        }
    } else {
        if (head_path.empty()) {
            throw ValidationError("score needs --head or --remote");
        }
        ClassifierHead head = load_head(read_text_file(head_path));
        HashedNgramEncoder encoder(config.encoder_dim, config.seed);
        if (head.dim() != encoder.dim()) {
            throw ValidationError(
                "classifier head dimension " + std::to_string(head.dim()) +
                " does not match encoder dimension " +
                std::to_string(encoder.dim()));
        }
        for (const ContextDocument& doc : documents) {
            scores.push_back(
                {doc.repo, doc.commit, head.probability(encoder.encode(doc.text))});
        }
    }

    save_scores(scores, out_path);
    std::cout << "scored " << scores.size() << " documents -> " << out_path
              << "\n";
    return kExitOk;
}

int run_eval(const std::string& manifest_path, const std::string& scores_path,
             const std::string& split, double threshold) {
    DatasetManifest manifest = load_manifest(manifest_path);
    std::vector<ScoreRecord> scores = load_scores(scores_path);
    SplitEvaluation evaluation = evaluate_split(manifest, scores, split, threshold);
    std::cout << format_split_evaluation(evaluation);
    return kExitOk;
}

int run_stats(const std::string& records_path) {
    std::vector<CommitRecord> records = load_commit_records(records_path);
    std::cout << format_corpus_stats(corpus_stats(records));
    return kExitOk;
}

int run_scan(const Config& config, const std::string& repo_path,
             const std::string& head_path, int count, int top_k,
             bool as_json, const ShapeFlags& shape) {
    GitRepository repo(repo_path);
    std::string repo_id = repo.root().filename().string();
    if (repo_id.empty()) repo_id = repo_path;

    ClassifierHead head = load_head(read_text_file(head_path));
    HashedNgramEncoder encoder(config.encoder_dim, config.seed);

    ScanOptions options;
    options.commits = count;
    options.top_k = top_k;
    options.pipeline = shape.pipeline();

    ScanReport report =
        scan_repository(repo, repo_id, config, encoder, head, options);
    if (as_json) {
        std::cout << scan_report_to_json(report) << "\n";
    } else {
        std::cout << format_scan_report(report);
    }
    return report.failures.empty() ? kExitOk : kExitPartial;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vulnerability patch detection over git history"};
    app.require_subcommand(1);

    GlobalFlags globals;
    app.add_option("--config", globals.config_path,
                   "config file (JSON or flat TOML)");
    app.add_option("--repos-dir", globals.repos_dir,
                   "directory holding the cloned repositories");
    app.add_option("--max-width", globals.max_width,
                   "maximum adaptive context width per hunk boundary");
    app.add_option("--window", globals.window,
                   "total token budget per document");
    app.add_option("--seed", globals.seed, "seed for all randomness");
    app.add_option("--threads", globals.threads, "pipeline worker count");
    app.add_option("--boundary-policy", globals.boundary_policy,
                   "context boundary scoring: argmax or argmin")
        ->check(CLI::IsMember({"argmax", "argmin"}));

    // ingest: manifest -> commit records.
    auto* ingest = app.add_subcommand(
        "ingest", "materialize manifest commits from local clones");
    std::string ingest_manifest, ingest_out;
    ingest->add_option("--manifest", ingest_manifest, "dataset manifest JSONL")
        ->required();
    ingest->add_option("--out", ingest_out, "output commit records JSONL")
        ->required();

    // context: commit records -> classifier documents.
    auto* context = app.add_subcommand(
        "context", "build classification documents from commit records");
    std::string context_records, context_out;
    ShapeFlags context_shape;
    context->add_option("--records", context_records, "commit records JSONL")
        ->required();
    context->add_option("--out", context_out, "output documents JSONL")
        ->required();
    add_shape_flags(context, context_shape);

    // train: documents -> classifier head.
    auto* train = app.add_subcommand(
        "train", "fit the scoring head on train-split documents");
    std::string train_docs, train_out;
    std::optional<int> train_epochs, train_batch;
    std::optional<double> train_lr, train_pos_weight;
    train->add_option("--docs", train_docs, "documents JSONL")->required();
    train->add_option("--out", train_out, "output head JSON")->required();
    train->add_option("--epochs", train_epochs, "training epochs");
    train->add_option("--learning-rate", train_lr, "gradient step size");
    train->add_option("--positive-weight", train_pos_weight,
                      "loss weight for positive samples");
    train->add_option("--batch-size", train_batch, "mini-batch size");

    // score: documents -> per-commit probabilities.
    auto* score = app.add_subcommand(
        "score", "score documents with a trained head or a remote scorer");
    std::string score_docs, score_head, score_remote, score_out;
    score->add_option("--docs", score_docs, "documents JSONL")->required();
    score->add_option("--head", score_head, "trained head JSON");
    score->add_option("--remote", score_remote,
                      "remote scorer endpoint, e.g. http://host:port/score");
    score->add_option("--out", score_out, "output scores JSONL")->required();

    // eval: manifest + scores -> split report.
    auto* eval = app.add_subcommand(
        "eval", "evaluate scores against manifest labels for one split");
    std::string eval_manifest, eval_scores, eval_split = "test";
    double eval_threshold = 0.5;
    eval->add_option("--manifest", eval_manifest, "dataset manifest JSONL")
        ->required();
    eval->add_option("--scores", eval_scores, "scores JSONL")->required();
    eval->add_option("--split", eval_split, "split to evaluate");
    eval->add_option("--threshold", eval_threshold,
                     "default decision threshold");

    // stats: commit records -> corpus shape table.
    auto* stats = app.add_subcommand(
        "stats", "summarize corpus shape per split and label");
    std::string stats_records;
    stats->add_option("--records", stats_records, "commit records JSONL")
        ->required();

    // scan: repository + head -> ranked recent commits.
    auto* scan = app.add_subcommand(
        "scan", "rank a repository's recent commits by patch probability");
    std::string scan_repo, scan_head;
    int scan_count = 100;
    int scan_top = 10;
    bool scan_json = false;
    ShapeFlags scan_shape;
    scan->add_option("--repo", scan_repo, "path to the repository")->required();
    scan->add_option("--head", scan_head, "trained head JSON")->required();
    scan->add_option("--count", scan_count, "recent commits to scan");
    scan->add_option("--top", scan_top, "ranked commits to report");
    scan->add_flag("--json", scan_json, "emit the report as JSON");
    add_shape_flags(scan, scan_shape);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Config config = resolve_config(globals);
        if (train_epochs) config.epochs = *train_epochs;
        if (train_batch) config.batch_size = *train_batch;
        if (train_lr) config.learning_rate = *train_lr;
        if (train_pos_weight) config.positive_weight = *train_pos_weight;

        if (app.got_subcommand(ingest)) {
            return run_ingest(globals, ingest_manifest, ingest_out);
        }
        if (app.got_subcommand(context)) {
            return run_context(config, context_records, context_out,
                               context_shape);
        }
        if (app.got_subcommand(train)) {
            return run_train(config, train_docs, train_out);
        }
        if (app.got_subcommand(score)) {
            return run_score(config, score_docs, score_head, score_remote,
                             score_out);
        }
        if (app.got_subcommand(eval)) {
            return run_eval(eval_manifest, eval_scores, eval_split,
                            eval_threshold);
        }
        if (app.got_subcommand(stats)) {
            return run_stats(stats_records);
        }
        if (app.got_subcommand(scan)) {
            return run_scan(config, scan_repo, scan_head, scan_count, scan_top,
                            scan_json, scan_shape);
        }
    } catch (const Error& e) {
        std::cerr << "patchscout: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "patchscout: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
