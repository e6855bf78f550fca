#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "patchscout/classifier.hpp"
#include "patchscout/config.hpp"
#include "patchscout/encoder.hpp"
#include "patchscout/ingest.hpp"
#include "patchscout/metrics.hpp"
#include "patchscout/pipeline.hpp"

namespace patchscout {

// Split-level evaluation, corpus statistics, and the repository scan:
// everything between raw scores and the reports a user reads.

// One row of the score JSONL interchange: {"repo", "commit", "score"}.
struct ScoreRecord {
    std::string repo;
    std::string commit;
    double score = 0.0;
};

std::string score_record_to_json(const ScoreRecord& record);
ScoreRecord score_record_from_json(const std::string& line);

// Joins one split's manifest rows with scores keyed by (repo, commit) and
// evaluates at the default threshold plus the best-F1 sweep. Duplicated
// score rows and unscored commits raise ValidationError naming offenders;
// an empty split raises ValidationError; a single-class split surfaces as
// UndefinedMetricError from the AUC.
struct SplitEvaluation {
    std::string split;
    long commits = 0;
    EvaluationSummary summary;
};

SplitEvaluation evaluate_split(const DatasetManifest& manifest,
                               const std::vector<ScoreRecord>& scores,
                               const std::string& split,
                               double default_threshold = 0.5);

std::string format_split_evaluation(const SplitEvaluation& evaluation);

// Per (split, label) corpus shape: commit and project counts plus per-commit
// means. File size and token counts are measured on the version a reader
// would open at that commit (the post-image, or the pre-image for deleted
// files); changed lines count both deletions and additions.
struct GroupStats {
    long commits = 0;
    long projects = 0;
    double mean_files = 0.0;
    double mean_lines = 0.0;
    double mean_tokens = 0.0;
    double mean_changed_lines = 0.0;
    double mean_changed_tokens = 0.0;
};

struct CorpusStats {
    // Key: (split, label) with label 1/0 from the manifest and -1 unlabeled.
    std::map<std::pair<std::string, int>, GroupStats> groups;
};

CorpusStats corpus_stats(const std::vector<CommitRecord>& records);
std::string format_corpus_stats(const CorpusStats& stats);

// Scores the most recent commits of one repository and ranks them. Commits
// that fail to materialize or build are recorded and skipped; the report
// says how many were scanned so partial results are visible.
struct ScanOptions {
    int commits = 100;
    int top_k = 10;
    PipelineOptions pipeline;
};

struct ScanEntry {
    std::string commit;
    double score = 0.0;
    std::string excerpt;
};

struct ScanReport {
    std::string repo;
    long scanned = 0;
    std::vector<ScanEntry> top;       // score descending, ties newest-first
    std::vector<std::string> failures; // "commit: reason"
};

ScanReport scan_repository(const GitRepository& repo, const std::string& repo_id,
                           const Config& config, const Encoder& encoder,
                           const ClassifierHead& head, const ScanOptions& options);

std::string format_scan_report(const ScanReport& report);
std::string scan_report_to_json(const ScanReport& report);

// JSONL file round-trips for the artifacts the subcommands exchange.
// Loaders raise ParseError with 1-based line numbers; blank lines are
// ignored. Savers write one object per line and throw on IO failure.
std::vector<ContextDocument> load_documents(const std::filesystem::path& path);
void save_documents(const std::vector<ContextDocument>& documents,
                    const std::filesystem::path& path);
std::vector<ScoreRecord> load_scores(const std::filesystem::path& path);
void save_scores(const std::vector<ScoreRecord>& scores,
                 const std::filesystem::path& path);
std::vector<CommitRecord> load_commit_records(const std::filesystem::path& path);
void save_commit_records(const std::vector<CommitRecord>& records,
                         const std::filesystem::path& path);

} // namespace patchscout
