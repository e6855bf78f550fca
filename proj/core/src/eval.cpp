#include "patchscout/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "patchscout/diff.hpp"
#include "patchscout/errors.hpp"
#include "patchscout/tokenizer.hpp"

namespace patchscout {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double value, int precision = 4) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", precision, value);
    return buffer;
}

// Applies `fn` to every non-blank line with its 1-based number.
template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
    size_t pos = 0;
    size_t line_no = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line =
            text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        fn(line_no, line);
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LookupError("file not found: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_lines(const std::vector<std::string>& lines,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open for writing: " + path.string());
    }
    for (const auto& line : lines) {
        out << line << '\n';
    }
    out.flush();
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

} // namespace

std::string score_record_to_json(const ScoreRecord& record) {
    ordered_json object;
    object["repo"] = record.repo;
    object["commit"] = record.commit;
    object["score"] = record.score;
    return object.dump();
}

ScoreRecord score_record_from_json(const std::string& line) {
    ordered_json object;
    try {
        object = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("score row is not valid JSON (") + e.what() +
                         ")");
    }
    if (!object.is_object()) {
        throw ParseError("score row must be a JSON object");
    }
    ScoreRecord record;
    auto repo_it = object.find("repo");
    auto commit_it = object.find("commit");
    auto score_it = object.find("score");
    if (repo_it == object.end() || !repo_it->is_string() ||
        commit_it == object.end() || !commit_it->is_string() ||
        score_it == object.end() || !score_it->is_number()) {
        throw ParseError("score row needs string repo, string commit, numeric score");
    }
    record.repo = repo_it->get<std::string>();
    record.commit = commit_it->get<std::string>();
    record.score = score_it->get<double>();
    if (record.score < 0.0 || record.score > 1.0) {
        throw ValidationError("score " + fixed(record.score) + " for " +
                              record.repo + "/" + record.commit +
                              " is outside [0, 1]");
    }
    return record;
}

SplitEvaluation evaluate_split(const DatasetManifest& manifest,
                               const std::vector<ScoreRecord>& scores,
                               const std::string& split,
                               double default_threshold) {
    std::map<std::pair<std::string, std::string>, double> by_key;
    std::vector<std::string> duplicates;
    for (const ScoreRecord& record : scores) {
        auto key = std::make_pair(record.repo, record.commit);
        if (!by_key.emplace(key, record.score).second) {
            duplicates.push_back(record.repo + "/" + record.commit);
        }
    }
    if (!duplicates.empty()) {
        std::string joined;
        for (const auto& id : duplicates) {
            if (!joined.empty()) joined += ", ";
            joined += id;
        }
        throw ValidationError("duplicate score rows: " + joined);
    }

    std::vector<ScoredLabel> scored;
    std::vector<std::string> missing;
    for (const ManifestRecord& record : manifest.records) {
        if (record.split != split) continue;
        auto it = by_key.find({record.repo, record.commit});
        if (it == by_key.end()) {
            missing.push_back(record.repo + "/" + record.commit);
            continue;
        }
        scored.push_back({it->second, record.label ? 1 : 0});
    }
    if (!missing.empty()) {
        std::string joined;
        for (const auto& id : missing) {
            if (!joined.empty()) joined += ", ";
            joined += id;
        }
        throw ValidationError("missing scores for: " + joined);
    }
    if (scored.empty()) {
        throw ValidationError("split '" + split + "' has no commits");
    }

    SplitEvaluation evaluation;
    evaluation.split = split;
    evaluation.commits = static_cast<long>(scored.size());
    evaluation.summary = evaluate_scores(scored, default_threshold);
    return evaluation;
}

std::string format_split_evaluation(const SplitEvaluation& evaluation) {
    std::string out;
    out += "split " + evaluation.split + ": " +
           std::to_string(evaluation.commits) + " commits, AUC " +
           fixed(evaluation.summary.auc) + "\n";
    out += "  at default threshold: " +
           format_report(evaluation.summary.at_default) + "\n";
    out += "  at best-F1 threshold: " +
           format_report(evaluation.summary.at_best_f1) + "\n";
    return out;
}

CorpusStats corpus_stats(const std::vector<CommitRecord>& records) {
    struct Accumulator {
        long commits = 0;
        long files = 0;
        long lines = 0;
        long tokens = 0;
        long changed_lines = 0;
        long changed_tokens = 0;
        std::set<std::string> projects;
    };
    std::map<std::pair<std::string, int>, Accumulator> acc;

    for (const CommitRecord& record : records) {
        int label = record.label.has_value() ? (*record.label ? 1 : 0) : -1;
        Accumulator& bucket = acc[{record.split, label}];
        ++bucket.commits;
        bucket.projects.insert(record.repo_id);
        bucket.files += static_cast<long>(record.file_changes.size());
        for (const FilePair& pair : record.file_changes) {
            const std::string& text =
                pair.after.has_value() ? *pair.after : pair.before.value_or("");
            std::vector<std::string> before_lines =
                split_lines(pair.before.value_or(""));
            std::vector<std::string> after_lines =
                split_lines(pair.after.value_or(""));
            bucket.lines += static_cast<long>(
                (pair.after ? after_lines : before_lines).size());
            bucket.tokens += static_cast<long>(count_tokens(text));
            for (const Hunk& hunk : diff_lines(before_lines, after_lines)) {
                bucket.changed_lines += static_cast<long>(
                    hunk.deleted_lines.size() + hunk.added_lines.size());
                for (const auto& line : hunk.deleted_lines) {
                    bucket.changed_tokens += static_cast<long>(count_tokens(line));
                }
                for (const auto& line : hunk.added_lines) {
                    bucket.changed_tokens += static_cast<long>(count_tokens(line));
                }
            }
        }
    }

    CorpusStats stats;
    for (const auto& [key, bucket] : acc) {
        GroupStats group;
        group.commits = bucket.commits;
        group.projects = static_cast<long>(bucket.projects.size());
        double n = static_cast<double>(bucket.commits);
        group.mean_files = bucket.files / n;
        group.mean_lines = bucket.lines / n;
        group.mean_tokens = bucket.tokens / n;
        group.mean_changed_lines = bucket.changed_lines / n;
        group.mean_changed_tokens = bucket.changed_tokens / n;
        stats.groups.emplace(key, group);
    }
    return stats;
}

std::string format_corpus_stats(const CorpusStats& stats) {
    std::string out =
        "split        label  commits  projects  mean_files  mean_lines  "
        "mean_tokens  mean_changed_lines  mean_changed_tokens\n";
    if (stats.groups.empty()) {
        out += "(no commits)\n";
        return out;
    }

    // Canonical split order, then label 1 (positive) before 0 before -1.
    auto split_rank = [](const std::string& split) {
        if (split == "train") return 0;
        if (split == "validation") return 1;
        if (split == "test") return 2;
        return 3;
    };
    std::vector<const std::pair<const std::pair<std::string, int>, GroupStats>*> rows;
    for (const auto& entry : stats.groups) rows.push_back(&entry);
    std::sort(rows.begin(), rows.end(), [&](const auto* a, const auto* b) {
        int ra = split_rank(a->first.first);
        int rb = split_rank(b->first.first);
        if (ra != rb) return ra < rb;
        if (a->first.first != b->first.first) return a->first.first < b->first.first;
        return a->first.second > b->first.second;
    });

    char buffer[256];
    for (const auto* row : rows) {
        const auto& [key, group] = *row;
        std::string label = key.second < 0 ? "none" : std::to_string(key.second);
        std::snprintf(buffer, sizeof buffer,
                      "%-12s %-6s %8ld %9ld %11.2f %11.2f %12.2f %19.2f %20.2f\n",
                      key.first.c_str(), label.c_str(), group.commits,
                      group.projects, group.mean_files, group.mean_lines,
                      group.mean_tokens, group.mean_changed_lines,
                      group.mean_changed_tokens);
        out += buffer;
    }
    return out;
}

namespace {

std::string document_excerpt(const std::string& text, size_t limit = 160) {
    std::string flat;
    flat.reserve(std::min(text.size(), limit + 3));
    for (char c : text) {
        if (flat.size() >= limit) {
            flat += "...";
            break;
        }
        flat += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return flat;
}

} // namespace

ScanReport scan_repository(const GitRepository& repo, const std::string& repo_id,
                           const Config& config, const Encoder& encoder,
                           const ClassifierHead& head, const ScanOptions& options) {
    if (options.top_k < 0) {
        throw ValidationError("report size must be non-negative");
    }
    if (head.dim() != encoder.dim()) {
        throw ValidationError("classifier head dimension " +
                              std::to_string(head.dim()) +
                              " does not match encoder dimension " +
                              std::to_string(encoder.dim()));
    }

    ScanReport report;
    report.repo = repo_id;
    std::vector<ScanEntry> entries;
    for (const std::string& commit_id : repo.recent_commits(options.commits)) {
        ++report.scanned;
        try {
            CommitRecord record = materialize_commit(repo, repo_id, commit_id);
            ContextDocument doc =
                build_document(record, config, options.pipeline);
            double probability = head.probability(encoder.encode(doc.text));
            entries.push_back(
                {commit_id, probability, document_excerpt(doc.text)});
        } catch (const Error& e) {
            report.failures.push_back(commit_id + ": " + e.what());
        }
    }

    std::stable_sort(entries.begin(), entries.end(),
                     [](const ScanEntry& a, const ScanEntry& b) {
                         return a.score > b.score;
                     });
    if (static_cast<size_t>(options.top_k) < entries.size()) {
        entries.resize(options.top_k);
    }
    report.top = std::move(entries);
    return report;
}

std::string format_scan_report(const ScanReport& report) {
    std::string out = "repo " + report.repo + ": scanned " +
                      std::to_string(report.scanned) + " commits, " +
                      std::to_string(report.failures.size()) + " failed\n";
    int rank = 1;
    for (const ScanEntry& entry : report.top) {
        out += "  " + std::to_string(rank++) + ". " + entry.commit +
               " score=" + fixed(entry.score) + " " + entry.excerpt + "\n";
    }
    for (const std::string& failure : report.failures) {
        out += "  failed " + failure + "\n";
    }
    return out;
}

std::string scan_report_to_json(const ScanReport& report) {
    ordered_json object;
    object["repo"] = report.repo;
    object["scanned"] = report.scanned;
    object["top"] = ordered_json::array();
    for (const ScanEntry& entry : report.top) {
        ordered_json row;
        row["commit"] = entry.commit;
        row["score"] = entry.score;
        row["excerpt"] = entry.excerpt;
        object["top"].push_back(std::move(row));
    }
    object["failures"] = report.failures;
    return object.dump();
}

std::vector<ContextDocument> load_documents(const std::filesystem::path& path) {
    std::vector<ContextDocument> documents;
    for_each_line(read_text_file(path), [&](size_t line_no, const std::string& line) {
        try {
            documents.push_back(document_from_json(line));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + " line " + std::to_string(line_no) +
                             ": " + e.what());
        }
    });
    return documents;
}

void save_documents(const std::vector<ContextDocument>& documents,
                    const std::filesystem::path& path) {
    std::vector<std::string> lines;
    lines.reserve(documents.size());
    for (const auto& doc : documents) lines.push_back(to_jsonl(doc));
    write_lines(lines, path);
}

std::vector<ScoreRecord> load_scores(const std::filesystem::path& path) {
    std::vector<ScoreRecord> scores;
    for_each_line(read_text_file(path), [&](size_t line_no, const std::string& line) {
        try {
            scores.push_back(score_record_from_json(line));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + " line " + std::to_string(line_no) +
                             ": " + e.what());
        }
    });
    return scores;
}

void save_scores(const std::vector<ScoreRecord>& scores,
                 const std::filesystem::path& path) {
    std::vector<std::string> lines;
    lines.reserve(scores.size());
    for (const auto& record : scores) lines.push_back(score_record_to_json(record));
    write_lines(lines, path);
}

std::vector<CommitRecord> load_commit_records(const std::filesystem::path& path) {
    std::vector<CommitRecord> records;
    for_each_line(read_text_file(path), [&](size_t line_no, const std::string& line) {
        try {
            records.push_back(commit_record_from_json(line));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + " line " + std::to_string(line_no) +
                             ": " + e.what());
        }
    });
    return records;
}

void save_commit_records(const std::vector<CommitRecord>& records,
                         const std::filesystem::path& path) {
    std::vector<std::string> lines;
    lines.reserve(records.size());
    for (const auto& record : records) lines.push_back(commit_record_to_json(record));
    write_lines(lines, path);
}

} // namespace patchscout
