#include "patchscout/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "patchscout/errors.hpp"

namespace patchscout {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::set<std::string>& known_splits() {
    static const std::set<std::string> splits = {"train", "validation", "test"};
    return splits;
}

[[noreturn]] void manifest_error(size_t line_no, const std::string& what) {
    throw ParseError("manifest line " + std::to_string(line_no) + ": " + what);
}

std::string require_string(const ordered_json& object, const char* key,
                           size_t line_no) {
    auto it = object.find(key);
    if (it == object.end()) {
        manifest_error(line_no, std::string("missing key '") + key + "'");
    }
    if (!it->is_string()) {
        manifest_error(line_no, std::string("key '") + key + "' must be a string");
    }
    return it->get<std::string>();
}

} // namespace

bool looks_binary(std::string_view content) {
    size_t limit = std::min<size_t>(content.size(), 8000);
    return content.substr(0, limit).find('\0') != std::string_view::npos;
}

DatasetManifest parse_manifest_text(const std::string& text) {
    DatasetManifest manifest;
    std::map<std::string, std::string> split_of_repo;
    std::set<std::pair<std::string, std::string>> seen;

    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        ordered_json object;
        try {
            object = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            manifest_error(line_no, std::string("not valid JSON (") + e.what() + ")");
        }
        if (!object.is_object()) {
            manifest_error(line_no, "expected a JSON object");
        }
        for (const auto& item : object.items()) {
            if (item.key() != "repo" && item.key() != "commit" &&
                item.key() != "label" && item.key() != "split") {
                manifest_error(line_no, "unknown key '" + item.key() + "'");
            }
        }

        ManifestRecord record;
        record.repo = require_string(object, "repo", line_no);
        record.commit = require_string(object, "commit", line_no);
        record.split = require_string(object, "split", line_no);
        auto label_it = object.find("label");
        if (label_it == object.end()) {
            manifest_error(line_no, "missing key 'label'");
        }
        if (!label_it->is_boolean()) {
            manifest_error(line_no, "key 'label' must be a boolean");
        }
        record.label = label_it->get<bool>();

        if (record.repo.empty()) manifest_error(line_no, "repo must be non-empty");
        if (record.commit.empty()) manifest_error(line_no, "commit must be non-empty");
        if (known_splits().count(record.split) == 0) {
            manifest_error(line_no, "split must be one of train, validation, test");
        }

        auto [split_it, inserted] =
            split_of_repo.emplace(record.repo, record.split);
        if (!inserted && split_it->second != record.split) {
            throw ValidationError("repo " + record.repo + " appears in both " +
                                  split_it->second + " and " + record.split +
                                  "; splits must be project-level");
        }
        if (!seen.insert({record.repo, record.commit}).second) {
            throw ValidationError("duplicate commit " + record.commit +
                                  " in repo " + record.repo);
        }
        manifest.records.push_back(std::move(record));
    }
    return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw LookupError("manifest not found: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_manifest_text(buffer.str());
}

std::string commit_record_to_json(const CommitRecord& record) {
    ordered_json object;
    object["repo"] = record.repo_id;
    object["commit"] = record.commit_id;
    object["message"] = record.message;
    if (record.label.has_value()) {
        object["label"] = *record.label;
    } else {
        object["label"] = nullptr;
    }
    object["split"] = record.split;
    object["files"] = ordered_json::array();
    for (const auto& pair : record.file_changes) {
        ordered_json entry;
        entry["path"] = pair.path;
        entry["before"] = pair.before ? ordered_json(*pair.before) : ordered_json(nullptr);
        entry["after"] = pair.after ? ordered_json(*pair.after) : ordered_json(nullptr);
        object["files"].push_back(std::move(entry));
    }
    try {
        return object.dump();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("commit record " + record.repo_id + "/" +
                              record.commit_id + " contains non-UTF-8 text");
    }
}

CommitRecord commit_record_from_json(const std::string& line) {
    ordered_json object;
    try {
        object = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("commit record is not valid JSON (") +
                         e.what() + ")");
    }
    if (!object.is_object()) {
        throw ParseError("commit record must be a JSON object");
    }

    auto string_field = [&object](const char* key) {
        auto it = object.find(key);
        if (it == object.end() || !it->is_string()) {
            throw ParseError(std::string("commit record key '") + key +
                             "' missing or not a string");
        }
        return it->get<std::string>();
    };

    CommitRecord record;
    record.repo_id = string_field("repo");
    record.commit_id = string_field("commit");
    record.message = string_field("message");
    record.split = string_field("split");

    auto label_it = object.find("label");
    if (label_it == object.end() ||
        (!label_it->is_boolean() && !label_it->is_null())) {
        throw ParseError("commit record key 'label' missing or not a boolean");
    }
    if (label_it->is_boolean()) {
        record.label = label_it->get<bool>();
    }

    auto files_it = object.find("files");
    if (files_it == object.end() || !files_it->is_array()) {
        throw ParseError("commit record key 'files' missing or not an array");
    }
    for (const auto& entry : *files_it) {
        if (!entry.is_object()) {
            throw ParseError("commit record file entry must be an object");
        }
        FilePair pair;
        auto path_it = entry.find("path");
        if (path_it == entry.end() || !path_it->is_string()) {
            throw ParseError("file entry key 'path' missing or not a string");
        }
        pair.path = path_it->get<std::string>();
        for (const char* side : {"before", "after"}) {
            auto it = entry.find(side);
            if (it == entry.end() || (!it->is_string() && !it->is_null())) {
                throw ParseError(std::string("file entry key '") + side +
                                 "' missing or not a string");
            }
            if (it->is_string()) {
                (side[0] == 'b' ? pair.before : pair.after) = it->get<std::string>();
            }
        }
        record.file_changes.push_back(std::move(pair));
    }
    return record;
}

namespace {

std::string strip_trailing_newlines(std::string text) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
        text.pop_back();
    }
    return text;
}

std::vector<std::string> nonempty_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace

GitRepository::GitRepository(std::filesystem::path root) : root_(std::move(root)) {
    if (!std::filesystem::is_directory(root_)) {
        throw LookupError("repository directory not found: " + root_.string());
    }
    auto probe = git({"rev-parse", "--git-dir"});
    if (probe.exit_code != 0) {
        throw ValidationError("not a git repository: " + root_.string());
    }
}

ProcessResult GitRepository::git(const std::vector<std::string>& args) const {
    std::vector<std::string> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("git");
    argv.insert(argv.end(), args.begin(), args.end());
    return run_process(argv, root_.string());
}

std::string GitRepository::resolve_commit(const std::string& ref) const {
    auto result = git({"rev-parse", "--verify", "--quiet", ref + "^{commit}"});
    if (result.exit_code != 0) {
        throw LookupError("unknown commit " + ref + " in " + root_.string());
    }
    return strip_trailing_newlines(result.output);
}

std::string GitRepository::commit_message(const std::string& commit_id) const {
    auto result = git({"log", "-1", "--format=%B", commit_id});
    if (result.exit_code != 0) {
        throw LookupError("unknown commit " + commit_id + " in " + root_.string());
    }
    return strip_trailing_newlines(result.output);
}

std::optional<std::string> GitRepository::first_parent(
    const std::string& commit_id) const {
    auto result = git({"rev-parse", "--verify", "--quiet", commit_id + "^1"});
    if (result.exit_code != 0) {
        return std::nullopt;
    }
    return strip_trailing_newlines(result.output);
}

std::vector<ChangeEntry> GitRepository::changed_paths(
    const std::string& commit_id) const {
    std::string base;
    if (auto parent = first_parent(commit_id)) {
        base = *parent;
    } else {
        if (empty_tree_.empty()) {
            auto hashed = git({"hash-object", "-t", "tree", "/dev/null"});
            if (hashed.exit_code != 0) {
                throw ProcessError("failed to compute the empty tree id: " +
                                   hashed.diagnostics);
            }
            empty_tree_ = strip_trailing_newlines(hashed.output);
        }
        base = empty_tree_;
    }

    auto result = git({"diff-tree", "-r", "--no-renames", "--name-status", "-z",
                       base, commit_id});
    if (result.exit_code != 0) {
        throw ProcessError("diff-tree failed for " + commit_id + ": " +
                           result.diagnostics);
    }

    std::vector<ChangeEntry> entries;
    size_t pos = 0;
    const std::string& out = result.output;
    while (pos < out.size()) {
        size_t status_end = out.find('\0', pos);
        if (status_end == std::string::npos) break;
        std::string status = out.substr(pos, status_end - pos);
        size_t path_end = out.find('\0', status_end + 1);
        if (path_end == std::string::npos) {
            throw ProcessError("truncated diff-tree output for " + commit_id);
        }
        ChangeEntry entry;
        entry.status = status.empty() ? '?' : status[0];
        entry.path = out.substr(status_end + 1, path_end - status_end - 1);
        if (entry.status != 'A' && entry.status != 'D' && entry.status != 'M' &&
            entry.status != 'T') {
            throw ProcessError("unexpected diff status '" + status + "' for " +
                               entry.path + " at " + commit_id);
        }
        entries.push_back(std::move(entry));
        pos = path_end + 1;
    }
    return entries;
}

std::string GitRepository::read_blob(const std::string& commit_id,
                                     const std::string& path) const {
    auto result = git({"cat-file", "blob", commit_id + ":" + path});
    if (result.exit_code != 0) {
        throw LookupError("no file " + path + " at commit " + commit_id + ": " +
                          result.diagnostics);
    }
    return result.output;
}

std::vector<std::string> GitRepository::recent_commits(int count) const {
    if (count < 0) {
        throw ValidationError("commit count must be non-negative");
    }
    if (count == 0) return {};
    auto result =
        git({"rev-list", "--max-count=" + std::to_string(count), "HEAD"});
    if (result.exit_code != 0) {
        throw LookupError("cannot list commits in " + root_.string() + ": " +
                          result.diagnostics);
    }
    return nonempty_lines(result.output);
}

CommitRecord materialize_commit(const GitRepository& repo,
                                const std::string& repo_id,
                                const std::string& commit_id) {
    std::string full = repo.resolve_commit(commit_id);
    CommitRecord record;
    record.repo_id = repo_id;
    record.commit_id = commit_id;
    record.message = repo.commit_message(full);

    auto parent = repo.first_parent(full);
    for (const auto& entry : repo.changed_paths(full)) {
        FilePair pair;
        pair.path = entry.path;
        if (entry.status != 'A') {
            pair.before = repo.read_blob(*parent, entry.path);
        }
        if (entry.status != 'D') {
            pair.after = repo.read_blob(full, entry.path);
        }
        if ((pair.before && looks_binary(*pair.before)) ||
            (pair.after && looks_binary(*pair.after))) {
            continue;
        }
        if (pair.before && pair.after && *pair.before == *pair.after) {
            continue; // mode-only change, no content difference
        }
        record.file_changes.push_back(std::move(pair));
    }
    return record;
}

} // namespace patchscout
