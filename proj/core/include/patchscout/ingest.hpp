#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patchscout/process.hpp"

namespace patchscout {

// Commit extraction from on-disk git clones plus the labeled-dataset
// manifest that drives training and evaluation. Repository access shells
// out to the git CLI; the contract (first-parent diffs, binary skip,
// byte-exact blob content) is fixed even if the mechanism changes.

struct FilePair {
    std::string path;
    std::optional<std::string> before; // absent = file added by the commit
    std::optional<std::string> after;  // absent = file deleted by the commit
};

struct CommitRecord {
    std::string repo_id;
    std::string commit_id;
    std::string message;
    std::vector<FilePair> file_changes;
    std::optional<bool> label; // absent for commits scored outside the dataset
    std::string split;         // "train", "validation", "test", or empty
};

struct ManifestRecord {
    std::string repo;
    std::string commit;
    bool label = false;
    std::string split;
};

struct DatasetManifest {
    std::vector<ManifestRecord> records;
};

// A file is binary when its first 8000 bytes contain a NUL. Binary pairs
// are dropped during materialization; the pipeline never sees them.
bool looks_binary(std::string_view content);

// Manifest lines are JSON objects with keys repo, commit, label, split.
// Bad lines raise ParseError carrying the 1-based line number; a repo id
// appearing in more than one split, or a duplicated (repo, commit) pair,
// raises ValidationError naming the offender. Blank lines are ignored.
DatasetManifest parse_manifest_text(const std::string& text);
DatasetManifest load_manifest(const std::filesystem::path& path);

// One-line JSON serialization of a full commit record. Reloading the line
// reproduces the record exactly; content must be valid UTF-8 (guaranteed
// for anything that passed the binary filter in practice, and enforced
// here with ValidationError rather than silent mangling).
std::string commit_record_to_json(const CommitRecord& record);
CommitRecord commit_record_from_json(const std::string& line);

struct ChangeEntry {
    char status = '?'; // A added, D deleted, M modified, T type change
    std::string path;
};

class GitRepository {
public:
    // Throws LookupError when the directory is missing and ValidationError
    // when it exists but is not a git repository.
    explicit GitRepository(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    // Resolves a commit-ish to the full object id, or LookupError.
    std::string resolve_commit(const std::string& ref) const;

    std::string commit_message(const std::string& commit_id) const;

    // First parent id, or nullopt for a root commit.
    std::optional<std::string> first_parent(const std::string& commit_id) const;

    // Paths whose content or type differs from the first parent (the empty
    // tree for root commits). Renames are reported as delete plus add.
    std::vector<ChangeEntry> changed_paths(const std::string& commit_id) const;

    // Raw blob bytes for a path at a commit, exactly as stored.
    std::string read_blob(const std::string& commit_id,
                          const std::string& path) const;

    // Newest-first commit ids reachable from HEAD, at most `count` of them.
    std::vector<std::string> recent_commits(int count) const;

private:
    ProcessResult git(const std::vector<std::string>& args) const;

    std::filesystem::path root_;
    mutable std::string empty_tree_;
};

// Reads message and changed files for one commit. Both sides of every pair
// are full file snapshots; binary files and pairs with byte-identical
// content (mode-only changes) are skipped. label and split are left for
// the caller to fill in from the manifest.
CommitRecord materialize_commit(const GitRepository& repo,
                                const std::string& repo_id,
                                const std::string& commit_id);

} // namespace patchscout
