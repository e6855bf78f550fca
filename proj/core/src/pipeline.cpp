#include "patchscout/pipeline.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <thread>
#include <utility>

#include "patchscout/call_graph.hpp"
#include "patchscout/diff.hpp"
#include "patchscout/errors.hpp"
#include "patchscout/slicer.hpp"
#include "patchscout/syntax.hpp"
#include "patchscout/tokenizer.hpp"

namespace patchscout {

namespace {

// Everything derived from one in-scope file pair. Trees own their nodes
// through unique_ptrs, so pointers into them stay valid after the struct
// is moved into place.
struct FileWork {
    const FilePair* pair = nullptr;
    std::vector<std::string> before_lines;
    std::vector<std::string> after_lines;
    SyntaxTree before_tree;
    SyntaxTree after_tree;
    FileStructure before_structure;
    FileStructure after_structure;
    std::set<int> deleted; // changed lines, before numbering
    std::set<int> added;   // changed lines, after numbering
    std::set<const MethodDecl*> before_stubs;
    std::set<const MethodDecl*> after_stubs;
};

bool span_intersects(const std::set<int>& lines, int first, int last) {
    auto it = lines.lower_bound(first);
    return it != lines.end() && *it <= last;
}

// Relevance pass for one version: build the call graph over every file's
// methods, seed it with the changed methods, and mark the rest of the
// closure for stubbing. The same changed-method test the reducer applies
// (declaration span against changed lines) keeps the two passes agreed on
// who gets sliced and who gets stubbed.
void mark_stubs(std::vector<FileWork>& files, bool before_side) {
    std::vector<MethodRef> refs;
    std::vector<size_t> file_of;
    for (size_t fi = 0; fi < files.size(); ++fi) {
        FileWork& work = files[fi];
        const SyntaxTree& tree = before_side ? work.before_tree : work.after_tree;
        const FileStructure& structure =
            before_side ? work.before_structure : work.after_structure;
        for (const MethodDecl& method : structure.methods) {
            refs.push_back({&tree, &structure, &method});
            file_of.push_back(fi);
        }
    }

    CallGraph graph = build_call_graph(refs);
    std::vector<int> seeds;
    std::vector<bool> changed(refs.size(), false);
    for (size_t i = 0; i < refs.size(); ++i) {
        const std::set<int>& lines =
            before_side ? files[file_of[i]].deleted : files[file_of[i]].added;
        const SyntaxNode* decl = refs[i].method->decl;
        if (span_intersects(lines, decl->start_line, decl->end_line)) {
            changed[i] = true;
            seeds.push_back(static_cast<int>(i));
        }
    }

    for (int idx : relevant_closure(graph, seeds)) {
        if (changed[idx]) continue;
        FileWork& work = files[file_of[idx]];
        auto& stubs = before_side ? work.before_stubs : work.after_stubs;
        stubs.insert(refs[idx].method);
    }
}

} // namespace

ContextDocument build_document(const CommitRecord& record, const Config& config,
                               const PipelineOptions& options,
                               DocumentTrace* trace) {
    ContextDocument doc;
    doc.repo = record.repo_id;
    doc.commit = record.commit_id;
    doc.label = record.label.has_value() ? (*record.label ? 1 : 0) : -1;
    doc.split = record.split;

    std::vector<FileWork> files;
    for (const FilePair& pair : record.file_changes) {
        std::string_view after_view =
            pair.after ? std::string_view(*pair.after) : std::string_view();
        std::string_view probe =
            pair.after ? after_view : std::string_view(pair.before.value_or(""));
        if (classify_file(pair.path, probe) != FileScope::InScope) continue;
        FileWork work;
        work.pair = &pair;
        files.push_back(std::move(work));
    }

    for (FileWork& work : files) {
        work.before_lines = split_lines(work.pair->before.value_or(""));
        work.after_lines = split_lines(work.pair->after.value_or(""));
        ChangedLines changes =
            changed_lines(diff_lines(work.before_lines, work.after_lines));
        work.deleted.insert(changes.deleted.begin(), changes.deleted.end());
        work.added.insert(changes.added.begin(), changes.added.end());
        work.before_tree = parse_source(work.pair->before.value_or(""));
        work.after_tree = parse_source(work.pair->after.value_or(""));
        work.before_structure = collect_structure(work.before_tree);
        work.after_structure = collect_structure(work.after_tree);
    }

    if (options.slicing) {
        mark_stubs(files, true);
        mark_stubs(files, false);
    }

    std::vector<std::string> rendered;
    for (FileWork& work : files) {
        std::vector<Hunk> hunks;
        const std::vector<std::string>* context_lines = nullptr;
        SyntaxTree reduced_before_tree;
        SyntaxTree reduced_after_tree;
        const SyntaxTree* before_tree = nullptr;
        const SyntaxTree* after_tree = nullptr;
        ReducedPair reduced;

        if (options.slicing) {
            ReductionRequest before_request{&work.before_tree,
                                            &work.before_structure, work.deleted,
                                            work.before_stubs};
            ReductionRequest after_request{&work.after_tree, &work.after_structure,
                                           work.added, work.after_stubs};
            reduced = reduce_pair(before_request, after_request);
            hunks = diff_lines(reduced.before, reduced.after);
            if (hunks.empty()) continue;
            if (options.width_mode == WidthMode::Adaptive) {
                reduced_before_tree = parse_source(join_lines(reduced.before));
                reduced_after_tree = parse_source(join_lines(reduced.after));
                before_tree = &reduced_before_tree;
                after_tree = &reduced_after_tree;
            }
            context_lines = &reduced.before;
        } else {
            hunks = diff_lines(work.before_lines, work.after_lines);
            if (hunks.empty()) continue;
            before_tree = &work.before_tree;
            after_tree = &work.after_tree;
            context_lines = &work.before_lines;
        }

        if (options.width_mode == WidthMode::Adaptive) {
            expand_hunks(hunks, *before_tree, *after_tree, config.max_width,
                         config.boundary_policy);
        } else {
            set_constant_width(hunks, options.constant_width);
        }
        rendered.push_back(
            render_file_diff(work.pair->path, *context_lines, hunks));

        if (trace != nullptr) {
            FileTrace entry;
            entry.path = work.pair->path;
            if (options.slicing) {
                entry.reduced_before = std::move(reduced.before);
                entry.reduced_after = std::move(reduced.after);
            } else {
                entry.reduced_before = work.before_lines;
                entry.reduced_after = work.after_lines;
            }
            entry.rendered = rendered.back();
            trace->files.push_back(std::move(entry));
        }
    }

    std::string message = options.include_message ? record.message : "";
    ContextDocument assembled = assemble(message, rendered, config.max_message_size,
                                         config.max_code_size());
    doc.text = std::move(assembled.text);
    doc.token_count = assembled.token_count;
    return doc;
}

CorpusBuild build_documents(const std::vector<CommitRecord>& records,
                            const Config& config,
                            const PipelineOptions& options) {
    size_t count = records.size();
    std::vector<std::optional<ContextDocument>> slots(count);
    std::vector<std::optional<BuildFailure>> failures(count);

    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        for (size_t i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) {
            try {
                slots[i] = build_document(records[i], config, options);
            } catch (const std::exception& e) {
                failures[i] = BuildFailure{i, records[i].repo_id,
                                           records[i].commit_id, e.what()};
            }
        }
    };

    int threads = std::max(1, config.threads);
    if (threads == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        int spawn = std::min<size_t>(threads, count);
        pool.reserve(spawn);
        for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }

    CorpusBuild out;
    for (size_t i = 0; i < count; ++i) {
        if (slots[i]) {
            out.documents.push_back(std::move(*slots[i]));
        } else if (failures[i]) {
            out.failures.push_back(std::move(*failures[i]));
        }
    }
    return out;
}

IngestResult load_manifest_commits(const DatasetManifest& manifest,
                                   const std::filesystem::path& repos_dir) {
    IngestResult out;
    std::map<std::string, std::unique_ptr<GitRepository>> repos;
    std::map<std::string, std::string> broken;

    for (size_t i = 0; i < manifest.records.size(); ++i) {
        const ManifestRecord& entry = manifest.records[i];
        auto broken_it = broken.find(entry.repo);
        if (broken_it != broken.end()) {
            out.failures.push_back(
                BuildFailure{i, entry.repo, entry.commit, broken_it->second});
            continue;
        }
        auto repo_it = repos.find(entry.repo);
        if (repo_it == repos.end()) {
            try {
                repo_it = repos
                              .emplace(entry.repo, std::make_unique<GitRepository>(
                                                       repos_dir / entry.repo))
                              .first;
            } catch (const Error& e) {
                broken.emplace(entry.repo, e.what());
                out.failures.push_back(
                    BuildFailure{i, entry.repo, entry.commit, e.what()});
                continue;
            }
        }
        try {
            CommitRecord record =
                materialize_commit(*repo_it->second, entry.repo, entry.commit);
            record.label = entry.label;
            record.split = entry.split;
            out.records.push_back(std::move(record));
        } catch (const Error& e) {
            out.failures.push_back(
                BuildFailure{i, entry.repo, entry.commit, e.what()});
        }
    }
    return out;
}

} // namespace patchscout
