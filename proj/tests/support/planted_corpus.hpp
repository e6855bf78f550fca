#pragma once

// Synthetic labeled corpus for end-to-end runs. Every commit rewrites the
// same payload-normalization line, so the changed lines themselves carry no
// label signal; what separates the classes is four lines away, past any
// constant-width-3 window but inside an adaptive max-width-5 one: positive
// files feed the reworked payload into an emitting sink, negative files
// into a cache. Flavor rotates across repositories by (file + repo) parity
// so class and file names stay uncorrelated with labels across a
// project-level split.

#include <filesystem>
#include <string>
#include <vector>

#include "patchscout/ingest.hpp"
#include "support/git_fixture.hpp"

namespace test_support {

struct PlantedCorpus {
    std::filesystem::path repos_dir;
    patchscout::DatasetManifest manifest;
    // A repository outside the manifest with one planted positive among
    // routine commits; scanning its scan_window most recent commits covers
    // the plant but not the initial import.
    std::filesystem::path scan_repo;
    std::string planted_commit;
    int scan_window = 10;
};

inline const std::vector<std::string>& corpus_class_names() {
    static const std::vector<std::string> names = {
        "Alpha", "Beta", "Gamma", "Delta", "Epsilon", "Zeta", "Eta", "Theta"};
    return names;
}

inline std::string handler_source(const std::string& package_tag,
                                  const std::string& class_name,
                                  bool sink_flavor) {
    std::string emit_line = sink_flavor ? "            sink.emit(payload);\n"
                                        : "            cache.put(payload);\n";
    return "package app." + package_tag + ";\n" +
           "\n" +
           "public class " + class_name + " {\n" +
           "    private boolean ready = true;\n" +
           "\n" +
           "    public void process(Request request) {\n" +
           "        String payload = request.body();\n" +
           "        payload = payload.trim();\n" +
           "        String sig = digest(payload);\n" +
           "        audit.record(sig);\n" +
           "        if (ready) {\n" +
           emit_line +
           "        }\n" +
           "    }\n" +
           "}\n";
}

// The change every corpus commit makes, byte-identical across labels.
inline std::string rewrite_normalization(std::string source) {
    const std::string from = "payload = payload.trim();";
    const std::string to = "payload = normalize(escape(payload));";
    auto pos = source.find(from);
    if (pos == std::string::npos) {
        throw std::runtime_error("handler source lost its normalization line");
    }
    return source.replace(pos, from.size(), to);
}

inline std::string helper_method_addition(std::string source,
                                          const std::string& helper_name) {
    const std::string tail = "}\n";
    auto pos = source.rfind(tail);
    if (pos == std::string::npos) {
        throw std::runtime_error("handler source lost its closing brace");
    }
    std::string body = "\n    private int " + helper_name + "(String text) {\n" +
                       "        return text.split(\" \").length;\n" +
                       "    }\n";
    return source.insert(pos, body);
}

inline PlantedCorpus build_planted_corpus(const std::filesystem::path& root) {
    PlantedCorpus corpus;
    corpus.repos_dir = root / "repos";
    const auto& names = corpus_class_names();

    const std::vector<std::pair<std::string, std::string>> repos = {
        {"r1", "train"},      {"r2", "train"}, {"r3", "train"},
        {"r4", "train"},      {"r5", "validation"}, {"r6", "test"},
    };

    for (size_t k = 0; k < repos.size(); ++k) {
        const auto& [repo_id, split] = repos[k];
        auto repo_path = corpus.repos_dir / repo_id;
        std::filesystem::create_directories(repo_path);
        init_repo(repo_path);

        for (size_t i = 0; i < names.size(); ++i) {
            bool sink = (i + k) % 2 == 0;
            write_file(repo_path, "src/" + names[i] + ".java",
                       handler_source(repo_id, names[i], sink));
        }
        commit_all(repo_path, "initial import");

        for (size_t i = 0; i < names.size(); ++i) {
            bool sink = (i + k) % 2 == 0;
            write_file(repo_path, "src/" + names[i] + ".java",
                       rewrite_normalization(
                           handler_source(repo_id, names[i], sink)));
            std::string commit =
                commit_all(repo_path, "refactor payload normalization");
            patchscout::ManifestRecord record;
            record.repo = repo_id;
            record.commit = commit;
            record.label = sink;
            record.split = split;
            corpus.manifest.records.push_back(std::move(record));
        }
    }

    // Fresh repository: initial import, then ten routine commits with one
    // planted positive in the middle. Flavor parity continues the rotation
    // (k = 6), putting the sink flavor on the even-indexed names.
    const size_t k = repos.size();
    corpus.scan_repo = corpus.repos_dir / "scanme";
    std::filesystem::create_directories(corpus.scan_repo);
    init_repo(corpus.scan_repo);
    for (size_t i = 0; i < names.size(); ++i) {
        bool sink = (i + k) % 2 == 0;
        write_file(corpus.scan_repo, "src/" + names[i] + ".java",
                   handler_source("scanme", names[i], sink));
    }
    commit_all(corpus.scan_repo, "initial import");

    auto rewrite_commit = [&](size_t i) {
        bool sink = (i + k) % 2 == 0;
        write_file(corpus.scan_repo, "src/" + names[i] + ".java",
                   rewrite_normalization(
                       handler_source("scanme", names[i], sink)));
        return commit_all(corpus.scan_repo, "refactor payload normalization");
    };
    auto helper_commit = [&](size_t i, const std::string& helper_name,
                             bool rewritten) {
        bool sink = (i + k) % 2 == 0;
        std::string base = handler_source("scanme", names[i], sink);
        if (rewritten) base = rewrite_normalization(base);
        write_file(corpus.scan_repo, "src/" + names[i] + ".java",
                   helper_method_addition(base, helper_name));
        return commit_all(corpus.scan_repo, "add " + helper_name + " helper");
    };

    write_file(corpus.scan_repo, "README.md", "Build notes.\n");
    commit_all(corpus.scan_repo, "add build notes");
    rewrite_commit(1);
    helper_commit(3, "countWords", false);
    write_file(corpus.scan_repo, "README.md", "Build notes.\n\nRun make.\n");
    commit_all(corpus.scan_repo, "expand notes");
    rewrite_commit(5);
    corpus.planted_commit = rewrite_commit(0);
    rewrite_commit(7);
    write_file(corpus.scan_repo, "README.md",
               "Build notes.\n\nRun make.\n\nShip from main.\n");
    commit_all(corpus.scan_repo, "clarify release steps");
    helper_commit(5, "countLines", true);
    write_file(corpus.scan_repo, "README.md",
               "Build notes.\n\nRun make.\n\nShip from main.\n\nTag releases.\n");
    commit_all(corpus.scan_repo, "note tagging policy");

    corpus.scan_window = 10;
    return corpus;
}

} // namespace test_support
