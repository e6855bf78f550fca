#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "patchscout/config.hpp"
#include "patchscout/context.hpp"
#include "patchscout/ingest.hpp"

namespace patchscout {

// Commit in, classifier input out: scope filtering, per-version call-graph
// relevance, slicing, reduced-file diffing, context expansion, rendering,
// and budgeted assembly, in that order. Everything here is deterministic
// for a fixed config, so corpus builds are reproducible across runs and
// across worker counts.

enum class WidthMode {
    Adaptive, // per-boundary width chosen by syntax depth scoring
    Constant, // every boundary gets the same fixed width
};

struct PipelineOptions {
    WidthMode width_mode = WidthMode::Adaptive;
    int constant_width = 3;     // used when width_mode == Constant
    bool slicing = true;        // off = diff the full files untouched
    bool include_message = true; // off = document carries code only
};

// Intermediate artifacts for one contributing file, kept only when a trace
// sink is supplied: the reduced source each side was rendered from and the
// rendered diff block. Useful for inspection and for asserting on reduction
// results without re-running the slicer out of band.
struct FileTrace {
    std::string path;
    std::vector<std::string> reduced_before;
    std::vector<std::string> reduced_after;
    std::string rendered;
};

struct DocumentTrace {
    std::vector<FileTrace> files;
};

ContextDocument build_document(const CommitRecord& record, const Config& config,
                               const PipelineOptions& options = {},
                               DocumentTrace* trace = nullptr);

struct BuildFailure {
    size_t index = 0; // position in the input list
    std::string repo;
    std::string commit;
    std::string reason;
};

struct CorpusBuild {
    std::vector<ContextDocument> documents; // input order, failed ones omitted
    std::vector<BuildFailure> failures;
};

// Fans commits out across config.threads workers. Output order follows the
// input regardless of scheduling; a commit that fails to build is recorded
// and skipped rather than aborting the batch.
CorpusBuild build_documents(const std::vector<CommitRecord>& records,
                            const Config& config,
                            const PipelineOptions& options = {});

struct IngestResult {
    std::vector<CommitRecord> records; // manifest order, failed ones omitted
    std::vector<BuildFailure> failures;
};

// Materializes every manifest commit from repos_dir/<repo> clones, carrying
// label and split over from the manifest. A repository that cannot be
// opened fails all of its commits; other repositories are unaffected.
IngestResult load_manifest_commits(const DatasetManifest& manifest,
                                   const std::filesystem::path& repos_dir);

} // namespace patchscout
