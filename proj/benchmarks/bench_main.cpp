#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "patchscout/config.hpp"
#include "patchscout/context.hpp"
#include "patchscout/diff.hpp"
#include "patchscout/encoder.hpp"
#include "patchscout/flow_graph.hpp"
#include "patchscout/ingest.hpp"
#include "patchscout/pipeline.hpp"
#include "patchscout/slicer.hpp"
#include "patchscout/syntax.hpp"
#include "patchscout/tokenizer.hpp"

namespace {

std::vector<std::string> synthetic_lines(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> lines;
    lines.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        lines.push_back("int v" + std::to_string(rng() % 50) + " = f(" +
                        std::to_string(rng() % 100) + ");");
    }
    return lines;
}

// A class with `methods` methods of `statements` statements each, sharing
// five fields so the flow graphs have data edges worth slicing.
std::string synthetic_java(int methods, int statements) {
    std::string src = "package bench.sample;\n\nclass Workload {\n";
    for (int f = 0; f < 5; ++f) {
        src += "    private int f" + std::to_string(f) + ";\n";
    }
    src += "\n";
    for (int m = 0; m < methods; ++m) {
        src += "    void m" + std::to_string(m) + "(int a) {\n";
        for (int s = 0; s < statements; ++s) {
            std::string v = "v" + std::to_string(s);
            std::string field = "f" + std::to_string(s % 5);
            src += "        int " + v + " = " + field + " + a;\n";
            if (s % 3 == 2) {
                src += "        if (" + v + " > 0) {\n";
                src += "            " + field + " = " + v + ";\n";
                src += "        }\n";
            }
        }
        src += "    }\n";
    }
    src += "}\n";
    return src;
}

void BM_DiffLines(benchmark::State& state) {
    auto before = synthetic_lines(static_cast<size_t>(state.range(0)), 7);
    auto after = before;
    std::mt19937_64 rng(11);
    for (size_t i = 0; i < after.size(); i += 10) {
        after[i] = "int w" + std::to_string(rng() % 50) + " = g();";
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(patchscout::diff_lines(before, after));
    }
}
BENCHMARK(BM_DiffLines)->Arg(200)->Arg(2000);

void BM_Tokenize(benchmark::State& state) {
    std::string text;
    for (const auto& l : synthetic_lines(static_cast<size_t>(state.range(0)), 3)) {
        text += l;
        text += '\n';
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(patchscout::count_tokens(text));
    }
}
BENCHMARK(BM_Tokenize)->Arg(200)->Arg(2000);

void BM_ParseSource(benchmark::State& state) {
    std::string src = synthetic_java(static_cast<int>(state.range(0)), 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(patchscout::parse_source(src));
    }
}
BENCHMARK(BM_ParseSource)->Arg(4)->Arg(32);

void BM_BuildFlowGraph(benchmark::State& state) {
    std::string src = synthetic_java(1, static_cast<int>(state.range(0)));
    patchscout::SyntaxTree tree = patchscout::parse_source(src);
    patchscout::FileStructure structure = patchscout::collect_structure(tree);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            patchscout::build_flow_graph(tree, structure, structure.methods[0]));
    }
}
BENCHMARK(BM_BuildFlowGraph)->Arg(12)->Arg(96);

void BM_BiBfsSlice(benchmark::State& state) {
    std::string src = synthetic_java(1, static_cast<int>(state.range(0)));
    patchscout::SyntaxTree tree = patchscout::parse_source(src);
    patchscout::FileStructure structure = patchscout::collect_structure(tree);
    patchscout::FlowGraph graph =
        patchscout::build_flow_graph(tree, structure, structure.methods[0]);
    std::vector<int> seeds = {0, static_cast<int>(graph.vertices.size()) / 2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(patchscout::bi_bfs_slice(graph, seeds));
    }
}
BENCHMARK(BM_BiBfsSlice)->Arg(12)->Arg(96);

void BM_ExpandHunk(benchmark::State& state) {
    std::string src = synthetic_java(8, 12);
    patchscout::SyntaxTree tree = patchscout::parse_source(src);
    auto order = patchscout::width_order(static_cast<int>(state.range(0)));
    patchscout::Hunk hunk;
    hunk.before = {30, 1};
    hunk.after = {30, 1};
    hunk.deleted_lines = {"old"};
    hunk.added_lines = {"new"};
    for (auto _ : state) {
        benchmark::DoNotOptimize(patchscout::expand(
            hunk, tree, tree, order, patchscout::BoundaryPolicy::Argmax));
    }
}
BENCHMARK(BM_ExpandHunk)->Arg(5)->Arg(20);

void BM_Encode(benchmark::State& state) {
    patchscout::HashedNgramEncoder encoder(4096, 1);
    std::string text = synthetic_java(static_cast<int>(state.range(0)), 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(encoder.encode(text));
    }
}
BENCHMARK(BM_Encode)->Arg(2)->Arg(16);

void BM_BuildDocument(benchmark::State& state) {
    patchscout::CommitRecord record;
    record.repo_id = "bench";
    record.commit_id = "deadbeef";
    record.message = "tighten the bounds check before writing";
    record.label = true;
    record.split = "train";
    std::string before = synthetic_java(static_cast<int>(state.range(0)), 12);
    std::string after = before;
    auto at = after.find("int v5 = f0 + a;");
    if (at != std::string::npos) {
        after.replace(at, 16, "int v5 = g(f0);");
    }
    record.file_changes.push_back(
        {"src/main/java/bench/sample/Workload.java", before, after});
    patchscout::Config config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(patchscout::build_document(record, config));
    }
}
BENCHMARK(BM_BuildDocument)->Arg(4)->Arg(16);

} // namespace

BENCHMARK_MAIN();
