#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "fallacy/corpus.hpp"
#include "fallacy/evaluator.hpp"
#include "fallacy/gateway.hpp"
#include "fallacy/prompt.hpp"
#include "fallacy/registry.hpp"

using namespace fallacy;

namespace {

const std::filesystem::path kData = FALLACY_DATA_DIR;

const SchemeRegistry& registry() {
    static const SchemeRegistry r = load_registry(kData / "registry.json");
    return r;
}

const TemplateSet& templates() {
    static const TemplateSet t = TemplateSet::load(kData / "templates");
    return t;
}

std::vector<FallacyRecord> propaganda_records(std::size_t n) {
    std::vector<FallacyRecord> out;
    const auto& labels = registry().scheme_labels(DatasetKind::Propaganda);
    for (std::size_t i = 0; i < n; ++i) {
        FallacyRecord r;
        r.id = "p" + std::to_string(i);
        r.dataset = DatasetKind::Propaganda;
        r.sentence = "Sentence number " + std::to_string(i) + " has a loaded phrase somewhere in the middle of it.";
        r.fragment_start = 20;
        r.fragment_end = 33;
        r.unified_label = labels[i % labels.size()];
        r.original_label = r.unified_label;
        out.push_back(r);
    }
    return out;
}

void BM_RenderTrain(benchmark::State& state) {
    const auto records = propaganda_records(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto out = render_all(records, Phase::Train, registry(), templates());
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 6);
}
BENCHMARK(BM_RenderTrain)->Arg(100)->Arg(1000);

void BM_MockRun(benchmark::State& state) {
    const auto instances = render_all(propaganda_records(static_cast<std::size_t>(state.range(0))), Phase::Eval,
                                      registry(), templates());
    MockBackend mock;
    RunOptions opts;
    opts.parallelism = 4;
    for (auto _ : state) {
        auto m = run_batch(instances, mock, opts);
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MockRun)->Arg(1000);

void BM_Score(benchmark::State& state) {
    const auto& scheme = registry().scheme_labels(DatasetKind::Propaganda);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick(0, scheme.size() - 1);
    RunManifest m;
    std::map<std::string, std::string> golds;
    for (std::int64_t i = 0; i < state.range(0); ++i) {
        const auto id = "r" + std::to_string(i);
        m.entries.push_back({id, "It is " + scheme[pick(rng)] + ".", 0, 0, false, ""});
        golds[id] = scheme[pick(rng)];
    }
    for (auto _ : state) {
        auto r = score(m, golds, MatchMode::Contains, scheme);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Score)->Arg(1000)->Arg(10000);

void BM_Framing(benchmark::State& state) {
    std::vector<SentenceSlice> sentences;
    std::vector<FragmentSpan> spans;
    for (std::size_t i = 0; i < 200; ++i) {
        sentences.push_back({std::string(40, 'x'), i * 41});
        spans.push_back({i * 41 + 2, i * 41 + 10, "Doubt"});
        spans.push_back({i * 41 + 5, i * 41 + 30, "Slogans"});
        if (i + 1 < 200) spans.push_back({i * 41 + 30, i * 41 + 50, "Strawman"});
    }
    for (auto _ : state) {
        auto out = frame_propaganda(sentences, spans);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_Framing);

void BM_SplitAssign(benchmark::State& state) {
    std::vector<FallacyRecord> records(10000);
    for (std::size_t i = 0; i < records.size(); ++i) records[i].id = "rec-" + std::to_string(i);
    for (auto _ : state) {
        auto out = assign_splits(records, SplitRatios{}, 42);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_SplitAssign);

}  // namespace

BENCHMARK_MAIN();
