// Acceptance suite: one line per criterion, exit status 1 if any fails.
// `fallacy_acceptance --write-golden` regenerates tests/golden from the
// current build; review the diff before committing it.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "commands.hpp"
#include "fallacy/corpus.hpp"
#include "fallacy/evaluator.hpp"
#include "fallacy/gateway.hpp"
#include "fallacy/prompt.hpp"
#include "fallacy/registry.hpp"
#include "match_cases.hpp"
#include "oracle.hpp"
#include "paths.hpp"
#include "random_fixtures.hpp"

namespace fs = std::filesystem;
using namespace fallacy;
using fallacy::testing::data_dir;
using fallacy::testing::golden_dir;

namespace {

bool g_write_golden = false;

class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 8) failures_.push_back(what);
        if (!ok) ++count_;
    }
    bool ok() const { return count_ == 0; }
    const std::vector<std::string>& failures() const { return failures_; }
    std::size_t count() const { return count_; }

private:
    std::vector<std::string> failures_;
    std::size_t count_ = 0;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void compare_golden(Check& c, const fs::path& golden, const std::string& actual) {
    if (g_write_golden) {
        fs::create_directories(golden.parent_path());
        std::ofstream(golden, std::ios::binary) << actual;
        return;
    }
    c.expect(fs::exists(golden), "missing golden " + golden.string());
    c.expect(slurp(golden) == actual, "bytes differ from " + golden.filename().string());
}

int run_tool(std::vector<std::string> args) {
    args.insert(args.begin(), "fallacy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

// ---------------------------------------------------------------------------

void registry_integrity(Check& c) {
    const auto reg = load_registry(data_dir() / "registry.json");
    c.expect(reg.unique_scheme_labels() == 28, "unique labels != 28");
    const std::map<DatasetKind, std::size_t> sizes = {{DatasetKind::Argotario, 5}, {DatasetKind::Propaganda, 15},
                                                      {DatasetKind::Logic, 13},    {DatasetKind::Covid19, 9},
                                                      {DatasetKind::Climate, 9}};
    for (auto [ds, n] : sizes)
        c.expect(reg.scheme_labels(ds).size() == n, std::string(to_string(ds)) + " scheme size");
    c.expect(reg.unify_label(DatasetKind::Logic, "False Causality") == "Causal Oversimplification", "False Causality");
    c.expect(reg.unify_label(DatasetKind::Argotario, "Appeal to Emotion") == "Emotional Language", "Appeal to Emotion");
    c.expect(reg.unify_label(DatasetKind::Logic, "Fallacy of Relevance") == "Red Herring", "Fallacy of Relevance");
    c.expect(parse_registry(serialize_registry(reg)) == reg, "round trip");
}

void framing_suite(Check& c) {
    // Sentences: "Aaaa bbbb." @0, "Cccc dddd eeee." @11, "Ffff gggg." @27, "Hhhh." @38
    const std::vector<SentenceSlice> s = {
        {"Aaaa bbbb.", 0}, {"Cccc dddd eeee.", 11}, {"Ffff gggg.", 27}, {"Hhhh.", 38}};
    struct Case {
        const char* name;
        std::vector<FragmentSpan> spans;
        std::vector<FramedSentence> expected;
    };
    const std::vector<Case> cases = {
        {"single span", {{5, 9, "Doubt"}}, {{0, "Aaaa bbbb.", "bbbb", 5, 9, "Doubt"}}},
        {"longest fragment",
         {{11, 15, "Doubt"}, {16, 25, "Slogans"}},
         {{1, "Cccc dddd eeee.", "dddd eeee", 5, 14, "Slogans"}}},
        {"equal-length tie",
         {{32, 36, "Slogans"}, {27, 31, "Strawman"}},
         {{2, "Ffff gggg.", "Ffff", 0, 4, "Strawman"}}},
        {"cross-sentence drop", {{5, 15, "Doubt"}, {28, 42, "Slogans"}}, {}},
        {"mixed",
         {{0, 4, "Doubt"}, {5, 20, "Slogans"}, {16, 25, "Red_Herring"}, {38, 42, "Flag-Waving"}},
         {{0, "Aaaa bbbb.", "Aaaa", 0, 4, "Doubt"},
          {1, "Cccc dddd eeee.", "dddd eeee", 5, 14, "Red_Herring"},
          {3, "Hhhh.", "Hhhh", 0, 4, "Flag-Waving"}}},
    };
    auto less = [](const FragmentSpan& a, const FragmentSpan& b) {
        return std::tie(a.start, a.end, a.label) < std::tie(b.start, b.end, b.label);
    };
    for (auto cs : cases) {
        c.expect(frame_propaganda(s, cs.spans, 43) == cs.expected, cs.name);
        std::sort(cs.spans.begin(), cs.spans.end(), less);
        do {
            c.expect(frame_propaganda(s, cs.spans, 43) == cs.expected, std::string(cs.name) + " (permuted)");
        } while (std::next_permutation(cs.spans.begin(), cs.spans.end(), less));
    }
}

std::vector<FallacyRecord> prompt_fixture(const SchemeRegistry& reg) {
    auto loaded = load_record_file(fallacy::testing::fixture_dir() / "prompt_records.jsonl", reg);
    if (!loaded.ok()) throw std::runtime_error("prompt fixture: " + loaded.errors.front().message);
    return loaded.records;
}

void prompt_counts(Check& c) {
    const auto reg = load_registry(data_dir() / "registry.json");
    const auto templates = TemplateSet::load(data_dir() / "templates");
    const auto records = prompt_fixture(reg);
    const std::map<DatasetKind, std::size_t> counts = {{DatasetKind::Argotario, 2}, {DatasetKind::Propaganda, 6},
                                                       {DatasetKind::Logic, 2},     {DatasetKind::Covid19, 2},
                                                       {DatasetKind::Climate, 4}};
    std::set<DatasetKind> covered;
    for (const auto& r : records) {
        covered.insert(r.dataset);
        const auto out = render_all({r}, Phase::Train, reg, templates);
        c.expect(out.size() == counts.at(r.dataset), r.id + " train count");
        for (const auto& inst : out) {
            if (inst.variant.style == PromptStyle::Def) {
                for (const auto& l : reg.scheme_labels(r.dataset))
                    c.expect(inst.source.find(reg.definition(l)) != std::string::npos, r.id + " definition of " + l);
            }
            if (inst.variant.fragment == FragmentMode::AsTarget) {
                const auto parsed = parse_fragment_target(inst.target);
                c.expect(parsed && parsed->first == r.unified_label && parsed->second == *r.fragment(),
                         r.id + " AsTarget round trip");
            }
        }
    }
    c.expect(covered.size() == 5, "fixture covers all datasets");
    std::ostringstream all;
    write_instances(all, render_all(records, Phase::Train, reg, templates));
    compare_golden(c, golden_dir() / "prompts.train.jsonl", all.str());
}

void matching_oracle(Check& c) {
    const auto& scheme = fallacy::testing::match_scheme();
    const auto& cases = fallacy::testing::match_cases();
    c.expect(cases.size() >= 30, "at least 30 rule-table cases");
    for (const auto& mc : cases)
        c.expect(resolve(mc.generated, mc.gold, mc.mode, scheme) == mc.expected, "case \"" + mc.generated + "\"");

    std::mt19937_64 rng(20230601);
    for (int t = 0; t < 200; ++t) {
        const auto f = fallacy::testing::random_fixture(rng);
        const auto got = score_predictions(f.predictions(), f.scheme, MatchMode::Strict);
        const auto want = fallacy::testing::brute_force_score(f.scheme, f.gold, f.resolved);
        const std::string tag = "fixture " + std::to_string(t);
        c.expect(got.accuracy == want.accuracy, tag + " accuracy");
        c.expect(got.macro_f1 == want.macro_f1, tag + " macro_f1");
        c.expect(micro_f1(got.confusion) == got.accuracy, tag + " micro_f1");
        c.expect(got.per_class.size() == want.per_class.size(), tag + " class set");
        for (std::size_t i = 0; i < std::min(got.per_class.size(), want.per_class.size()); ++i) {
            const auto& g = got.per_class[i];
            const auto& w = want.per_class[i];
            c.expect(g.label == w.label && g.precision == w.precision && g.recall == w.recall && g.f1 == w.f1 &&
                         g.support == w.support,
                     tag + " class " + w.label);
        }
    }
}

void kappa_suite(Check& c) {
    const std::vector<std::string> a = {"x", "x", "y", "y"};
    const std::vector<std::string> b = {"x", "y", "y", "y"};
    const std::vector<std::string> mixed = {"p", "q", "r", "p", "q"};
    c.expect(cohens_kappa(mixed, mixed).kappa == 1.0, "identical lists");
    c.expect(std::abs(cohens_kappa(a, b).kappa - 0.5) <= 1e-12, "4-item fixture");
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 25)(rng);
        const auto x = fallacy::testing::random_labels(rng, n, 4);
        const auto y = fallacy::testing::random_labels(rng, n, 4);
        c.expect(cohens_kappa(x, y).kappa == cohens_kappa(y, x).kappa, "symmetry " + std::to_string(t));
    }
}

std::vector<std::string> e2e_files() {
    std::vector<std::string> files = {"report.json"};
    for (auto ds : kAllDatasets) {
        std::string stem(to_string(ds));
        std::transform(stem.begin(), stem.end(), stem.begin(), [](unsigned char ch) { return std::tolower(ch); });
        for (const char* suffix : {".per_class.tsv", ".per_class.txt", ".confusion.tsv", ".confusion.txt"})
            files.push_back(stem + suffix);
    }
    return files;
}

void end_to_end(Check& c) {
    const fs::path syn = data_dir() / "synthetic";
    const auto root = fallacy::testing::scratch_dir("acceptance-e2e");
    std::map<int, fs::path> runs;
    for (int parallelism : {1, 8}) {
        const auto dir = root / ("p" + std::to_string(parallelism));
        const std::string out = dir.string();
        c.expect(run_tool({"ingest", "--out", out, "--input", (syn / "argotario.jsonl").string(), "--input",
                      (syn / "logic.jsonl").string(), "--input", (syn / "covid19.jsonl").string(), "--input",
                      (syn / "climate.jsonl").string(), "--articles",
                      (syn / "propaganda_articles.jsonl").string()}) == 0,
                 "ingest");
        c.expect(run_tool({"render", "--out", out}) == 0, "render");
        c.expect(run_tool({"run", "--out", out, "--backend", "mock", "--parallelism", std::to_string(parallelism)}) == 0,
                 "run");
        c.expect(run_tool({"score", "--out", out}) == 0, "score");
        runs[parallelism] = dir;
    }
    for (const auto& name : e2e_files()) {
        const auto p1 = slurp(runs[1] / name);
        c.expect(!p1.empty(), name + " written");
        c.expect(p1 == slurp(runs[8] / name), name + " identical across parallelism");
        compare_golden(c, golden_dir() / "e2e" / name, p1);
    }

    // Hand-computed from the synthetic texts and the mock rule.
    const std::map<std::string, std::pair<double, double>> expected = {
        {"Argotario", {3.0 / 5, (2.0 / 3 + 1 + 0 + 1 + 0) / 5}},
        {"Propaganda", {3.0 / 4, (2.0 / 3 + 1 + 1 + 0) / 4}},
        {"Logic", {3.0 / 4, 3.0 / 4}},
        {"Covid19", {3.0 / 4, 3.0 / 4}},
        {"Climate", {2.0 / 3, 2.0 / 3}},
    };
    const auto reports = reports_from_json(slurp(runs[1] / "report.json"));
    c.expect(reports.size() == expected.size(), "one report per dataset");
    for (const auto& r : reports) {
        auto it = expected.find(r.dataset);
        c.expect(it != expected.end(), "unexpected dataset " + r.dataset);
        if (it == expected.end()) continue;
        c.expect(std::abs(r.accuracy - it->second.first) < 1e-12, r.dataset + " accuracy");
        c.expect(std::abs(r.macro_f1 - it->second.second) < 1e-12, r.dataset + " macro_f1");
    }
    fs::remove_all(root);
}

void split_determinism(Check& c) {
    std::vector<FallacyRecord> records;
    char buf[32];
    for (int i = 0; i < 1000; ++i) {
        std::snprintf(buf, sizeof buf, "synthetic-%04d", i);
        FallacyRecord r;
        r.id = buf;
        records.push_back(r);
    }
    const auto first = assign_splits(records, SplitRatios{}, 42);
    std::map<Split, int> tally;
    for (const auto& r : first) ++tally[*r.split];
    c.expect(std::abs(tally[Split::Train] - 650) <= 2, "train " + std::to_string(tally[Split::Train]));
    c.expect(std::abs(tally[Split::Dev] - 150) <= 2, "dev " + std::to_string(tally[Split::Dev]));
    c.expect(std::abs(tally[Split::Test] - 200) <= 2, "test " + std::to_string(tally[Split::Test]));

    c.expect(assign_splits(records, SplitRatios{}, 42) == first, "stable across runs");

    auto grown = records;
    for (int i = 0; i < 100; ++i) {
        FallacyRecord r;
        r.id = "inserted-" + std::to_string(i);
        grown.insert(grown.begin() + i * 7, r);
    }
    std::map<std::string, Split> before;
    for (const auto& r : first) before[r.id] = *r.split;
    for (const auto& r : assign_splits(grown, SplitRatios{}, 42)) {
        auto it = before.find(r.id);
        if (it != before.end()) c.expect(*r.split == it->second, "insertion moved " + r.id);
    }
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--write-golden") g_write_golden = true;

    struct Criterion {
        const char* name;
        double limit_ms;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria = {
        {"registry integrity", 1000, registry_integrity},
        {"propaganda framing", 1000, framing_suite},
        {"prompt counts and golden renders", 1000, prompt_counts},
        {"matching and metrics oracle", 5000, matching_oracle},
        {"cohen's kappa", 1000, kappa_suite},
        {"end-to-end mock pipeline", 10000, end_to_end},
        {"split determinism", 1000, split_determinism},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        c.expect(ms <= cr.limit_ms, "runtime over limit");
        char line[160];
        std::snprintf(line, sizeof line, "%s  %-34s %9.1f ms  (limit %.0f ms)", c.ok() ? "PASS" : "FAIL", cr.name, ms,
                      cr.limit_ms);
        std::cout << line << "\n";
        for (const auto& f : c.failures()) std::cout << "      - " << f << "\n";
        if (c.count() > c.failures().size())
            std::cout << "      ... " << c.count() - c.failures().size() << " more\n";
        failed += !c.ok();
    }
    if (g_write_golden) std::cout << "golden files written to " << golden_dir().string() << "\n";
    std::cout << (failed ? "FAILED " : "OK ") << criteria.size() - static_cast<std::size_t>(failed) << "/"
              << criteria.size() << "\n";
    return failed ? 1 : 0;
}
