#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fallacy/corpus.hpp"
#include "fallacy/error.hpp"
#include "fallacy/evaluator.hpp"
#include "fallacy/gateway.hpp"
#include "fallacy/prompt.hpp"
#include "fallacy/registry.hpp"
#include "fallacy/text.hpp"

namespace fs = std::filesystem;

namespace fallacy::cli {
namespace {

#ifndef FALLACY_DATA_DIR
#define FALLACY_DATA_DIR "data"
#endif

constexpr std::uint64_t kDefaultSeed = 42;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string registry = std::string(FALLACY_DATA_DIR) + "/registry.json";
    std::string templates = std::string(FALLACY_DATA_DIR) + "/templates";
    std::uint64_t seed = kDefaultSeed;
    std::string out = "out";
};

struct IngestArgs {
    std::vector<std::string> inputs;
    std::vector<std::string> kinds;
    std::vector<std::string> articles;
    std::vector<double> ratios{0.65, 0.15, 0.20};
    bool keep_no_fallacy = false;
    std::string no_fallacy_label{kDefaultNoFallacyLabel};
};

struct StatsArgs {
    std::string records;
};

struct RenderArgs {
    std::string records;
    std::string phase = "eval";
    std::string style = "list";
    std::string fragment_mode = "in-prompt";
    std::string comment_mode = "without";
    std::string variant;
    std::vector<std::string> datasets;
    std::vector<std::string> splits;
    std::size_t max_source_chars = 0;
    std::size_t max_target_chars = 0;
    std::size_t fewshot = 0;
    bool explanations = false;
};

struct RunArgs {
    std::string instances;
    std::string backend = "mock";
    std::size_t parallelism = 1;
    std::size_t retries = 3;
    std::size_t backoff_ms = 500;
    std::size_t max_new_tokens = 0;
    std::vector<std::string> mock_fail;
};

struct ScoreArgs {
    std::string manifest;
    std::string records;
    std::string mode = "strict";
    std::string macro = "gold-present";
};

struct ReportArgs {
    std::string report;
    std::string format = "aligned";
};

struct KappaArgs {
    std::string a;
    std::string b;
};

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::vector<std::string> mock_fail;
};

std::string or_default(const std::string& value, const fs::path& fallback) {
    return value.empty() ? fallback.string() : value;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    return f;
}

void require_file(const fs::path& path, const char* what) {
    if (!fs::is_regular_file(path)) throw ConfigError(std::string(what) + " not found: " + path.string());
}

SchemeRegistry open_registry(const Globals& g) {
    require_file(g.registry, "registry");
    try {
        return load_registry(g.registry);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

TemplateSet open_templates(const Globals& g) {
    if (!fs::is_directory(g.templates)) throw ConfigError("template directory not found: " + g.templates);
    try {
        return TemplateSet::load(g.templates);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

std::vector<FallacyRecord> open_records(const fs::path& path, const SchemeRegistry& registry) {
    require_file(path, "records file");
    LoadOptions opts;
    auto loaded = load_record_file(path, registry, opts);
    if (!loaded.ok()) {
        const auto& e = loaded.errors.front();
        throw DataError(path.string() + ":" + std::to_string(e.line) + ": " + e.message);
    }
    return std::move(loaded.records);
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::vector<ScriptedFailureBackend::Rule> parse_fail_rules(const std::vector<std::string>& specs) {
    std::vector<ScriptedFailureBackend::Rule> rules;
    auto number = [](std::string_view s) -> std::optional<long> {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) return std::nullopt;
        return std::stol(std::string(s));
    };
    for (const auto& spec : specs) {
        std::string_view rest = spec;
        ScriptedFailureBackend::Rule rule;
        auto last = rest.rfind(':');
        if (last == std::string_view::npos) throw ConfigError("--mock-fail expects TRIGGER:TIMES[:STATUS], got " + spec);
        auto tail = number(rest.substr(last + 1));
        if (!tail) throw ConfigError("--mock-fail expects TRIGGER:TIMES[:STATUS], got " + spec);
        rest = rest.substr(0, last);
        auto prev = rest.rfind(':');
        std::optional<long> times = prev == std::string_view::npos ? std::nullopt : number(rest.substr(prev + 1));
        if (times && prev > 0) {
            rule.times = static_cast<std::size_t>(*times);
            rule.status = static_cast<int>(*tail);
            rest = rest.substr(0, prev);
        } else {
            rule.times = static_cast<std::size_t>(*tail);
        }
        if (rest.empty()) throw ConfigError("--mock-fail trigger must not be empty");
        rule.trigger = std::string(rest);
        rules.push_back(std::move(rule));
    }
    return rules;
}

std::shared_ptr<Backend> make_backend(const std::string& spec, const std::vector<std::string>& fail_specs) {
    std::shared_ptr<Backend> backend;
    if (spec == "mock") {
        backend = std::make_shared<MockBackend>();
    } else {
        try {
            backend = std::make_shared<HttpBackend>(spec);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (!fail_specs.empty())
        backend = std::make_shared<ScriptedFailureBackend>(backend, parse_fail_rules(fail_specs));
    return backend;
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Globals& g, const IngestArgs& a, std::ostream& out) {
    if (a.inputs.empty() && a.articles.empty()) throw ConfigError("ingest needs --input or --articles");
    if (!a.kinds.empty() && a.kinds.size() != 1 && a.kinds.size() != a.inputs.size())
        throw ConfigError("--kind must be given once or once per --input");
    if (a.ratios.size() != 3) throw ConfigError("--ratios expects three values");
    const SplitRatios ratios{a.ratios[0], a.ratios[1], a.ratios[2]};
    if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0 ||
        std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9)
        throw ConfigError("--ratios must be non-negative and sum to 1");

    const auto registry = open_registry(g);
    LoadOptions opts;
    opts.no_fallacy_label = a.no_fallacy_label;

    std::vector<FallacyRecord> records;
    std::vector<std::string> errors;
    std::size_t ignored = 0;

    for (std::size_t i = 0; i < a.inputs.size(); ++i) {
        const fs::path path = a.inputs[i];
        require_file(path, "input");
        std::string kind = a.kinds.empty() ? "auto" : a.kinds.size() == 1 ? a.kinds[0] : a.kinds[i];
        LoadResult loaded;
        if (text::iequals(kind, "auto")) {
            loaded = load_record_file(path, registry, opts);
        } else {
            auto ds = parse_dataset(kind);
            if (!ds) throw ConfigError("unknown dataset kind \"" + kind + "\"");
            loaded = load_records(path, *ds, registry, opts);
        }
        for (const auto& e : loaded.errors)
            errors.push_back(path.string() + ":" + std::to_string(e.line) + ": " + e.message);
        records.insert(records.end(), loaded.records.begin(), loaded.records.end());
    }
    for (const auto& file : a.articles) {
        require_file(file, "article file");
        auto ingest = load_propaganda_articles(file, registry);
        for (const auto& e : ingest.errors)
            errors.push_back(file + ":" + std::to_string(e.line) + ": " + e.message);
        ignored += ingest.ignored_spans;
        records.insert(records.end(), ingest.records.begin(), ingest.records.end());
    }

    std::map<std::string, std::size_t> seen;
    std::vector<FallacyRecord> unique;
    for (auto& r : records) {
        if (seen.count(r.id)) {
            errors.push_back("duplicate record id \"" + r.id + "\" across inputs");
            continue;
        }
        seen.emplace(r.id, unique.size());
        unique.push_back(std::move(r));
    }

    const std::size_t before = unique.size();
    if (!a.keep_no_fallacy) unique = filter_no_fallacy(std::move(unique), a.no_fallacy_label);
    const std::size_t dropped = before - unique.size();
    unique = assign_splits(std::move(unique), ratios, g.seed);

    const fs::path dir = g.out;
    ensure_dir(dir);
    {
        auto f = open_out(dir / "records.jsonl");
        write_records(f, unique);
    }
    {
        auto f = open_out(dir / "ingest_errors.log");
        for (const auto& e : errors) f << e << '\n';
    }
    out << "records " << unique.size() << "\n";
    out << "errors " << errors.size() << "\n";
    if (dropped) out << "no_fallacy_dropped " << dropped << "\n";
    if (ignored) out << "ignored_spans " << ignored << "\n";
    return errors.empty() ? kExitOk : kExitDataError;
}

int cmd_stats(const Globals& g, const StatsArgs& a, std::ostream& out) {
    const auto registry = open_registry(g);
    const auto records = open_records(or_default(a.records, fs::path(g.out) / "records.jsonl"), registry);
    const auto stats = corpus_stats(records);

    out << "dataset\tsplit\tlabel\tcount\n";
    for (const auto& [key, n] : stats.counts) {
        const auto& [ds, split, label] = key;
        out << to_string(ds) << '\t' << to_string(split) << '\t' << label << '\t' << n << '\n';
    }
    out << "\nsplit\ttotal\n";
    for (const auto& [split, n] : stats.split_totals) out << to_string(split) << '\t' << n << '\n';
    if (stats.unassigned) out << "unassigned\t" << stats.unassigned << '\n';
    out << "\ndataset\ttop_k\ttop_k_share\tflagged\n";
    for (const auto& [ds, s] : stats.imbalance) {
        out << to_string(ds) << '\t' << s.top_k << '\t' << fixed4(s.top_k_share) << '\t'
            << (s.flagged ? "yes" : "no") << '\n';
    }
    return kExitOk;
}

int cmd_render(const Globals& g, const RenderArgs& a, std::ostream& out) {
    const auto registry = open_registry(g);
    const auto templates = open_templates(g);

    auto phase = parse_phase(a.phase);
    if (!phase) throw ConfigError("unknown phase \"" + a.phase + "\"");

    PromptVariant variant;
    if (!a.variant.empty()) {
        auto v = parse_variant(a.variant);
        if (!v) throw ConfigError("unknown variant \"" + a.variant + "\"");
        variant = *v;
    } else {
        auto style = parse_style(a.style);
        auto frag = parse_fragment_mode(a.fragment_mode);
        auto comment = parse_comment_mode(a.comment_mode);
        if (!style) throw ConfigError("unknown style \"" + a.style + "\"");
        if (!frag) throw ConfigError("unknown fragment mode \"" + a.fragment_mode + "\"");
        if (!comment) throw ConfigError("unknown comment mode \"" + a.comment_mode + "\"");
        variant = {*style, *frag, *comment};
    }

    std::vector<DatasetKind> datasets;
    for (const auto& name : a.datasets) {
        auto ds = parse_dataset(name);
        if (!ds) throw ConfigError("unknown dataset \"" + name + "\"");
        datasets.push_back(*ds);
    }
    std::vector<Split> splits;
    for (const auto& name : a.splits) {
        auto s = parse_split(name);
        if (!s) throw ConfigError("unknown split \"" + name + "\"");
        splits.push_back(*s);
    }
    if (a.fewshot > 0 && *phase != Phase::Eval) throw ConfigError("--fewshot requires --phase eval");

    const auto all = open_records(or_default(a.records, fs::path(g.out) / "records.jsonl"), registry);
    std::vector<FallacyRecord> selected;
    for (const auto& r : all) {
        if (r.unified_label.empty()) continue;
        if (!datasets.empty() && std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
            continue;
        if (!splits.empty() && (!r.split || std::find(splits.begin(), splits.end(), *r.split) == splits.end()))
            continue;
        selected.push_back(r);
    }

    std::vector<RenderedInstance> instances;
    if (a.fewshot > 0) {
        for (const auto& r : selected) {
            FewShotSpec spec{r.dataset, a.fewshot, a.explanations, g.seed};
            RenderedInstance inst;
            inst.record_id = r.id;
            inst.dataset = r.dataset;
            inst.variant = normalize_variant(r.dataset, {});
            inst.source = build_fewshot(spec, all, registry, templates, r);
            inst.target = r.unified_label;
            instances.push_back(std::move(inst));
        }
    } else {
        instances = render_all(selected, *phase, registry, templates, variant);
    }

    if (a.max_source_chars > 0 || a.max_target_chars > 0) {
        const std::size_t src = a.max_source_chars ? a.max_source_chars : std::numeric_limits<std::size_t>::max();
        const std::size_t tgt = a.max_target_chars ? a.max_target_chars : std::numeric_limits<std::size_t>::max();
        for (auto& inst : instances) inst = budget_truncate(inst, src, tgt);
    }

    const fs::path dir = g.out;
    ensure_dir(dir);
    auto f = open_out(dir / "instances.jsonl");
    write_instances(f, instances);
    out << "instances " << instances.size() << "\n";
    return kExitOk;
}

int cmd_run(const Globals& g, const RunArgs& a, std::ostream& out) {
    if (a.parallelism == 0) throw ConfigError("--parallelism must be at least 1");
    auto backend = make_backend(a.backend, a.mock_fail);
    const fs::path in = or_default(a.instances, fs::path(g.out) / "instances.jsonl");
    require_file(in, "instances file");
    const auto instances = read_instances(in);

    bool fewshot = false;
    for (const auto& inst : instances)
        if (inst.source.find(kExemplarDelimiter) != std::string::npos) fewshot = true;

    RunOptions opts;
    opts.parallelism = a.parallelism;
    opts.retry.retry_limit = a.retries;
    opts.retry.backoff_base = std::chrono::milliseconds(a.backoff_ms);
    opts.max_new_tokens = a.max_new_tokens ? a.max_new_tokens : fewshot ? kFewShotMaxNewTokens : kLabelMaxNewTokens;
    const auto manifest = run_batch(instances, *backend, opts);

    const fs::path dir = g.out;
    ensure_dir(dir);
    auto f = open_out(dir / "manifest.jsonl");
    write_manifest(f, manifest);
    std::size_t retries = 0;
    for (const auto& e : manifest.entries) retries += e.retries;
    out << "entries " << manifest.entries.size() << "\n";
    out << "retries " << retries << "\n";
    out << "failed " << manifest.failed_count() << "\n";
    return manifest.failed_count() ? kExitBackendExhausted : kExitOk;
}

void write_tables(const fs::path& dir, const EvalReport& report) {
    const std::string stem = text::ascii_lower(report.dataset);
    open_out(dir / (stem + ".per_class.tsv")) << per_class_table(report, TableFormat::Delimited);
    open_out(dir / (stem + ".per_class.txt")) << per_class_table(report, TableFormat::Aligned);
    open_out(dir / (stem + ".confusion.tsv")) << confusion_grid(report.confusion, TableFormat::Delimited);
    open_out(dir / (stem + ".confusion.txt")) << confusion_grid(report.confusion, TableFormat::Aligned);
}

int cmd_score(const Globals& g, const ScoreArgs& a, std::ostream& out) {
    auto mode = parse_match_mode(a.mode);
    if (!mode) throw ConfigError("unknown match mode \"" + a.mode + "\"");
    auto macro = parse_macro_average(a.macro);
    if (!macro) throw ConfigError("unknown macro average \"" + a.macro + "\"");

    const auto registry = open_registry(g);
    const auto records = open_records(or_default(a.records, fs::path(g.out) / "records.jsonl"), registry);
    const fs::path manifest_path = or_default(a.manifest, fs::path(g.out) / "manifest.jsonl");
    require_file(manifest_path, "manifest");
    const auto manifest = read_manifest(manifest_path);

    std::map<std::string, const FallacyRecord*> by_id;
    for (const auto& r : records) by_id.emplace(r.id, &r);

    std::map<DatasetKind, RunManifest> parts;
    std::map<DatasetKind, std::map<std::string, std::string>> golds;
    for (const auto& e : manifest.entries) {
        auto it = by_id.find(e.record_id);
        if (it == by_id.end()) throw DataError("no gold record for manifest entry \"" + e.record_id + "\"");
        const auto& r = *it->second;
        if (r.unified_label.empty()) throw DataError("record \"" + r.id + "\" has no unified label");
        auto& part = parts[r.dataset];
        part.meta = manifest.meta;
        part.entries.push_back(e);
        golds[r.dataset].emplace(r.id, r.unified_label);
    }

    std::vector<EvalReport> reports;
    for (auto ds : kAllDatasets) {
        auto it = parts.find(ds);
        if (it == parts.end()) continue;
        const auto& scheme = registry.scheme_labels(ds);
        auto report = score(it->second, golds[ds], *mode, scheme, *macro);
        report.dataset = std::string(to_string(ds));
        reports.push_back(std::move(report));
    }

    const fs::path dir = g.out;
    ensure_dir(dir);
    open_out(dir / "report.json") << reports_to_json(reports);
    for (const auto& r : reports) {
        write_tables(dir, r);
        out << r.dataset << " accuracy " << fixed4(r.accuracy) << " macro_f1 " << fixed4(r.macro_f1) << " n "
            << r.n_predictions << " failed " << r.n_failed_requests << "\n";
    }
    return kExitOk;
}

int cmd_report(const Globals& g, const ReportArgs& a, std::ostream& out) {
    TableFormat format;
    if (a.format == "aligned") format = TableFormat::Aligned;
    else if (a.format == "tsv") format = TableFormat::Delimited;
    else throw ConfigError("unknown format \"" + a.format + "\"");

    const fs::path path = or_default(a.report, fs::path(g.out) / "report.json");
    require_file(path, "report");
    std::ifstream f(path, std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    const auto reports = reports_from_json(buf.str());
    bool first = true;
    for (const auto& r : reports) {
        if (!first) out << '\n';
        first = false;
        out << "# " << r.dataset << " (" << to_string(r.mode) << ", macro " << to_string(r.macro_average)
            << ")\n";
        out << per_class_table(r, format) << '\n';
        out << confusion_grid(r.confusion, format);
    }
    return kExitOk;
}

std::vector<std::string> read_label_lines(const fs::path& path) {
    require_file(path, "label file");
    std::ifstream f(path, std::ios::binary);
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(f, line)) {
        auto t = text::trim(line);
        if (!t.empty()) labels.emplace_back(t);
    }
    return labels;
}

int cmd_kappa(const KappaArgs& a, std::ostream& out) {
    const auto la = read_label_lines(a.a);
    const auto lb = read_label_lines(a.b);
    if (la.size() != lb.size())
        throw DataError("label files differ in length: " + std::to_string(la.size()) + " vs " +
                        std::to_string(lb.size()));
    if (la.empty()) throw DataError("label files are empty");
    const auto k = cohens_kappa(la, lb);
    char buf[96];
    std::snprintf(buf, sizeof buf, "kappa %.6f observed %.6f expected %.6f n %zu\n", k.kappa, k.observed,
                  k.expected, la.size());
    out << buf << '\n' << contingency_table(k, TableFormat::Aligned);
    return kExitOk;
}

int cmd_serve_mock(const ServeArgs& a, std::ostream& out) {
    auto backend = make_backend("mock", a.mock_fail);
    CompletionServer server(backend);
    const int port = server.bind(a.host, a.port);
    if (port <= 0) throw ConfigError("cannot bind " + a.host + ":" + std::to_string(a.port));
    out << "listening http://" << a.host << ":" << port << std::endl;
    server.listen();
    return kExitOk;
}

void write_snapshot(const CLI::App& app, const Globals& g, const std::string& command) {
    const fs::path dir = g.out;
    ensure_dir(dir);
    open_out(dir / (command + ".config.toml")) << app.config_to_str(true, false);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multitask fallacy recognition harness", "fallacy"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML or INI file");

    Globals g;
    app.add_option("--registry", g.registry, "Scheme registry JSON")->capture_default_str();
    app.add_option("--templates", g.templates, "Prompt template directory")->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for splits and few-shot sampling")->capture_default_str();
    app.add_option("--out", g.out, "Output directory")->capture_default_str();

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Load and validate dataset files into a record file");
    ingest->fallthrough();
    ingest->add_option("--input", ingest_args.inputs, "Record file (one JSON object per line)");
    ingest->add_option("--kind", ingest_args.kinds, "Dataset of each --input, or auto");
    ingest->add_option("--articles", ingest_args.articles, "Propaganda article file");
    ingest->add_option("--ratios", ingest_args.ratios, "train,dev,test ratios")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    ingest->add_flag("--keep-no-fallacy", ingest_args.keep_no_fallacy, "Keep no-fallacy sentinel records");
    ingest->add_option("--no-fallacy-label", ingest_args.no_fallacy_label, "Sentinel label")
        ->capture_default_str();

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Per-dataset, per-split label counts");
    stats->fallthrough();
    stats->add_option("--records", stats_args.records, "Record file (default <out>/records.jsonl)");

    RenderArgs render_args;
    auto* render_cmd = app.add_subcommand("render", "Render records into prompt instances");
    render_cmd->fallthrough();
    render_cmd->add_option("--records", render_args.records, "Record file (default <out>/records.jsonl)");
    render_cmd->add_option("--phase", render_args.phase, "train or eval")->capture_default_str();
    render_cmd->add_option("--style", render_args.style, "list or def")->capture_default_str();
    render_cmd->add_option("--fragment-mode", render_args.fragment_mode, "in-prompt, omitted or as-target")
        ->capture_default_str();
    render_cmd->add_option("--comment-mode", render_args.comment_mode, "without or with")->capture_default_str();
    render_cmd->add_option("--variant", render_args.variant, "Variant name, e.g. def/nofrag");
    render_cmd->add_option("--dataset", render_args.datasets, "Only render these datasets");
    render_cmd->add_option("--split", render_args.splits, "Only render these splits");
    render_cmd->add_option("--max-source-chars", render_args.max_source_chars, "Source budget, 0 for none")
        ->capture_default_str();
    render_cmd->add_option("--max-target-chars", render_args.max_target_chars, "Target budget, 0 for none")
        ->capture_default_str();
    render_cmd->add_option("--fewshot", render_args.fewshot, "Exemplars per class, 0 for zero-shot")
        ->capture_default_str();
    render_cmd->add_flag("--explanations", render_args.explanations, "Add explanations to exemplars");

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Send instances to a completion backend");
    run->fallthrough();
    run->add_option("--instances", run_args.instances, "Instance file (default <out>/instances.jsonl)");
    run->add_option("--backend", run_args.backend, "mock or http://host:port")->capture_default_str();
    run->add_option("--parallelism", run_args.parallelism, "Requests in flight")->capture_default_str();
    run->add_option("--retries", run_args.retries, "Retry limit per request")->capture_default_str();
    run->add_option("--backoff-ms", run_args.backoff_ms, "Backoff base in milliseconds")->capture_default_str();
    run->add_option("--max-new-tokens", run_args.max_new_tokens, "0 picks 64, or 150 for few-shot prompts")
        ->capture_default_str();
    run->add_option("--mock-fail", run_args.mock_fail, "Inject failures: TRIGGER:TIMES[:STATUS]");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "Score a manifest against gold records");
    score_cmd->fallthrough();
    score_cmd->add_option("--manifest", score_args.manifest, "Manifest (default <out>/manifest.jsonl)");
    score_cmd->add_option("--records", score_args.records, "Record file (default <out>/records.jsonl)");
    score_cmd->add_option("--mode", score_args.mode, "strict or contains")->capture_default_str();
    score_cmd->add_option("--macro", score_args.macro, "gold-present or scheme")->capture_default_str();

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Print tables from a report file");
    report->fallthrough();
    report->add_option("--report", report_args.report, "Report (default <out>/report.json)");
    report->add_option("--format", report_args.format, "aligned or tsv")->capture_default_str();

    KappaArgs kappa_args;
    auto* kappa = app.add_subcommand("kappa", "Cohen's kappa between two label files");
    kappa->fallthrough();
    kappa->add_option("a", kappa_args.a, "First label file, one label per line")->required();
    kappa->add_option("b", kappa_args.b, "Second label file")->required();

    ServeArgs serve_args;
    auto* serve = app.add_subcommand("serve-mock", "Serve the mock backend over HTTP");
    serve->fallthrough();
    serve->add_option("--host", serve_args.host)->capture_default_str();
    serve->add_option("--port", serve_args.port, "0 picks a free port")->capture_default_str();
    serve->add_option("--mock-fail", serve_args.mock_fail, "Inject failures: TRIGGER:TIMES[:STATUS]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (*ingest) {
            write_snapshot(app, g, "ingest");
            return cmd_ingest(g, ingest_args, out);
        }
        if (*stats) return cmd_stats(g, stats_args, out);
        if (*render_cmd) {
            write_snapshot(app, g, "render");
            return cmd_render(g, render_args, out);
        }
        if (*run) {
            write_snapshot(app, g, "run");
            return cmd_run(g, run_args, out);
        }
        if (*score_cmd) {
            write_snapshot(app, g, "score");
            return cmd_score(g, score_args, out);
        }
        if (*report) return cmd_report(g, report_args, out);
        if (*kappa) return cmd_kappa(kappa_args, out);
        if (*serve) return cmd_serve_mock(serve_args, out);
    } catch (const ConfigError& e) {
        err << "fallacy: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const BackendError& e) {
        err << "fallacy: " << e.what() << "\n";
        return kExitBackendExhausted;
    } catch (const std::exception& e) {
        err << "fallacy: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitConfigError;
}

}  // namespace fallacy::cli
