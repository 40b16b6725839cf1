#include "fallacy/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "fallacy/error.hpp"
#include "fallacy/text.hpp"
#include "json.hpp"
#include "json_util.hpp"

namespace fallacy {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Dev: return "dev";
        case Split::Test: return "test";
    }
    return "?";
}

std::optional<Split> parse_split(std::string_view name) {
    const auto t = text::trim(name);
    if (text::iequals(t, "train")) return Split::Train;
    if (text::iequals(t, "dev") || text::iequals(t, "validation")) return Split::Dev;
    if (text::iequals(t, "test")) return Split::Test;
    return std::nullopt;
}

std::optional<std::string> FallacyRecord::fragment() const {
    if (!sentence || !fragment_start || !fragment_end) return std::nullopt;
    return std::string(text::char_slice(*sentence, *fragment_start, *fragment_end));
}

namespace {

bool populated(const std::optional<std::string>& field) {
    return field.has_value() && !text::trim(*field).empty();
}

void require(bool condition, const FallacyRecord& r, const char* what) {
    if (!condition) {
        throw ValidationError(std::string(to_string(r.dataset)) + " record \"" + r.id + "\": " + what);
    }
}

// Checks everything except the unified label.
void validate_shape(const FallacyRecord& r) {
    if (r.id.empty()) throw ValidationError("record without id");
    const bool has_offsets = r.fragment_start.has_value() || r.fragment_end.has_value();
    switch (r.dataset) {
        case DatasetKind::Argotario:
            require(populated(r.question) && populated(r.answer), r, "needs question and answer");
            require(!r.sentence && !has_offsets && !r.segment && !r.comment, r,
                    "only question and answer are allowed");
            break;
        case DatasetKind::Propaganda: {
            require(populated(r.sentence), r, "needs a sentence");
            require(r.fragment_start && r.fragment_end, r, "needs fragment_start and fragment_end");
            require(!r.question && !r.answer && !r.segment && !r.comment, r,
                    "only sentence and fragment are allowed");
            const auto length = text::char_count(*r.sentence);
            require(*r.fragment_start < *r.fragment_end && *r.fragment_end <= length, r,
                    "fragment offsets outside the sentence");
            break;
        }
        case DatasetKind::Logic:
        case DatasetKind::Covid19:
            require(populated(r.segment), r, "needs a segment");
            require(!r.question && !r.answer && !r.sentence && !has_offsets && !r.comment, r,
                    "only segment is allowed");
            break;
        case DatasetKind::Climate:
            require(populated(r.segment), r, "needs a segment");
            require(!r.question && !r.answer && !r.sentence && !has_offsets, r,
                    "only segment and comment are allowed");
            break;
    }
    require(!text::trim(r.original_label).empty(), r, "empty original_label");
}

bool is_sentinel(std::string_view label, std::string_view sentinel) {
    return text::iequals(text::trim(label), text::trim(sentinel));
}

const std::set<std::string, std::less<>> kRecordKeys = {
    "id",      "dataset",  "split",   "question",    "answer",         "sentence",      "fragment",
    "fragment_start", "fragment_end", "comment", "segment", "explanation", "original_label",
    "unified_label"};

FallacyRecord record_from_json(const json& obj) {
    if (!obj.is_object()) throw ParseError("line is not a JSON object");
    for (const auto& [key, value] : obj.items()) {
        if (!kRecordKeys.contains(key)) throw ParseError("unknown field \"" + key + "\"");
    }
    FallacyRecord r;
    r.id = detail::required_string(obj, "id");
    const auto dataset = detail::required_string(obj, "dataset");
    auto kind = parse_dataset(dataset);
    if (!kind) throw ParseError("unknown dataset \"" + dataset + "\"");
    r.dataset = *kind;
    if (auto split = detail::optional_string(obj, "split"); split && !text::trim(*split).empty()) {
        r.split = parse_split(*split);
        if (!r.split) throw ParseError("unknown split \"" + *split + "\"");
    }
    r.question = detail::optional_string(obj, "question");
    r.answer = detail::optional_string(obj, "answer");
    r.sentence = detail::optional_string(obj, "sentence");
    r.fragment_start = detail::optional_index(obj, "fragment_start");
    r.fragment_end = detail::optional_index(obj, "fragment_end");
    r.comment = detail::optional_string(obj, "comment");
    r.segment = detail::optional_string(obj, "segment");
    r.explanation = detail::optional_string(obj, "explanation");
    r.original_label = detail::required_string(obj, "original_label");
    if (auto unified = detail::optional_string(obj, "unified_label")) r.unified_label = *unified;

    if (auto fragment = detail::optional_string(obj, "fragment")) {
        if (!r.sentence) throw ParseError("fragment given without sentence");
        if (!r.fragment_start && !r.fragment_end) {
            const auto at = r.sentence->find(*fragment);
            if (fragment->empty() || at == std::string::npos) {
                throw ParseError("fragment is not a substring of the sentence");
            }
            r.fragment_start = text::char_count(std::string_view(*r.sentence).substr(0, at));
            r.fragment_end = *r.fragment_start + text::char_count(*fragment);
        } else if (r.fragment_start && r.fragment_end && r.fragment() != *fragment) {
            throw ParseError("fragment text does not match fragment_start/fragment_end");
        }
    }
    return r;
}

LoadResult parse_lines(std::istream& in, std::optional<DatasetKind> kind,
                       const SchemeRegistry& registry, const LoadOptions& options) {
    LoadResult result;
    std::set<std::string, std::less<>> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            json obj;
            try {
                obj = json::parse(line);
            } catch (const json::parse_error& e) {
                throw ParseError(std::string("invalid JSON: ") + e.what());
            }
            FallacyRecord r = record_from_json(obj);
            if (kind && r.dataset != *kind) {
                throw ValidationError("dataset \"" + std::string(to_string(r.dataset)) +
                                      "\" in a " + std::string(to_string(*kind)) + " file");
            }
            validate_shape(r);
            std::string unified;
            if (!is_sentinel(r.original_label, options.no_fallacy_label)) {
                unified = registry.unify_label(r.dataset, r.original_label);
            }
            if (!r.unified_label.empty() && r.unified_label != unified) {
                throw ValidationError("unified_label \"" + r.unified_label + "\" disagrees with mapping (\"" +
                                      unified + "\")");
            }
            r.unified_label = std::move(unified);
            if (!ids.insert(r.id).second) throw ValidationError("duplicate id \"" + r.id + "\"");
            result.records.push_back(std::move(r));
        } catch (const std::exception& e) {
            result.errors.push_back({line_no, e.what()});
        }
    }
    return result;
}

LoadResult open_and_parse(const std::filesystem::path& path, std::optional<DatasetKind> kind,
                          const SchemeRegistry& registry, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return parse_lines(in, kind, registry, options);
}

}  // namespace

void validate_record(const FallacyRecord& record, const SchemeRegistry& registry) {
    validate_shape(record);
    require(registry.in_scheme(record.dataset, record.unified_label), record,
            "unified_label is not in the dataset's scheme");
}

LoadResult parse_records(std::istream& in, DatasetKind kind, const SchemeRegistry& registry,
                         const LoadOptions& options) {
    return parse_lines(in, kind, registry, options);
}

LoadResult load_records(const std::filesystem::path& path, DatasetKind kind,
                        const SchemeRegistry& registry, const LoadOptions& options) {
    return open_and_parse(path, kind, registry, options);
}

LoadResult parse_record_stream(std::istream& in, const SchemeRegistry& registry,
                               const LoadOptions& options) {
    return parse_lines(in, std::nullopt, registry, options);
}

LoadResult load_record_file(const std::filesystem::path& path, const SchemeRegistry& registry,
                            const LoadOptions& options) {
    return open_and_parse(path, std::nullopt, registry, options);
}

std::string serialize_record(const FallacyRecord& r) {
    ordered_json obj;
    obj["id"] = r.id;
    obj["dataset"] = std::string(to_string(r.dataset));
    if (r.split) obj["split"] = std::string(to_string(*r.split));
    auto put = [&obj](const char* key, const std::optional<std::string>& value) {
        if (value) obj[key] = *value;
    };
    put("question", r.question);
    put("answer", r.answer);
    put("sentence", r.sentence);
    if (r.fragment_start) obj["fragment_start"] = *r.fragment_start;
    if (r.fragment_end) obj["fragment_end"] = *r.fragment_end;
    put("fragment", r.fragment());
    put("comment", r.comment);
    put("segment", r.segment);
    put("explanation", r.explanation);
    obj["original_label"] = r.original_label;
    obj["unified_label"] = r.unified_label;
    return obj.dump();
}

void write_records(std::ostream& out, const std::vector<FallacyRecord>& records) {
    for (const auto& r : records) out << serialize_record(r) << '\n';
}

std::vector<FallacyRecord> filter_no_fallacy(std::vector<FallacyRecord> records, std::string_view sentinel) {
    std::erase_if(records, [sentinel](const FallacyRecord& r) { return is_sentinel(r.original_label, sentinel); });
    return records;
}

std::size_t CorpusStats::count(DatasetKind dataset, Split split, const std::string& label) const {
    auto it = counts.find({dataset, split, label});
    return it == counts.end() ? 0 : it->second;
}

std::size_t CorpusStats::total(Split split) const {
    auto it = split_totals.find(split);
    return it == split_totals.end() ? 0 : it->second;
}

CorpusStats corpus_stats(const std::vector<FallacyRecord>& records) {
    CorpusStats stats;
    for (auto split : {Split::Train, Split::Dev, Split::Test}) stats.split_totals[split] = 0;

    std::map<DatasetKind, std::map<std::string, std::size_t>> per_dataset;
    for (const auto& r : records) {
        const std::string& label = r.unified_label.empty() ? r.original_label : r.unified_label;
        ++per_dataset[r.dataset][label];
        if (!r.split) {
            ++stats.unassigned;
            continue;
        }
        ++stats.counts[{r.dataset, *r.split, label}];
        ++stats.split_totals[*r.split];
    }

    for (const auto& [dataset, labels] : per_dataset) {
        std::vector<std::size_t> sizes;
        ImbalanceSummary summary;
        for (const auto& [label, n] : labels) {
            sizes.push_back(n);
            summary.total += n;
        }
        std::sort(sizes.rbegin(), sizes.rend());
        summary.top_k = std::min(CorpusStats::kTopK, sizes.size());
        for (std::size_t i = 0; i < summary.top_k; ++i) summary.top_k_count += sizes[i];
        summary.top_k_share =
            summary.total == 0 ? 0.0 : static_cast<double>(summary.top_k_count) / summary.total;
        summary.flagged = sizes.size() > CorpusStats::kTopK &&
                          summary.top_k_share > CorpusStats::kImbalanceThreshold;
        stats.imbalance[dataset] = summary;
    }
    return stats;
}

}  // namespace fallacy
