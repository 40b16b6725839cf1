#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "fallacy/registry.hpp"

namespace fallacy {

enum class Split { Train, Dev, Test };

std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view name);

/// Character (code point) offsets, end exclusive.
struct FragmentSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string label;

    std::size_t length() const noexcept { return end - start; }
    bool operator==(const FragmentSpan&) const = default;
};

struct FallacyRecord {
    std::string id;
    DatasetKind dataset = DatasetKind::Argotario;
    std::optional<Split> split;

    std::optional<std::string> question;
    std::optional<std::string> answer;
    std::optional<std::string> sentence;
    /// Offsets of the fragment inside `sentence`, in characters.
    std::optional<std::size_t> fragment_start;
    std::optional<std::size_t> fragment_end;
    std::optional<std::string> comment;
    std::optional<std::string> segment;
    /// Free-text rationale used by few-shot prompts with explanations.
    std::optional<std::string> explanation;

    std::string original_label;
    /// Empty only for records carrying the no-fallacy sentinel.
    std::string unified_label;

    /// Text of sentence[fragment_start, fragment_end); nullopt without offsets.
    std::optional<std::string> fragment() const;

    bool operator==(const FallacyRecord&) const = default;
};

/// Throws ValidationError if the populated fields do not match the dataset's
/// shape or the unified label is not in its scheme.
void validate_record(const FallacyRecord& record, const SchemeRegistry& registry);

struct LoadError {
    std::size_t line = 0;  // 1-based
    std::string message;
};

struct LoadResult {
    std::vector<FallacyRecord> records;
    std::vector<LoadError> errors;

    bool ok() const noexcept { return errors.empty(); }
};

inline constexpr std::string_view kDefaultNoFallacyLabel = "No Fallacy";

struct LoadOptions {
    /// Records whose original label matches this sentinel (trimmed,
    /// case-insensitive) load with an empty unified label so
    /// filter_no_fallacy can drop them later.
    std::string no_fallacy_label{kDefaultNoFallacyLabel};
};

/// One JSON object per line; blank lines are skipped. Parsing continues past
/// bad lines; every failure is reported with its line number.
LoadResult load_records(const std::filesystem::path& path, DatasetKind kind,
                        const SchemeRegistry& registry, const LoadOptions& options = {});
LoadResult parse_records(std::istream& in, DatasetKind kind, const SchemeRegistry& registry,
                         const LoadOptions& options = {});

/// Like load_records but accepts any dataset per line (files written by `ingest`).
LoadResult load_record_file(const std::filesystem::path& path, const SchemeRegistry& registry,
                            const LoadOptions& options = {});
LoadResult parse_record_stream(std::istream& in, const SchemeRegistry& registry,
                               const LoadOptions& options = {});

std::string serialize_record(const FallacyRecord& record);
void write_records(std::ostream& out, const std::vector<FallacyRecord>& records);

// ---------------------------------------------------------------------------
// Propaganda sentence framing

struct SentenceSlice {
    std::string text;
    /// Character offset of the sentence in its article.
    std::size_t start = 0;
};

struct FramedSentence {
    std::size_t sentence_index = 0;
    std::string sentence;
    std::string fragment;
    /// Fragment offsets relative to the sentence, in characters.
    std::size_t fragment_start = 0;
    std::size_t fragment_end = 0;
    std::string original_label;

    bool operator==(const FramedSentence&) const = default;
};

/// A span yields a record only when it lies inside one sentence. A sentence
/// with several contained spans is labelled by the longest; equal lengths
/// resolve to the smaller start offset, then the smaller label. Sentences must
/// be ascending and non-overlapping. Throws ValidationError for spans with
/// start >= end or reaching past the article (its length, or the end of the
/// last sentence when no length is given).
std::vector<FramedSentence> frame_propaganda(const std::vector<SentenceSlice>& sentences,
                                             const std::vector<FragmentSpan>& spans,
                                             std::optional<std::size_t> article_length = std::nullopt);

/// Approximate splitter: breaks after ". ", "! ", "? " and newlines, keeping
/// article offsets. Prefer upstream sentence annotations where available.
std::vector<SentenceSlice> naive_sentence_split(std::string_view article);

struct ArticleIngest {
    std::vector<FallacyRecord> records;
    std::vector<LoadError> errors;
    /// Spans dropped because their technique is not part of the scheme.
    std::size_t ignored_spans = 0;
};

/// Reads Propaganda article lines ({id, text, sentences?, spans, split?}) and
/// frames them into sentence-level records with ids "<article>-s<index>".
ArticleIngest load_propaganda_articles(const std::filesystem::path& path,
                                       const SchemeRegistry& registry);
ArticleIngest parse_propaganda_articles(std::istream& in, const SchemeRegistry& registry);

// ---------------------------------------------------------------------------
// Splits, filtering, statistics

struct SplitRatios {
    double train = 0.65;
    double dev = 0.15;
    double test = 0.20;
};

/// Deterministic map of (id, seed) onto [0, 1). Ids ending in a number are
/// placed on a golden-ratio sequence per prefix, so runs of numbered ids fill
/// the split buckets almost exactly; other ids use a 64-bit hash.
double split_unit(std::string_view id, std::uint64_t seed);

Split split_for(std::string_view id, const SplitRatios& ratios, std::uint64_t seed);

/// Records that already carry a split keep it. Throws std::invalid_argument
/// for negative ratios or ratios not summing to 1 (within 1e-9).
std::vector<FallacyRecord> assign_splits(std::vector<FallacyRecord> records,
                                         const SplitRatios& ratios, std::uint64_t seed);

std::vector<FallacyRecord> filter_no_fallacy(std::vector<FallacyRecord> records,
                                             std::string_view sentinel = kDefaultNoFallacyLabel);

struct ImbalanceSummary {
    std::size_t top_k = 0;
    std::size_t top_k_count = 0;
    std::size_t total = 0;
    double top_k_share = 0.0;
    bool flagged = false;
};

struct CorpusStats {
    static constexpr std::size_t kTopK = 6;
    static constexpr double kImbalanceThreshold = 0.80;

    /// (dataset, split, label) -> count. Records without a split are only
    /// counted in `unassigned`.
    std::map<std::tuple<DatasetKind, Split, std::string>, std::size_t> counts;
    std::map<Split, std::size_t> split_totals;
    std::size_t unassigned = 0;
    std::map<DatasetKind, ImbalanceSummary> imbalance;

    std::size_t count(DatasetKind dataset, Split split, const std::string& label) const;
    std::size_t total(Split split) const;
};

CorpusStats corpus_stats(const std::vector<FallacyRecord>& records);

}  // namespace fallacy
