#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fallacy/gateway.hpp"

namespace fallacy {

enum class MatchMode { Strict, Contains };
std::string_view to_string(MatchMode mode);
std::optional<MatchMode> parse_match_mode(std::string_view text);

/// Which classes macro-F1 averages over.
enum class MacroAverage { GoldPresent, Scheme };
std::string_view to_string(MacroAverage average);
std::optional<MacroAverage> parse_macro_average(std::string_view text);

inline constexpr std::string_view kOutOfScheme = "<OutOfScheme>";

/// nullopt means OutOfScheme.
///  Strict: trimmed text equal (case-sensitive) to a scheme label.
///  Contains: gold found case-insensitively wins; else the single scheme label
///  found; else OutOfScheme.
std::optional<std::string> resolve(std::string_view generated, std::string_view gold,
                                   MatchMode mode, std::span<const std::string> scheme);

struct Prediction {
    std::string record_id;
    std::string gold;
    std::string generated;
    std::optional<std::string> resolved;
    bool correct = false;
    bool failed = false;
};

/// Rows are the scheme labels (gold); columns the scheme labels followed by
/// OutOfScheme.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> cells;

    std::size_t columns() const noexcept { return labels.size() + 1; }
    std::size_t out_of_scheme_column() const noexcept { return labels.size(); }
    std::size_t total() const;
    std::size_t diagonal() const;
    std::size_t row_sum(std::size_t row) const;
    std::size_t column_sum(std::size_t column) const;
};

/// Throws std::invalid_argument when a gold label is not in the scheme.
ConfusionMatrix confusion(const std::vector<Prediction>& predictions,
                          std::span<const std::string> scheme);

/// Micro-F1 with OutOfScheme counted as its own predicted column; equals
/// accuracy for single-label data.
double micro_f1(const ConfusionMatrix& matrix);

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    std::size_t predicted = 0;
};

struct EvalReport {
    std::string dataset;
    MatchMode mode = MatchMode::Strict;
    MacroAverage macro_average = MacroAverage::GoldPresent;
    std::size_t n_predictions = 0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    /// Scheme order; gold-supported or predicted classes (all scheme classes
    /// under MacroAverage::Scheme).
    std::vector<ClassMetrics> per_class;
    ConfusionMatrix confusion;
    std::size_t n_failed_requests = 0;
    std::size_t n_out_of_scheme = 0;
    /// Strict mode only: OutOfScheme cases a case-insensitive match would accept.
    std::size_t n_case_insensitive_recoverable = 0;
};

std::vector<Prediction> resolve_predictions(const RunManifest& manifest,
                                            const std::map<std::string, std::string>& golds,
                                            MatchMode mode, std::span<const std::string> scheme);

EvalReport score_predictions(const std::vector<Prediction>& predictions,
                             std::span<const std::string> scheme, MatchMode mode,
                             MacroAverage average = MacroAverage::GoldPresent);

/// Throws std::invalid_argument when a manifest record has no gold label.
EvalReport score(const RunManifest& manifest, const std::map<std::string, std::string>& golds,
                 MatchMode mode, std::span<const std::string> scheme,
                 MacroAverage average = MacroAverage::GoldPresent);

struct KappaResult {
    double kappa = 0.0;
    double observed = 0.0;
    double expected = 0.0;
    std::vector<std::string> labels;
    /// contingency[i][j]: rater A said labels[i], rater B said labels[j].
    std::vector<std::vector<std::size_t>> contingency;
};

/// Throws std::invalid_argument on empty input or length mismatch.
KappaResult cohens_kappa(std::span<const std::string> a, std::span<const std::string> b);

// ---------------------------------------------------------------------------
// Report emission

enum class TableFormat { Delimited, Aligned };

std::string report_to_json(const EvalReport& report);
std::string reports_to_json(const std::vector<EvalReport>& reports);
std::vector<EvalReport> reports_from_json(std::string_view json_text);

/// label, precision, recall, f1, support.
std::string per_class_table(const EvalReport& report, TableFormat format);
std::string confusion_grid(const ConfusionMatrix& matrix, TableFormat format);
std::string contingency_table(const KappaResult& kappa, TableFormat format);

}  // namespace fallacy
