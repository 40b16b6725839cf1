#include "fallacy/evaluator.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fallacy/text.hpp"

namespace fallacy {

std::string_view to_string(MatchMode mode) { return mode == MatchMode::Strict ? "strict" : "contains"; }

std::optional<MatchMode> parse_match_mode(std::string_view t) {
    t = text::trim(t);
    if (text::iequals(t, "strict")) return MatchMode::Strict;
    if (text::iequals(t, "contains")) return MatchMode::Contains;
    return std::nullopt;
}

std::string_view to_string(MacroAverage average) {
    return average == MacroAverage::GoldPresent ? "gold-present" : "scheme";
}

std::optional<MacroAverage> parse_macro_average(std::string_view t) {
    t = text::trim(t);
    if (text::iequals(t, "gold-present") || text::iequals(t, "gold")) return MacroAverage::GoldPresent;
    if (text::iequals(t, "scheme")) return MacroAverage::Scheme;
    return std::nullopt;
}

std::optional<std::string> resolve(std::string_view generated, std::string_view gold, MatchMode mode,
                                   std::span<const std::string> scheme) {
    if (mode == MatchMode::Strict) {
        const auto trimmed = text::trim(generated);
        for (const auto& label : scheme) {
            if (trimmed == label) return label;
        }
        return std::nullopt;
    }

    if (!gold.empty() && text::ifind(generated, gold) != std::string_view::npos) return std::string(gold);
    const std::string* only = nullptr;
    for (const auto& label : scheme) {
        if (text::ifind(generated, label) == std::string_view::npos) continue;
        if (only != nullptr) return std::nullopt;
        only = &label;
    }
    if (only != nullptr) return *only;
    return std::nullopt;
}

std::size_t ConfusionMatrix::total() const {
    std::size_t n = 0;
    for (const auto& row : cells)
        for (auto c : row) n += c;
    return n;
}

std::size_t ConfusionMatrix::diagonal() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) n += cells[i][i];
    return n;
}

std::size_t ConfusionMatrix::row_sum(std::size_t row) const {
    std::size_t n = 0;
    for (auto c : cells.at(row)) n += c;
    return n;
}

std::size_t ConfusionMatrix::column_sum(std::size_t column) const {
    std::size_t n = 0;
    for (const auto& row : cells) n += row.at(column);
    return n;
}

namespace {

std::size_t index_of(std::span<const std::string> scheme, std::string_view label) {
    auto it = std::find(scheme.begin(), scheme.end(), label);
    return it == scheme.end() ? scheme.size() : static_cast<std::size_t>(it - scheme.begin());
}

double ratio(std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

}  // namespace

ConfusionMatrix confusion(const std::vector<Prediction>& predictions, std::span<const std::string> scheme) {
    ConfusionMatrix m;
    m.labels.assign(scheme.begin(), scheme.end());
    m.cells.assign(scheme.size(), std::vector<std::size_t>(scheme.size() + 1, 0));
    for (const auto& p : predictions) {
        const auto row = index_of(scheme, p.gold);
        if (row == scheme.size()) {
            throw std::invalid_argument("gold label \"" + p.gold + "\" of \"" + p.record_id + "\" is not in the scheme");
        }
        const auto column = p.resolved ? index_of(scheme, *p.resolved) : scheme.size();
        ++m.cells[row][column];
    }
    return m;
}

double micro_f1(const ConfusionMatrix& m) {
    std::size_t tp = m.diagonal();
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t c = 0; c < m.columns(); ++c) {
        const std::size_t diag = c < m.labels.size() ? m.cells[c][c] : 0;
        fp += m.column_sum(c) - diag;
    }
    for (std::size_t r = 0; r < m.labels.size(); ++r) fn += m.row_sum(r) - m.cells[r][r];
    // Every prediction lands in exactly one column, so fp == fn and this is tp / n.
    return ratio(2 * tp, 2 * tp + fp + fn);
}

std::vector<Prediction> resolve_predictions(const RunManifest& manifest, const std::map<std::string, std::string>& golds,
                                            MatchMode mode, std::span<const std::string> scheme) {
    std::vector<Prediction> out;
    out.reserve(manifest.entries.size());
    for (const auto& entry : manifest.entries) {
        auto gold = golds.find(entry.record_id);
        if (gold == golds.end()) throw std::invalid_argument("no gold label for \"" + entry.record_id + "\"");
        Prediction p;
        p.record_id = entry.record_id;
        p.gold = gold->second;
        p.generated = entry.text;
        p.failed = entry.failed;
        if (!entry.failed) p.resolved = resolve(entry.text, p.gold, mode, scheme);
        p.correct = p.resolved && *p.resolved == p.gold;
        out.push_back(std::move(p));
    }
    return out;
}

EvalReport score_predictions(const std::vector<Prediction>& predictions, std::span<const std::string> scheme,
                             MatchMode mode, MacroAverage average) {
    EvalReport report;
    report.mode = mode;
    report.macro_average = average;
    report.n_predictions = predictions.size();
    report.confusion = confusion(predictions, scheme);
    const auto& m = report.confusion;

    std::size_t correct = 0;
    for (const auto& p : predictions) {
        correct += p.correct;
        report.n_failed_requests += p.failed;
        if (!p.resolved) {
            ++report.n_out_of_scheme;
            if (mode == MatchMode::Strict && !p.failed) {
                const auto trimmed = text::trim(p.generated);
                report.n_case_insensitive_recoverable += std::any_of(
                    scheme.begin(), scheme.end(), [&](const std::string& l) { return text::iequals(trimmed, l); });
            }
        }
    }
    report.accuracy = ratio(correct, predictions.size());

    double f1_sum = 0.0;
    std::size_t f1_classes = 0;
    for (std::size_t i = 0; i < scheme.size(); ++i) {
        ClassMetrics c;
        c.label = scheme[i];
        c.support = m.row_sum(i);
        c.predicted = m.column_sum(i);
        const std::size_t tp = m.cells[i][i];
        c.precision = ratio(tp, c.predicted);
        c.recall = ratio(tp, c.support);
        c.f1 = c.precision + c.recall == 0.0 ? 0.0 : 2 * c.precision * c.recall / (c.precision + c.recall);

        const bool averaged = average == MacroAverage::Scheme || c.support > 0;
        if (averaged) {
            f1_sum += c.f1;
            ++f1_classes;
        }
        if (averaged || c.predicted > 0) report.per_class.push_back(std::move(c));
    }
    report.macro_f1 = f1_classes == 0 ? 0.0 : f1_sum / static_cast<double>(f1_classes);
    return report;
}

EvalReport score(const RunManifest& manifest, const std::map<std::string, std::string>& golds, MatchMode mode,
                 std::span<const std::string> scheme, MacroAverage average) {
    return score_predictions(resolve_predictions(manifest, golds, mode, scheme), scheme, mode, average);
}

KappaResult cohens_kappa(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("kappa needs at least one item");
    if (a.size() != b.size()) {
        throw std::invalid_argument("kappa inputs differ in length (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    std::set<std::string, std::less<>> universe(a.begin(), a.end());
    universe.insert(b.begin(), b.end());

    KappaResult r;
    r.labels.assign(universe.begin(), universe.end());
    const std::size_t k = r.labels.size();
    r.contingency.assign(k, std::vector<std::size_t>(k, 0));
    auto idx = [&](const std::string& s) {
        return static_cast<std::size_t>(std::lower_bound(r.labels.begin(), r.labels.end(), s) - r.labels.begin());
    };
    for (std::size_t i = 0; i < a.size(); ++i) ++r.contingency[idx(a[i])][idx(b[i])];

    const std::size_t n = a.size();
    std::size_t agree = 0;
    std::size_t chance = 0;  // sum of row_k * col_k, kept integral so kappa(a, b) == kappa(b, a) bit for bit
    for (std::size_t i = 0; i < k; ++i) {
        agree += r.contingency[i][i];
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t j = 0; j < k; ++j) {
            row += r.contingency[i][j];
            col += r.contingency[j][i];
        }
        chance += row * col;
    }
    r.observed = static_cast<double>(agree) / static_cast<double>(n);
    r.expected = static_cast<double>(chance) / (static_cast<double>(n) * static_cast<double>(n));
    if (chance == n * n) {
        r.kappa = 1.0;
    } else {
        r.kappa = (r.observed - r.expected) / (1.0 - r.expected);
    }
    return r;
}

}  // namespace fallacy
