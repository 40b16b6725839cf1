#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fallacy {

enum class DatasetKind { Argotario, Propaganda, Logic, Covid19, Climate };

inline constexpr std::array<DatasetKind, 5> kAllDatasets = {
    DatasetKind::Argotario, DatasetKind::Propaganda, DatasetKind::Logic,
    DatasetKind::Covid19, DatasetKind::Climate};

/// Canonical name as written in data files ("Covid19", ...).
std::string_view to_string(DatasetKind kind);

/// Accepts the canonical name case-insensitively, plus "covid-19".
std::optional<DatasetKind> parse_dataset(std::string_view name);

struct UnifiedLabel {
    std::string name;
    std::string definition;

    bool operator==(const UnifiedLabel&) const = default;
};

struct MappingEntry {
    DatasetKind dataset;
    std::string original;
    std::string unified;

    bool operator==(const MappingEntry&) const = default;
};

class UnknownLabelError : public std::runtime_error {
public:
    UnknownLabelError(DatasetKind dataset, std::string label);

    DatasetKind dataset() const noexcept { return dataset_; }
    const std::string& label() const noexcept { return label_; }

private:
    DatasetKind dataset_;
    std::string label_;
};

/// Immutable label space: unified labels with definitions, per-dataset
/// schemes (ordered; the order is the listing order in prompts) and the
/// (dataset, original label) -> unified label mapping.
class SchemeRegistry {
public:
    /// Expected scheme sizes; a registry with other sizes fails validation.
    static constexpr std::size_t kUniqueLabels = 28;
    static std::size_t expected_scheme_size(DatasetKind kind);

    /// Validates eagerly; throws ValidationError naming the broken invariant.
    SchemeRegistry(std::vector<UnifiedLabel> labels,
                   std::map<DatasetKind, std::vector<std::string>> schemes,
                   std::vector<MappingEntry> mapping);

    const std::vector<UnifiedLabel>& labels() const noexcept { return labels_; }
    const std::vector<MappingEntry>& mapping() const noexcept { return mapping_; }

    const std::vector<std::string>& scheme_labels(DatasetKind kind) const;
    bool in_scheme(DatasetKind kind, std::string_view name) const;

    /// Throws std::out_of_range for names that are not registered labels.
    const UnifiedLabel& label(std::string_view name) const;
    const std::string& definition(std::string_view name) const { return label(name).definition; }

    /// Original labels are matched after trimming, case-sensitively. A name that
    /// is already a member of the dataset's scheme maps to itself.
    const std::string& unify_label(DatasetKind dataset, std::string_view original) const;
    std::optional<std::string> try_unify_label(DatasetKind dataset, std::string_view original) const;

    /// Number of distinct labels across all schemes.
    std::size_t unique_scheme_labels() const;

    bool operator==(const SchemeRegistry& other) const;

private:
    void validate() const;

    std::vector<UnifiedLabel> labels_;
    std::map<DatasetKind, std::vector<std::string>> schemes_;
    std::vector<MappingEntry> mapping_;
    std::map<std::pair<DatasetKind, std::string>, std::size_t> index_;
};

SchemeRegistry load_registry(const std::filesystem::path& path);
SchemeRegistry parse_registry(std::string_view json_text);

/// Canonical serialization; parse_registry(serialize_registry(r)) == r.
std::string serialize_registry(const SchemeRegistry& registry);

}  // namespace fallacy
