#include "fallacy/registry.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fallacy/error.hpp"
#include "fallacy/text.hpp"
#include "json.hpp"

namespace fallacy {

using nlohmann::json;

std::string_view to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::Argotario: return "Argotario";
        case DatasetKind::Propaganda: return "Propaganda";
        case DatasetKind::Logic: return "Logic";
        case DatasetKind::Covid19: return "Covid19";
        case DatasetKind::Climate: return "Climate";
    }
    return "?";
}

std::optional<DatasetKind> parse_dataset(std::string_view name) {
    const auto trimmed = text::trim(name);
    for (auto kind : kAllDatasets) {
        if (text::iequals(trimmed, to_string(kind))) return kind;
    }
    if (text::iequals(trimmed, "covid-19")) return DatasetKind::Covid19;
    return std::nullopt;
}

UnknownLabelError::UnknownLabelError(DatasetKind dataset, std::string label)
    : std::runtime_error("unknown " + std::string(to_string(dataset)) + " label \"" + label + "\""),
      dataset_(dataset),
      label_(std::move(label)) {}

std::size_t SchemeRegistry::expected_scheme_size(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::Argotario: return 5;
        case DatasetKind::Propaganda: return 15;
        case DatasetKind::Logic: return 13;
        case DatasetKind::Covid19: return 9;
        case DatasetKind::Climate: return 9;
    }
    return 0;
}

SchemeRegistry::SchemeRegistry(std::vector<UnifiedLabel> labels,
                               std::map<DatasetKind, std::vector<std::string>> schemes,
                               std::vector<MappingEntry> mapping)
    : labels_(std::move(labels)), schemes_(std::move(schemes)), mapping_(std::move(mapping)) {
    for (std::size_t i = 0; i < mapping_.size(); ++i) {
        auto& entry = mapping_[i];
        entry.original = std::string(text::trim(entry.original));
        auto [it, inserted] = index_.emplace(std::make_pair(entry.dataset, entry.original), i);
        if (!inserted) {
            throw ValidationError("mapping: duplicate original label \"" + entry.original +
                                  "\" for " + std::string(to_string(entry.dataset)));
        }
    }
    validate();
}

void SchemeRegistry::validate() const {
    std::set<std::string, std::less<>> names;
    for (const auto& label : labels_) {
        if (label.name.empty()) throw ValidationError("labels: empty label name");
        if (text::trim(label.name) != label.name) {
            throw ValidationError("labels: name \"" + label.name + "\" has surrounding whitespace");
        }
        if (label.name.find_first_of("\r\n") != std::string::npos) {
            throw ValidationError("labels: name \"" + label.name + "\" contains a newline");
        }
        if (!names.insert(label.name).second) {
            throw ValidationError("labels: duplicate label \"" + label.name + "\"");
        }
    }

    std::set<std::string, std::less<>> used;
    for (auto kind : kAllDatasets) {
        auto it = schemes_.find(kind);
        if (it == schemes_.end()) {
            throw ValidationError("schemes: missing scheme for " + std::string(to_string(kind)));
        }
        const auto& scheme = it->second;
        if (scheme.size() != expected_scheme_size(kind)) {
            throw ValidationError("schemes: " + std::string(to_string(kind)) + " lists " +
                                  std::to_string(scheme.size()) + " labels, expected " +
                                  std::to_string(expected_scheme_size(kind)));
        }
        std::set<std::string, std::less<>> seen;
        for (const auto& name : scheme) {
            if (!names.contains(name)) {
                throw ValidationError("schemes: " + std::string(to_string(kind)) +
                                      " references undefined label \"" + name + "\"");
            }
            if (!seen.insert(name).second) {
                throw ValidationError("schemes: " + std::string(to_string(kind)) +
                                      " lists \"" + name + "\" twice");
            }
            used.insert(name);
        }
    }
    if (used.size() != kUniqueLabels) {
        throw ValidationError("schemes: " + std::to_string(used.size()) +
                              " unique labels across schemes, expected " +
                              std::to_string(kUniqueLabels));
    }
    for (const auto& label : labels_) {
        if (used.contains(label.name) && text::trim(label.definition).empty()) {
            throw ValidationError("labels: \"" + label.name + "\" has no definition");
        }
    }

    for (const auto& entry : mapping_) {
        if (entry.original.empty()) throw ValidationError("mapping: empty original label");
        if (!in_scheme(entry.dataset, entry.unified)) {
            throw ValidationError("mapping: \"" + entry.original + "\" maps to \"" + entry.unified +
                                  "\", which is not in the " +
                                  std::string(to_string(entry.dataset)) + " scheme");
        }
        // Unification must be idempotent.
        if (in_scheme(entry.dataset, entry.original) && entry.original != entry.unified) {
            throw ValidationError("mapping: scheme label \"" + entry.original + "\" of " +
                                  std::string(to_string(entry.dataset)) + " remapped to \"" +
                                  entry.unified + "\"");
        }
    }
}

const std::vector<std::string>& SchemeRegistry::scheme_labels(DatasetKind kind) const {
    return schemes_.at(kind);
}

bool SchemeRegistry::in_scheme(DatasetKind kind, std::string_view name) const {
    const auto& scheme = schemes_.at(kind);
    return std::find(scheme.begin(), scheme.end(), name) != scheme.end();
}

const UnifiedLabel& SchemeRegistry::label(std::string_view name) const {
    for (const auto& label : labels_) {
        if (label.name == name) return label;
    }
    throw std::out_of_range("no label named \"" + std::string(name) + "\"");
}

std::optional<std::string> SchemeRegistry::try_unify_label(DatasetKind dataset,
                                                           std::string_view original) const {
    const std::string key(text::trim(original));
    if (auto it = index_.find({dataset, key}); it != index_.end()) {
        return mapping_[it->second].unified;
    }
    if (in_scheme(dataset, key)) return key;
    return std::nullopt;
}

const std::string& SchemeRegistry::unify_label(DatasetKind dataset, std::string_view original) const {
    const std::string key(text::trim(original));
    if (auto it = index_.find({dataset, key}); it != index_.end()) {
        return mapping_[it->second].unified;
    }
    const auto& scheme = schemes_.at(dataset);
    if (auto it = std::find(scheme.begin(), scheme.end(), key); it != scheme.end()) return *it;
    throw UnknownLabelError(dataset, std::string(original));
}

std::size_t SchemeRegistry::unique_scheme_labels() const {
    std::set<std::string, std::less<>> all;
    for (const auto& [kind, scheme] : schemes_) all.insert(scheme.begin(), scheme.end());
    return all.size();
}

bool SchemeRegistry::operator==(const SchemeRegistry& other) const {
    return labels_ == other.labels_ && schemes_ == other.schemes_ && mapping_ == other.mapping_;
}

namespace {

DatasetKind dataset_field(const json& j, const char* where) {
    const auto name = j.get<std::string>();
    auto kind = parse_dataset(name);
    if (!kind) throw ParseError(std::string(where) + ": unknown dataset \"" + name + "\"");
    return *kind;
}

}  // namespace

SchemeRegistry parse_registry(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("registry: ") + e.what());
    }

    std::vector<UnifiedLabel> labels;
    std::map<DatasetKind, std::vector<std::string>> schemes;
    std::vector<MappingEntry> mapping;
    try {
        if (!doc.is_object()) throw ParseError("registry: top level must be an object");
        for (const auto& item : doc.at("labels")) {
            labels.push_back({item.at("name").get<std::string>(),
                              item.at("definition").get<std::string>()});
        }
        for (const auto& [name, list] : doc.at("schemes").items()) {
            auto kind = dataset_field(json(name), "schemes");
            if (schemes.contains(kind)) throw ParseError("schemes: duplicate dataset " + name);
            schemes[kind] = list.get<std::vector<std::string>>();
        }
        for (const auto& item : doc.at("mapping")) {
            mapping.push_back({dataset_field(item.at("dataset"), "mapping"),
                               item.at("original").get<std::string>(),
                               item.at("unified").get<std::string>()});
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("registry: ") + e.what());
    }
    return SchemeRegistry(std::move(labels), std::move(schemes), std::move(mapping));
}

SchemeRegistry load_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("registry: cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_registry(buffer.str());
}

std::string serialize_registry(const SchemeRegistry& registry) {
    nlohmann::ordered_json doc;
    doc["version"] = 1;
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (const auto& label : registry.labels()) {
        labels.push_back({{"name", label.name}, {"definition", label.definition}});
    }
    doc["labels"] = std::move(labels);
    nlohmann::ordered_json schemes = nlohmann::ordered_json::object();
    for (auto kind : kAllDatasets) {
        schemes[std::string(to_string(kind))] = registry.scheme_labels(kind);
    }
    doc["schemes"] = std::move(schemes);
    nlohmann::ordered_json mapping = nlohmann::ordered_json::array();
    for (const auto& entry : registry.mapping()) {
        mapping.push_back({{"dataset", std::string(to_string(entry.dataset))},
                           {"original", entry.original},
                           {"unified", entry.unified}});
    }
    doc["mapping"] = std::move(mapping);
    return doc.dump(2) + "\n";
}

}  // namespace fallacy
