#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "fallacy/prompt.hpp"
#include "fallacy/registry.hpp"

namespace fallacy::testing {

inline std::filesystem::path data_dir() { return FALLACY_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return FALLACY_FIXTURE_DIR; }
inline std::filesystem::path golden_dir() { return FALLACY_GOLDEN_DIR; }

inline const SchemeRegistry& bundled_registry() {
    static const SchemeRegistry registry = load_registry(data_dir() / "registry.json");
    return registry;
}

inline const TemplateSet& bundled_templates() {
    static const TemplateSet templates = TemplateSet::load(data_dir() / "templates");
    return templates;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("fallacy-test-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fallacy::testing
