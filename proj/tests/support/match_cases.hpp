#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fallacy/evaluator.hpp"

namespace fallacy::testing {

struct MatchCase {
    std::string generated;
    std::string gold;
    MatchMode mode;
    std::optional<std::string> expected;  // nullopt: OutOfScheme
};

inline const std::vector<std::string>& match_scheme() {
    static const std::vector<std::string> s = {"Doubt", "Slogans", "Flag-Waving", "Red Herring", "Loaded Language",
                                               "Name Calling or Labeling"};
    return s;
}

inline const std::vector<MatchCase>& match_cases() {
    using M = MatchMode;
    const auto oos = std::nullopt;
    static const std::vector<MatchCase> cases = {
        {"Red Herring", "Red Herring", M::Strict, "Red Herring"},
        {"  Red Herring\n", "Red Herring", M::Strict, "Red Herring"},
        {"red herring", "Red Herring", M::Strict, oos},
        {"Red Herring.", "Red Herring", M::Strict, oos},
        {"Doubt", "Red Herring", M::Strict, "Doubt"},
        {"", "Red Herring", M::Strict, oos},
        {"The answer is Doubt", "Doubt", M::Strict, oos},
        {"Slogans", "Slogans", M::Strict, "Slogans"},
        {"Flag-Waving", "Doubt", M::Strict, "Flag-Waving"},
        {"Flag Waving", "Flag-Waving", M::Strict, oos},
        {"Loaded Language ", "Loaded Language", M::Strict, "Loaded Language"},
        {"Ad Hominem", "Doubt", M::Strict, oos},
        {"Name Calling or Labeling", "Name Calling or Labeling", M::Strict, "Name Calling or Labeling"},
        {"\tSlogans\t", "Doubt", M::Strict, "Slogans"},
        {"DOUBT", "Doubt", M::Strict, oos},
        {"The fallacy here is Red Herring.", "Red Herring", M::Contains, "Red Herring"},
        {"red herring", "Red Herring", M::Contains, "Red Herring"},
        {"Doubt and Slogans", "Flag-Waving", M::Contains, oos},
        {"Doubt and Slogans", "Doubt", M::Contains, "Doubt"},
        {"Doubt and Slogans", "Slogans", M::Contains, "Slogans"},
        {"It is Slogans.", "Doubt", M::Contains, "Slogans"},
        {"slogans!!", "Doubt", M::Contains, "Slogans"},
        {"", "Red Herring", M::Contains, oos},
        {"nothing relevant", "Red Herring", M::Contains, oos},
        {"Ad Hominem", "Red Herring", M::Contains, oos},
        {"Loaded Language, Red Herring, Doubt", "Doubt", M::Contains, "Doubt"},
        {"Loaded Language, Red Herring", "Doubt", M::Contains, oos},
        {"FLAG-WAVING", "Flag-Waving", M::Contains, "Flag-Waving"},
        {"flag waving", "Flag-Waving", M::Contains, oos},
        {"Red Herring Red Herring", "Doubt", M::Contains, "Red Herring"},
        {"Name calling or labeling", "Doubt", M::Contains, "Name Calling or Labeling"},
        {"  Doubt  ", "Doubt", M::Contains, "Doubt"},
        {"Doubtful", "Slogans", M::Contains, "Doubt"},
        {"Doubtful", "Doubt", M::Contains, "Doubt"},
        {"Red\nHerring", "Red Herring", M::Contains, oos},
        {"Red Herring", "Red Herring", M::Contains, "Red Herring"},
    };
    return cases;
}

}  // namespace fallacy::testing
