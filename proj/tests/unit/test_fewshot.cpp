#include <gtest/gtest.h>

#include "fallacy/prompt.hpp"
#include "fallacy/text.hpp"
#include "paths.hpp"

using namespace fallacy;
using fallacy::testing::bundled_registry;
using fallacy::testing::bundled_templates;

namespace {

std::vector<FallacyRecord> pool(std::size_t per_class) {
    std::vector<FallacyRecord> out;
    for (const auto& label : bundled_registry().scheme_labels(DatasetKind::Argotario)) {
        for (std::size_t i = 0; i < per_class; ++i) {
            FallacyRecord r;
            r.id = label + "#" + std::to_string(i);
            r.dataset = DatasetKind::Argotario;
            r.split = Split::Train;
            r.question = "Question " + std::to_string(i) + " about " + label + "?";
            r.answer = "Answer " + std::to_string(i) + ".";
            r.explanation = "Because " + std::to_string(i) + ".";
            r.original_label = label;
            r.unified_label = label;
            out.push_back(r);
        }
    }
    return out;
}

FallacyRecord query() {
    FallacyRecord q;
    q.id = "query";
    q.dataset = DatasetKind::Argotario;
    q.split = Split::Test;
    q.question = "Is the query here?";
    q.answer = "Yes it is.";
    q.original_label = "Red Herring";
    q.unified_label = "Red Herring";
    return q;
}

std::size_t occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
    return n;
}

}  // namespace

TEST(FewShot, LayoutAndCounts) {
    const auto records = pool(4);
    FewShotSpec spec{DatasetKind::Argotario, 2, false, 7};
    const auto p = build_fewshot(spec, records, bundled_registry(), bundled_templates(), query());
    EXPECT_TRUE(text::starts_with(p, kInstructionLeadIn));
    EXPECT_EQ(occurrences(p, "###\n"), 10u);
    EXPECT_EQ(occurrences(p, "Explanation: "), 0u);
    EXPECT_NE(p.find("Question: Is the query here?\nAnswer: Yes it is.\nFallacy type:"), std::string::npos);
    EXPECT_EQ(p.rfind("Fallacy type:"), p.size() - std::string("Fallacy type:").size());
    EXPECT_NE(p.find(" Ad Hominem\n\n###"), std::string::npos);
}

TEST(FewShot, SeededAndDeterministic) {
    const auto records = pool(6);
    FewShotSpec spec{DatasetKind::Argotario, 1, false, 11};
    const auto a = build_fewshot(spec, records, bundled_registry(), bundled_templates(), query());
    EXPECT_EQ(a, build_fewshot(spec, records, bundled_registry(), bundled_templates(), query()));
    bool differs = false;
    for (std::uint64_t s = 12; s < 20 && !differs; ++s) {
        spec.seed = s;
        differs = build_fewshot(spec, records, bundled_registry(), bundled_templates(), query()) != a;
    }
    EXPECT_TRUE(differs);
}

TEST(FewShot, ExplanationsAndShortage) {
    auto records = pool(1);
    FewShotSpec spec{DatasetKind::Argotario, 1, true, 1};
    const auto p = build_fewshot(spec, records, bundled_registry(), bundled_templates(), query());
    EXPECT_EQ(occurrences(p, "\nExplanation: Because 0."), 5u);

    records[0].explanation.reset();
    EXPECT_THROW(build_fewshot(spec, records, bundled_registry(), bundled_templates(), query()), RenderError);
    spec.with_explanations = false;
    spec.shots_per_class = 2;
    EXPECT_THROW(build_fewshot(spec, records, bundled_registry(), bundled_templates(), query()), RenderError);
}

TEST(FewShot, QueryAndNonTrainExcluded) {
    auto records = pool(1);
    for (auto& r : records) r.split = Split::Dev;
    FewShotSpec spec{DatasetKind::Argotario, 1, false, 1};
    EXPECT_THROW(build_fewshot(spec, records, bundled_registry(), bundled_templates(), query()), RenderError);

    records = pool(1);
    auto q = records[2];
    EXPECT_THROW(build_fewshot(spec, records, bundled_registry(), bundled_templates(), q), RenderError);
}
