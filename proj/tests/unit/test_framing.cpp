#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "fallacy/corpus.hpp"
#include "fallacy/error.hpp"
#include "paths.hpp"

using namespace fallacy;

namespace {

// "Aaaa bbbb. Cccc dddd eeee. Ffff." with sentences at 0, 11, 27.
const std::vector<SentenceSlice> kSentences = {
    {"Aaaa bbbb.", 0}, {"Cccc dddd eeee.", 11}, {"Ffff.", 27}};

}  // namespace

TEST(Framing, SingleSpan) {
    auto out = frame_propaganda(kSentences, {{5, 9, "Doubt"}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].sentence_index, 0u);
    EXPECT_EQ(out[0].sentence, "Aaaa bbbb.");
    EXPECT_EQ(out[0].fragment, "bbbb");
    EXPECT_EQ(out[0].fragment_start, 5u);
    EXPECT_EQ(out[0].fragment_end, 9u);
    EXPECT_EQ(out[0].original_label, "Doubt");
}

TEST(Framing, LongestFragmentWins) {
    auto out = frame_propaganda(kSentences, {{11, 15, "Doubt"}, {16, 25, "Slogans"}, {21, 25, "Flag-Waving"}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].original_label, "Slogans");
    EXPECT_EQ(out[0].fragment, "dddd eeee");
}

TEST(Framing, EqualLengthTieTakesEarlierStart) {
    auto out = frame_propaganda(kSentences, {{21, 25, "Flag-Waving"}, {11, 15, "Slogans"}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].original_label, "Slogans");
    EXPECT_EQ(out[0].fragment_start, 0u);
}

TEST(Framing, SameSpanTieTakesSmallerLabel) {
    auto out = frame_propaganda(kSentences, {{11, 15, "Slogans"}, {11, 15, "Doubt"}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].original_label, "Doubt");
}

TEST(Framing, CrossSentenceSpanDropped) {
    auto out = frame_propaganda(kSentences, {{5, 15, "Doubt"}, {27, 31, "Slogans"}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].sentence_index, 2u);
    // A long cross-sentence span never outranks a contained one.
    out = frame_propaganda(kSentences, {{0, 32, "Doubt"}, {0, 4, "Slogans"}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].original_label, "Slogans");
}

TEST(Framing, NoSpansNoRecords) {
    EXPECT_TRUE(frame_propaganda(kSentences, {}).empty());
}

TEST(Framing, PermutationInvariant) {
    std::vector<FragmentSpan> spans = {
        {0, 4, "Doubt"}, {5, 9, "Slogans"}, {11, 15, "Doubt"}, {16, 25, "Strawman"},
        {21, 25, "Flag-Waving"}, {8, 13, "Whataboutism"}, {27, 31, "Doubt"}};
    const auto expected = frame_propaganda(kSentences, spans);
    std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
        return std::tie(a.start, a.end, a.label) < std::tie(b.start, b.end, b.label);
    });
    std::size_t perms = 0;
    do {
        ASSERT_EQ(frame_propaganda(kSentences, spans), expected);
        ++perms;
    } while (std::next_permutation(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
        return std::tie(a.start, a.end, a.label) < std::tie(b.start, b.end, b.label);
    }));
    EXPECT_EQ(perms, 5040u);
}

TEST(Framing, InvalidSpans) {
    EXPECT_THROW(frame_propaganda(kSentences, {{4, 4, "Doubt"}}), ValidationError);
    EXPECT_THROW(frame_propaganda(kSentences, {{30, 40, "Doubt"}}), ValidationError);
    EXPECT_THROW(frame_propaganda(kSentences, {{30, 40, "Doubt"}}, 32), ValidationError);
    EXPECT_THROW(frame_propaganda({{"ab", 5}, {"cd", 6}}, {}), ValidationError);
}

TEST(Framing, NaiveSplitter) {
    const auto s = naive_sentence_split("One two. Three!  Four?\nFive");
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[0].text, "One two.");
    EXPECT_EQ(s[1].text, "Three!");
    EXPECT_EQ(s[1].start, 9u);
    EXPECT_EQ(s[2].text, "Four?");
    EXPECT_EQ(s[2].start, 17u);
    EXPECT_EQ(s[3].text, "Five");
    EXPECT_EQ(s[3].start, 23u);
}

TEST(Framing, ArticleFile) {
    std::istringstream in(
        R"({"id":"art","text":"Aaaa bbbb. Cccc dddd eeee. Ffff.","split":"train","spans":[{"start":5,"end":9,"label":"Straw_Men"},{"start":11,"end":15,"label":"Repetition"},{"start":5,"end":15,"label":"Doubt"}]}
{"id":"art","text":"x","spans":[]}
{"id":"bad","text":"Abc.","spans":[{"start":0,"end":9,"label":"Doubt"}]}
)");
    const auto r = parse_propaganda_articles(in, fallacy::testing::bundled_registry());
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].id, "art-s0");
    EXPECT_EQ(r.records[0].unified_label, "Strawman");
    EXPECT_EQ(r.records[0].split, Split::Train);
    EXPECT_EQ(r.records[0].fragment(), "bbbb");
    EXPECT_EQ(r.ignored_spans, 1u);
    ASSERT_EQ(r.errors.size(), 2u);
    EXPECT_EQ(r.errors[0].line, 2u);
    EXPECT_EQ(r.errors[1].line, 3u);
}
