#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>

#include "fallacy/corpus.hpp"

using namespace fallacy;

namespace {

std::vector<std::string> numbered_ids(const std::string& prefix, int n) {
    std::vector<std::string> ids;
    char buf[32];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%04d", i);
        ids.push_back(prefix + buf);
    }
    return ids;
}

std::map<Split, int> tally(const std::vector<std::string>& ids, std::uint64_t seed) {
    std::map<Split, int> t;
    for (const auto& id : ids) ++t[split_for(id, SplitRatios{}, seed)];
    return t;
}

}  // namespace

TEST(Split, ThousandIdsWithinTwo) {
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 7919ull, 0xdeadbeefull}) {
        const auto t = tally(numbered_ids("synthetic-", 1000), seed);
        EXPECT_NEAR(t.at(Split::Train), 650, 2) << seed;
        EXPECT_NEAR(t.at(Split::Dev), 150, 2) << seed;
        EXPECT_NEAR(t.at(Split::Test), 200, 2) << seed;
    }
}

TEST(Split, ManySeedsWithinTwo) {
    const auto ids = numbered_ids("rec-", 1000);
    for (std::uint64_t seed = 100; seed < 300; ++seed) {
        const auto t = tally(ids, seed);
        ASSERT_LE(std::abs(t.at(Split::Train) - 650), 2) << seed;
        ASSERT_LE(std::abs(t.at(Split::Dev) - 150), 2) << seed;
        ASSERT_LE(std::abs(t.at(Split::Test) - 200), 2) << seed;
    }
}

TEST(Split, StableAcrossRunsAndInsertions) {
    auto ids = numbered_ids("synthetic-", 1000);
    std::map<std::string, Split> first;
    for (const auto& id : ids) first[id] = split_for(id, SplitRatios{}, 42);

    std::vector<FallacyRecord> records;
    for (const auto& id : ids) {
        FallacyRecord r;
        r.id = id;
        records.push_back(r);
    }
    auto extra = records;
    for (int i = 0; i < 37; ++i) {
        FallacyRecord r;
        r.id = "inserted-" + std::to_string(i * 13);
        extra.insert(extra.begin() + i * 20, r);
    }
    std::shuffle(extra.begin(), extra.end(), std::mt19937(5));
    for (const auto& r : assign_splits(extra, SplitRatios{}, 42)) {
        auto it = first.find(r.id);
        if (it != first.end()) {
            ASSERT_EQ(r.split, it->second) << r.id;
        }
    }
    for (const auto& r : assign_splits(records, SplitRatios{}, 42)) ASSERT_EQ(r.split, first.at(r.id));
}

TEST(Split, UnitIntervalAndSeedSensitivity) {
    int differ = 0;
    for (const auto& id : numbered_ids("x", 200)) {
        const double u = split_unit(id, 1);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        differ += split_unit(id, 1) != split_unit(id, 2);
    }
    EXPECT_GT(differ, 190);
    EXPECT_EQ(split_unit("no-digits-here", 3), split_unit("no-digits-here", 3));
}

TEST(Split, ExistingSplitKept) {
    FallacyRecord r;
    r.id = "a";
    r.split = Split::Dev;
    auto out = assign_splits({r}, SplitRatios{1.0, 0.0, 0.0}, 1);
    EXPECT_EQ(out[0].split, Split::Dev);
}

TEST(Split, DegenerateRatios) {
    for (const auto& id : numbered_ids("y", 50)) EXPECT_EQ(split_for(id, {0.0, 0.0, 1.0}, 9), Split::Test);
    EXPECT_THROW(assign_splits({}, {0.5, 0.5, 0.5}, 1), std::invalid_argument);
    EXPECT_THROW(assign_splits({}, {-0.1, 0.6, 0.5}, 1), std::invalid_argument);
}

TEST(Split, Names) {
    EXPECT_EQ(parse_split("validation"), Split::Dev);
    EXPECT_EQ(to_string(Split::Test), "test");
    EXPECT_FALSE(parse_split("holdout"));
}
