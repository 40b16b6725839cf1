#include <gtest/gtest.h>

#include "fallacy/text.hpp"

using namespace fallacy::text;

TEST(Text, Trim) {
    EXPECT_EQ(trim("  a b \n"), "a b");
    EXPECT_EQ(trim(" \t"), "");
}

TEST(Text, CaseInsensitiveFind) {
    EXPECT_EQ(ifind("The Red Herring", "red herring"), 4u);
    EXPECT_EQ(ifind("abc", "d"), std::string_view::npos);
    EXPECT_EQ(ifind("aXa", "a", 1), 2u);
    EXPECT_TRUE(iequals("Doubt", "DOUBT"));
}

TEST(Text, CodePointOffsets) {
    const std::string s = "caf\xc3\xa9 na\xc3\xafve";  // "café naïve"
    EXPECT_EQ(char_count(s), 10u);
    EXPECT_EQ(byte_offset(s, 4), 5u);
    EXPECT_EQ(char_slice(s, 5, 10), "na\xc3\xafve");
}
