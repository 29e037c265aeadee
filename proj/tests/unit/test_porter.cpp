#include <gtest/gtest.h>

#include <fstream>

#include "scholarrec/textproc.hpp"

TEST(Porter, ReferenceVocabulary)
{
    std::ifstream voc(SCHOLARREC_SOURCE_DIR "/tests/fixtures/porter/voc.txt");
    std::ifstream out(SCHOLARREC_SOURCE_DIR "/tests/fixtures/porter/output.txt");
    ASSERT_TRUE(voc && out);
    std::size_t total = 0, mismatches = 0;
    std::string word, expected;
    while (std::getline(voc, word) && std::getline(out, expected)) {
        ++total;
        const auto got = scholarrec::porter_stem(word);
        if (got != expected) {
            if (++mismatches <= 10) ADD_FAILURE() << word << " -> " << got << ", expected " << expected;
        }
    }
    EXPECT_GT(total, 23000u);
    EXPECT_EQ(mismatches, 0u);
}
