#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <set>

#include "scholarrec/corpus.hpp"
#include "scholarrec/error.hpp"
#include "scholarrec/textproc.hpp"

using namespace scholarrec;
using Terms = std::vector<std::string>;

TEST(Tokenize, SplitsOnPunctuationAndLowercases)
{
    EXPECT_EQ(tokenize("Deep Learning, 2nd ed."), (Terms{"deep", "learning", "2nd", "ed"}));
    EXPECT_EQ(tokenize(""), Terms{});
    EXPECT_EQ(tokenize("state-of-the-art"), (Terms{"state", "of", "the", "art"}));
}

TEST(Tokenize, KeepsNonAsciiBytesInsideWords)
{
    EXPECT_EQ(tokenize("Schr\xc3\xb6" "dinger equation"), (Terms{"schr\xc3\xb6" "dinger", "equation"}));
}

TEST(Stopwords, RemovesOnlyListedWords)
{
    EXPECT_EQ(remove_stopwords({"the", "theory", "of", "computation"}), (Terms{"theory", "computation"}));
    EXPECT_EQ(remove_stopwords({}), Terms{});
    Terms plain{"graph", "mining", "protein"};
    EXPECT_EQ(remove_stopwords(plain), plain);
}

TEST(Stopwords, EmbeddedListMatchesResourceFile)
{
    std::ifstream in(SCHOLARREC_SOURCE_DIR "/resources/stopwords_en.txt");
    ASSERT_TRUE(in);
    std::set<std::string> file;
    for (std::string w; std::getline(in, w);) {
        if (!w.empty()) file.insert(w);
    }
    std::set<std::string> embedded;
    for (auto w : default_stopwords()) embedded.emplace(w);
    EXPECT_EQ(file, embedded);
    EXPECT_EQ(embedded.size(), 33u);
}

TEST(Porter, KnownWords)
{
    EXPECT_EQ(porter_stem("caresses"), "caress");
    EXPECT_EQ(porter_stem("libraries"), "librari");
    EXPECT_EQ(porter_stem("run"), "run");
    EXPECT_EQ(porter_stem("mining"), "mine");
    EXPECT_EQ(porter_stem("runs"), "run");
    EXPECT_EQ(porter_stem("a"), "a");
}

TEST(Analyze, FieldAnalyzers)
{
    EXPECT_EQ(analyze(field_spec(FieldName::title), Terms{"The Running Libraries"}), (Terms{"run", "librari"}));
    EXPECT_EQ(analyze(field_spec(FieldName::author), Terms{"John A. Smith"}), (Terms{"john a. smith"}));
    EXPECT_EQ(analyze(field_spec(FieldName::abstract_text), Terms{"Stemming OFF here"}),
              (Terms{"stemming", "off", "here"}));
    EXPECT_EQ(analyze(field_spec(FieldName::tag), Terms{"  Machine Learning \t"}), (Terms{"machine learning"}));
}

TEST(Analyze, DeterministicAndIdempotentPerInput)
{
    const Terms raw{"Graph mining of Protein Networks", "the caresses"};
    for (auto f : kAllFields) {
        auto once = analyze(field_spec(f), raw);
        EXPECT_EQ(once, analyze(field_spec(f), raw));
    }
    auto stemmed = analyze(field_spec(FieldName::title), raw);
    for (const auto& t : stemmed) EXPECT_EQ(porter_stem(t).size() <= t.size(), true);
}

TEST(FieldSpecs, AnalyzerAssignment)
{
    EXPECT_EQ(field_spec(FieldName::title).analyzer, Analyzer::stemmed_text);
    EXPECT_EQ(field_spec(FieldName::abstract_text).analyzer, Analyzer::plain_text);
    for (auto f : {FieldName::author, FieldName::tag, FieldName::keyword, FieldName::mesh_term,
                   FieldName::textrank_keyword, FieldName::cf}) {
        EXPECT_EQ(field_spec(f).analyzer, Analyzer::atomic);
    }
}

TEST(FieldList, ParsesAllAndExclusions)
{
    auto all = parse_field_list("all");
    EXPECT_EQ(all.size(), kContentFields.size());
    auto no_author = parse_field_list("all,-author");
    EXPECT_EQ(no_author.size(), kContentFields.size() - 1);
    EXPECT_EQ(std::count(no_author.begin(), no_author.end(), FieldName::author), 0);
    EXPECT_EQ(parse_field_list("title,abstract"), (std::vector<FieldName>{FieldName::title, FieldName::abstract_text}));
    EXPECT_EQ(parse_field_list(format_field_list(no_author)), no_author);
    try {
        parse_field_list("title,colour");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::config);
    }
}

TEST(TextRank, EmptyAndSingleWord)
{
    EXPECT_TRUE(textrank_keywords("").empty());
    EXPECT_EQ(textrank_keywords("protein protein protein"), Terms{"protein"});
}

TEST(TextRank, ThreeCycleGivesEqualScoresInLexicographicOrder)
{
    auto scores = textrank_scores("alpha beta gamma alpha beta gamma");
    ASSERT_EQ(scores.size(), 3u);
    EXPECT_EQ(scores[0].word, "alpha");
    EXPECT_EQ(scores[1].word, "beta");
    EXPECT_EQ(scores[2].word, "gamma");
    EXPECT_NEAR(scores[0].score, scores[1].score, 1e-9);
    EXPECT_NEAR(scores[1].score, scores[2].score, 1e-9);
    EXPECT_EQ(textrank_keywords("alpha beta gamma alpha beta gamma"), (Terms{"alpha", "beta", "gamma"}));
}

TEST(TextRank, ScoresSumToNodeCountOnConnectedGraphs)
{
    const char* texts[] = {
        "graph mining finds patterns in large graph data using mining algorithms",
        "protein interaction networks reveal protein function and cell signalling pathways",
        "alpha beta gamma delta alpha epsilon beta zeta",
    };
    for (const char* t : texts) {
        auto scores = textrank_scores(t);
        double sum = 0;
        for (const auto& s : scores) sum += s.score;
        EXPECT_NEAR(sum, static_cast<double>(scores.size()), 1e-4) << t;
    }
}

TEST(TextRank, TopNAndStopwordsExcluded)
{
    TextRankOptions o;
    o.top_n = 2;
    auto kw = textrank_keywords("the graph of the network and the graph of the cluster", o);
    EXPECT_EQ(kw.size(), 2u);
    for (const auto& w : kw) EXPECT_FALSE(is_stopword(w));
}

TEST(TextRank, InvalidOptionsAreConfigErrors)
{
    TextRankOptions o;
    o.damping = 1.5;
    try {
        textrank_keywords("alpha beta", o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::config);
    }
}

TEST(TextRank, AddKeywordsFillsFromAbstract)
{
    std::vector<Article> arts(2);
    arts[0].id = "a";
    arts[0].abstract_text = "graph mining graph clustering";
    arts[1].id = "b";
    arts[1].textrank_keywords = {"stale"};
    add_textrank_keywords(arts);
    EXPECT_FALSE(arts[0].textrank_keywords.empty());
    EXPECT_TRUE(arts[1].textrank_keywords.empty());
}
