#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scholarrec/contentrec.hpp"
#include "scholarrec/corpus.hpp"
#include "scholarrec/datasets.hpp"
#include "scholarrec/error.hpp"

using namespace scholarrec;

namespace {

Article titled(std::string id, std::string title)
{
    Article a;
    a.id = std::move(id);
    a.title = std::move(title);
    return a;
}

const std::vector<FieldName> kTitle{FieldName::title};
const std::vector<FieldName> kContent(kContentFields.begin(), kContentFields.end());

ContentConfig config_for(ContentVariant v, std::vector<FieldName> fields = kContent)
{
    ContentConfig c;
    c.variant = v;
    c.fields_used = std::move(fields);
    return c;
}

bool contains_id(const RankedList& r, const std::string& id)
{
    return std::any_of(r.begin(), r.end(), [&](const auto& d) { return d.id == id; });
}

}  // namespace

TEST(BuildQuery, TitleIsStemmedAndQueryArticleExcluded)
{
    auto q = build_query(titled("a1", "Graph Mining"), kContent);
    ASSERT_EQ(q.fields().size(), 1u);
    EXPECT_EQ(q.fields()[0].field, FieldName::title);
    EXPECT_EQ(q.fields()[0].terms, (std::vector<TermWeight>{{"graph", 1.0}, {"mine", 1.0}}));
    EXPECT_EQ(q.excluded_doc, std::optional<std::string>("a1"));
}

TEST(BuildQuery, AtomicAuthorField)
{
    Article a;
    a.id = "a1";
    a.authors = {"Ada Lovelace"};
    a.title = "ignored here";
    std::vector<FieldName> authors{FieldName::author};
    auto q = build_query(a, authors);
    ASSERT_EQ(q.fields().size(), 1u);
    EXPECT_EQ(q.fields()[0].terms, (std::vector<TermWeight>{{"ada lovelace", 1.0}}));
}

TEST(BuildQuery, NoMetadataGivesEmptyQueryAndEmptyResult)
{
    Article bare;
    bare.id = "x";
    EXPECT_TRUE(build_query(bare, kContent).empty());
    std::vector<Article> arts{titled("a", "graph"), bare};
    auto idx = FieldedIndex::build(arts, kContent);
    for (auto v : {ContentVariant::tfidf, ContentVariant::nq, ContentVariant::prf, ContentVariant::bm25c}) {
        EXPECT_TRUE(recommend(idx, bare, config_for(v), 10).empty());
    }
}

TEST(RecommendTfidf, SingleArticleIndexIsEmpty)
{
    std::vector<Article> arts{titled("a", "graph mining")};
    auto idx = FieldedIndex::build(arts, kContent);
    EXPECT_TRUE(recommend_tfidf(idx, arts[0], config_for(ContentVariant::tfidf), 10).empty());
}

TEST(RecommendTfidf, PlantedTopicsRankPartnersFirst)
{
    SynthParams p;
    p.seed = 3;
    auto catalog = synth_corpus(p);
    auto arts = catalog_articles(catalog);
    auto idx = FieldedIndex::build(arts, kContent);
    double hits = 0, total = 0;
    for (const auto& a : arts) {
        auto r = recommend_tfidf(idx, a, config_for(ContentVariant::tfidf), 5);
        for (const auto& d : r) hits += synth_topic_of(d.id) == synth_topic_of(a.id) ? 1 : 0;
        total += 5;
    }
    EXPECT_GE(hits / total, 0.8);
}

TEST(RecommendNq, FactorOneAtFullOverlapAndHalfAtHalfOverlap)
{
    Article q = titled("q", "graph");
    q.tags = {"bio"};
    Article full = titled("full", "graph");
    full.tags = {"bio"};
    Article half = titled("half", "graph");
    std::vector<Article> arts{q, full, half, titled("f1", "protein"), titled("f2", "cell"), titled("f3", "tree")};
    auto idx = FieldedIndex::build(arts, kContent);
    auto query = build_query(q, kContent);
    auto tf = search(idx, query, Scorer::tfidf, 10);
    auto nq = rank_nq(idx, query, 1.0, 10);
    auto score_of = [](const RankedList& r, const std::string& id) {
        for (const auto& d : r) {
            if (d.id == id) return d.score;
        }
        return -1.0;
    };
    EXPECT_DOUBLE_EQ(score_of(nq, "full"), score_of(tf, "full"));
    EXPECT_DOUBLE_EQ(score_of(nq, "half"), score_of(tf, "half") * 0.5);
}

TEST(RecommendNq, DiscountReordersPartialMatches)
{
    // X matches only the title field but scores higher under plain TFIDF; Y
    // matches both fields.
    Article q = titled("q", "graph mining");
    q.tags = {"bio"};
    Article x = titled("x", "graph mining");
    Article y = titled("y", "graph");
    y.tags = {"bio"};
    Article f5 = titled("f5", "tree");
    f5.tags = {"bio", "chem"};
    std::vector<Article> arts{q, x, y, titled("f1", "protein"), titled("f2", "cell"), titled("f3", "tree"),
                              titled("f4", "structure"), f5};
    auto idx = FieldedIndex::build(arts, kContent);
    auto corpus = oracle::analyze_corpus(arts, kContent);
    auto query = build_query(q, kContent);
    auto dx = std::distance(corpus.ids.begin(), std::find(corpus.ids.begin(), corpus.ids.end(), "x"));
    auto dy = std::distance(corpus.ids.begin(), std::find(corpus.ids.begin(), corpus.ids.end(), "y"));
    const double sx = oracle::tfidf(corpus, query, dx);
    const double sy = oracle::tfidf(corpus, query, dy);
    ASSERT_GT(sx, sy);
    ASSERT_LT(sx * 0.5, sy);
    auto tf = recommend_tfidf(idx, q, config_for(ContentVariant::tfidf), 2);
    auto nq = recommend_nq(idx, q, config_for(ContentVariant::nq), 2);
    ASSERT_EQ(tf.size(), 2u);
    ASSERT_EQ(nq.size(), 2u);
    EXPECT_EQ(tf[0].id, "x");
    EXPECT_EQ(nq[0].id, "y");
    EXPECT_NEAR(nq[0].score, sy, 1e-12);
    EXPECT_NEAR(nq[1].score, sx * 0.5, 1e-12);
}

TEST(RecommendPrf, NoFeedbackEqualsNq)
{
    std::vector<Article> arts{titled("a", "graph"), titled("b", "protein"), titled("q", "unmatched words")};
    auto idx = FieldedIndex::build(arts, kContent);
    auto prf = recommend_prf(idx, arts[2], config_for(ContentVariant::prf), 10);
    EXPECT_TRUE(prf.empty());
    EXPECT_EQ(prf, recommend_nq(idx, arts[2], config_for(ContentVariant::nq), 10));
}

TEST(RecommendPrf, ExpansionNeverDuplicatesQueryTerms)
{
    auto arts = oracle::random_articles(9, 40);
    auto idx = FieldedIndex::build(arts, kContent);
    auto cfg = config_for(ContentVariant::prf);
    for (const auto& a : arts) {
        auto q = build_query(a, kContent);
        if (q.empty()) continue;
        auto feedback = rank_nq(idx, q, 1.0, 5);
        auto expanded = expand_query(idx, q, feedback, cfg);
        for (const auto& fq : expanded.fields()) {
            std::set<std::string> seen;
            for (const auto& t : fq.terms) EXPECT_TRUE(seen.insert(t.term).second);
            const auto* orig = q.find(fq.field);
            std::size_t added = 0;
            for (const auto& t : fq.terms) {
                bool was = orig && q.contains(fq.field, t.term);
                if (was) {
                    auto it = std::find_if(orig->terms.begin(), orig->terms.end(),
                                           [&](const auto& o) { return o.term == t.term; });
                    EXPECT_EQ(t.weight, it->weight);
                } else {
                    EXPECT_EQ(t.weight, cfg.prf_term_weight);
                    ++added;
                }
            }
            EXPECT_LE(added, static_cast<std::size_t>(cfg.prf_terms_per_field));
        }
    }
}

TEST(RecommendPrf, ExpansionRecoversUnmatchedPartner)
{
    std::vector<Article> arts{titled("q", "alpha beta"),         titled("p1", "alpha beta gamma"),
                              titled("p2", "alpha gamma"),        titled("p3", "gamma delta"),
                              titled("n1", "zeta eta"),           titled("n2", "theta iota"),
                              titled("n3", "kappa lambda"),       titled("n4", "zeta kappa")};
    auto idx = FieldedIndex::build(arts, kTitle);
    auto cfg = config_for(ContentVariant::prf, kTitle);
    cfg.prf_feedback_docs = 2;
    auto base = recommend_nq(idx, arts[0], cfg, 5);
    EXPECT_FALSE(contains_id(base, "p3"));
    auto query = build_query(arts[0], kTitle);
    auto expanded = expand_query(idx, query, rank_nq(idx, query, 1.0, 2), cfg);
    EXPECT_TRUE(expanded.contains(FieldName::title, "gamma"));
    EXPECT_FALSE(query.contains(FieldName::title, "gamma"));
    auto prf = recommend_prf(idx, arts[0], cfg, 5);
    EXPECT_TRUE(contains_id(prf, "p3"));
}

TEST(RecommendBm25c, ZeroIdfGivesEmptyResult)
{
    std::vector<Article> arts{titled("q", "graph tree"), titled("a", "graph"), titled("b", "tree"),
                              titled("c", "cell")};
    auto idx = FieldedIndex::build(arts, kTitle);
    ASSERT_EQ(idx.doc_freq(FieldName::title, "graph"), 2u);
    EXPECT_TRUE(recommend_bm25c(idx, arts[0], config_for(ContentVariant::bm25c, kTitle), 10).empty());
}

TEST(RecommendBm25c, FiveDocOracle)
{
    std::vector<Article> arts{titled("d1", "graph mining of networks"), titled("d2", "mining graph data"),
                              titled("d3", "protein networks"), titled("d4", "cell"),
                              titled("d5", "deep learning for graph networks"), titled("d6", "tree"),
                              titled("d7", "forest")};
    auto idx = FieldedIndex::build(arts, kTitle);
    auto corpus = oracle::analyze_corpus(arts, kTitle);
    auto q = build_query(arts[0], kTitle);
    auto got = recommend_bm25c(idx, arts[0], config_for(ContentVariant::bm25c, kTitle), 10);
    auto want = oracle::rank_all(corpus, q, 10, [&](std::size_t d) { return oracle::bm25(corpus, q, d); });
    ASSERT_EQ(got.size(), want.size());
    ASSERT_FALSE(got.empty());
    for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].id, want[i].id);
        EXPECT_NEAR(got[i].score, want[i].score, 1e-9);
    }
}

class ContentProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ContentProperties, DegeneraciesExclusionAndDeterminism)
{
    auto arts = oracle::random_articles(GetParam(), 35);
    auto idx = FieldedIndex::build(arts, kContent);
    for (const auto& a : arts) {
        auto tf = recommend_tfidf(idx, a, config_for(ContentVariant::tfidf), 50);
        auto nq_cfg = config_for(ContentVariant::nq);
        nq_cfg.nq_alpha = 0.0;
        EXPECT_EQ(recommend_nq(idx, a, nq_cfg, 50), tf);

        auto nq = recommend_nq(idx, a, config_for(ContentVariant::nq), 50);
        std::map<std::string, double> tf_scores;
        for (const auto& d : tf) tf_scores[d.id] = d.score;
        for (const auto& d : nq) EXPECT_LE(d.score, tf_scores.at(d.id));

        auto prf_cfg = config_for(ContentVariant::prf);
        prf_cfg.prf_terms_per_field = 0;
        EXPECT_EQ(recommend_prf(idx, a, prf_cfg, 50), nq);

        for (auto v : {ContentVariant::tfidf, ContentVariant::nq, ContentVariant::prf, ContentVariant::bm25c}) {
            auto r = recommend(idx, a, config_for(v), 10);
            EXPECT_FALSE(contains_id(r, a.id));
            EXPECT_EQ(r, recommend(idx, a, config_for(v), 10));
            for (std::size_t i = 1; i < r.size(); ++i) EXPECT_TRUE(ranked_before(r[i - 1], r[i]));
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ContentProperties, ::testing::Values(1, 2, 3, 4, 5));

TEST(ContentConfigTest, JsonRoundTripAndValidation)
{
    auto c = config_for(ContentVariant::nq);
    c.fields_used = parse_field_list("all,-author");
    c.nq_alpha = 0.5;
    EXPECT_EQ(ContentConfig::from_json(c.to_json()), c);
    auto bad = c;
    bad.fields_used.clear();
    EXPECT_THROW(bad.validate(), Error);
    bad = c;
    bad.prf_feedback_docs = 0;
    EXPECT_THROW(bad.validate(), Error);
    EXPECT_THROW(parse_variant("lsi"), Error);
}
