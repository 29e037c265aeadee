// Runs the eight acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "scholarrec/cf.hpp"
#include "scholarrec/contentrec.hpp"
#include "scholarrec/datasets.hpp"
#include "scholarrec/error.hpp"
#include "scholarrec/eval.hpp"
#include "scholarrec/harness.hpp"
#include "scholarrec/hybrid.hpp"
#include "tempdir.hpp"

using namespace scholarrec;

namespace {

// Outcome of one criterion: empty failure string means pass.
struct Check {
    std::string failure;
    std::string detail;

    void expect(bool ok, const std::string& what)
    {
        if (!ok && failure.empty()) failure = what;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

bool same_list(const RankedList& a, const RankedList& b, double tol)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].id != b[i].id || std::fabs(a[i].score - b[i].score) > tol) return false;
    }
    return true;
}

const std::vector<FieldName> kContent(kContentFields.begin(), kContentFields.end());

Check similarity_oracle()
{
    Check c;
    const auto start = Clock::now();
    auto libs = oracle::random_libraries(2024, 30, 40, 0.15);
    auto sets = oracle::sets_from(libs);
    auto matrix = build_interactions(libs);
    c.expect(matrix.items == sets.items, "interaction matrix items differ from oracle sets");
    double worst = 0;
    std::size_t pairs = 0;
    for (auto m : kAllMeasures) {
        for (std::size_t i = 0; i < sets.items.size(); ++i) {
            for (std::size_t j = 0; j < sets.items.size(); ++j) {
                if (i == j) continue;
                const double got = similarity(m, matrix, sets.items[i], sets.items[j]);
                const double want = oracle::similarity(m, sets.users[i], sets.users[j], sets.n_users);
                worst = std::max(worst, std::fabs(got - want));
                ++pairs;
            }
        }
        for (std::size_t cap : {2u, 5u, 100u}) {
            for (std::size_t k : {3u, 100u}) {
                CfParams p;
                p.measure = m;
                p.max_cooccurrences = cap;
                p.max_similarities = k;
                auto got = train_neighbors(libs, p);
                auto want = oracle::pipeline(sets, m, cap, k);
                bool ok = got.size() == want.size();
                for (const auto& [item, list] : want) {
                    auto it = got.find(item);
                    if (it == got.end() || it->second.size() != list.size()) {
                        ok = false;
                        continue;
                    }
                    for (std::size_t r = 0; r < list.size(); ++r) {
                        ok = ok && it->second[r].id == list[r].id &&
                             std::fabs(it->second[r].score - list[r].score) <= 1e-12;
                    }
                }
                c.expect(ok, std::string("pipeline mismatch for ") + std::string(measure_name(m)));
            }
        }
    }
    const double elapsed = seconds_since(start);
    c.expect(worst <= 1e-12, fmt("max |delta| %.3g exceeds 1e-12", worst));
    c.expect(elapsed < 5.0, fmt("runtime %.2fs exceeds 5s", elapsed));
    c.detail = std::to_string(pairs) + " ordered pairs, max |delta| " + fmt("%.2g", worst) + ", " +
               fmt("%.2fs", elapsed);
    return c;
}

Check retrieval_oracle()
{
    Check c;
    const auto start = Clock::now();
    std::size_t queries = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 20 + (seed * 7) % 31;
        auto arts = oracle::random_articles(seed, n);
        auto idx = FieldedIndex::build(arts, kContent);
        auto corpus = oracle::analyze_corpus(arts, kContent);
        for (const auto& a : arts) {
            for (bool exclude : {true, false}) {
                auto q = build_query(a, kContent);
                if (!exclude) q.excluded_doc.reset();
                auto tf = search(idx, q, Scorer::tfidf, n);
                auto want_tf = oracle::rank_all(corpus, q, n, [&](std::size_t d) { return oracle::tfidf(corpus, q, d); });
                auto bm = search(idx, q, Scorer::bm25, n);
                auto want_bm = oracle::rank_all(corpus, q, n, [&](std::size_t d) { return oracle::bm25(corpus, q, d); });
                c.expect(same_list(tf, want_tf, 1e-9), "tfidf mismatch on corpus " + std::to_string(seed) + " query " + a.id);
                c.expect(same_list(bm, want_bm, 1e-9), "bm25 mismatch on corpus " + std::to_string(seed) + " query " + a.id);
                if (exclude) {
                    for (const auto& d : tf) c.expect(d.id != a.id, "excluded doc returned for " + a.id);
                    for (const auto& d : bm) c.expect(d.id != a.id, "excluded doc returned for " + a.id);
                }
                ++queries;
            }
        }
    }
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 10.0, fmt("runtime %.2fs exceeds 10s", elapsed));
    c.detail = "20 corpora, " + std::to_string(queries) + " queries x 2 scorers, " + fmt("%.2fs", elapsed);
    return c;
}

Check degeneracies()
{
    Check c;
    std::size_t lists = 0;
    for (std::uint64_t seed = 101; seed <= 110; ++seed) {
        auto arts = oracle::random_articles(seed, 40);
        auto idx = FieldedIndex::build(arts, kContent);
        auto aug = augment_index(idx, NeighborMap{});
        ContentConfig tfidf, nq, nq0, prf0;
        tfidf.variant = ContentVariant::tfidf;
        nq.variant = ContentVariant::nq;
        nq0 = nq;
        nq0.nq_alpha = 0.0;
        prf0.variant = ContentVariant::prf;
        prf0.prf_terms_per_field = 0;
        for (const auto& a : arts) {
            c.expect(recommend(idx, a, nq0, 40) == recommend(idx, a, tfidf, 40), "NQ(alpha=0) differs from TFIDF");
            c.expect(recommend(idx, a, prf0, 40) == recommend(idx, a, nq, 40), "PRF(0 terms) differs from NQ");
            for (auto v : {ContentVariant::tfidf, ContentVariant::nq, ContentVariant::prf, ContentVariant::bm25c}) {
                ContentConfig base;
                base.variant = v;
                auto h = hybrid_defaults(base);
                c.expect(recommend_hybrid(aug, a, NeighborMap{}, h, 40) == recommend(idx, a, base, 40),
                         "hybrid with empty neighbors differs from " + std::string(variant_name(v)));
                ++lists;
            }
            lists += 2;
        }
    }
    c.detail = "10 corpora, " + std::to_string(lists) + " list comparisons";
    return c;
}

Check evaluator_parity()
{
    // Reference values from trec_eval on the fixture: `trec_eval -c -m P.5`
    // for all queries; answered_only is the same tool without -c.
    Check c;
    const std::string dir = SCHOLARREC_SOURCE_DIR "/tests/fixtures/trec/";
    auto run = load_run(dir + "run.txt");
    auto qrels = load_qrels(dir + "qrels.txt");
    const double ref_all = 0.2667, ref_answered = 0.3200;
    const double all = precision_at_k(run, qrels, 5, AveragingMode::all_queries);
    const double answered = precision_at_k(run, qrels, 5, AveragingMode::answered_only);
    auto four = [](double v) { return fmt("%.4f", v); };
    c.expect(four(all) == four(ref_all), "all_queries P_5 " + four(all) + " != " + four(ref_all));
    c.expect(four(answered) == four(ref_answered), "answered_only P_5 " + four(answered) + " != " + four(ref_answered));
    auto table = evaluate(run, qrels, std::vector<std::size_t>{5});
    c.expect(table.queries == 6 && table.answered == 5, "fixture should have 6 judged and 5 answered queries");
    c.detail = "all_queries " + four(all) + ", answered_only " + four(answered);
    return c;
}

Check testset_constraints()
{
    Check c;
    std::size_t sets = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SynthParams p;
        p.seed = seed;
        auto catalog = synth_corpus(p);
        for (auto s : {Scenario::groups, Scenario::venues, Scenario::publications, Scenario::libraries}) {
            const std::string where = std::string(scenario_name(s)) + " seed " + std::to_string(seed);
            TestSet t;
            try {
                t = build_testset(catalog, s, seed);
            } catch (const Error& e) {
                c.expect(false, where + ": " + e.what());
                continue;
            }
            std::set<std::string> claimed;
            for (const auto& set : t.sets) {
                ++sets;
                c.expect(set.article_ids.size() >= 10 && set.article_ids.size() <= 20, where + ": set size out of range");
                for (const auto& id : set.article_ids) c.expect(claimed.insert(id).second, where + ": article in two sets");
                std::set<std::string> queries;
                for (const auto& q : t.queries) {
                    if (q.set_id != set.set_id) continue;
                    queries.insert(q.article_id);
                    c.expect(std::binary_search(set.article_ids.begin(), set.article_ids.end(), q.article_id),
                             where + ": query outside its set");
                }
                c.expect(queries.size() == 2, where + ": set without exactly two distinct queries");
            }
            auto train = derive_training(catalog.libraries, t, catalog);
            if (s == Scenario::publications) {
                std::set<std::string> owners;
                for (const auto& id : t.article_ids()) {
                    const auto* a = catalog.find(id);
                    owners.insert(a->owner_user_ids.begin(), a->owner_user_ids.end());
                }
                for (const auto& lib : train) c.expect(!owners.count(lib.user_id), where + ": owner library leaked");
            }
            if (s == Scenario::libraries) {
                for (const auto& lib : train) c.expect(t.find_set(lib.user_id) == nullptr, where + ": source library leaked");
            }
        }
    }
    c.detail = "4 scenarios x 50 seeds, " + std::to_string(sets) + " sets";
    return c;
}

ExperimentConfig groups_config(const std::filesystem::path& corpus, RecommenderKind kind)
{
    ExperimentConfig config;
    config.scenario = Scenario::groups;
    config.recommender = kind;
    config.seed = 42;
    config.content.variant = ContentVariant::prf;
    set_corpus_dir(config, corpus);
    return config;
}

double p5(const PipelineArtifacts& a)
{
    const auto* row = a.table.find("P_5", AveragingMode::all_queries);
    return row ? row->value : -1.0;
}

Check qualitative_ordering(const testutil::TempDir& dir)
{
    Check c;
    const auto start = Clock::now();
    SynthParams params;
    params.seed = 42;
    testutil::write_synth_corpus(dir / "corpus", params);
    const double cf = p5(run_pipeline(groups_config(dir / "corpus", RecommenderKind::cf), dir / "cf"));
    const double prf = p5(run_pipeline(groups_config(dir / "corpus", RecommenderKind::content), dir / "prf"));
    const double hybrid = p5(run_pipeline(groups_config(dir / "corpus", RecommenderKind::hybrid), dir / "hybrid"));
    const double elapsed = seconds_since(start);
    c.expect(hybrid >= std::max(cf, prf) - 0.02, "hybrid below max(cf, prf) - 0.02");
    c.expect(cf >= 0.3 && prf >= 0.3, "a baseline is below 0.3");
    c.expect(elapsed < 60.0, fmt("runtime %.2fs exceeds 60s", elapsed));
    c.detail = fmt("P@5 cf %.4f, prf %.4f, ", cf, prf) + fmt("hybrid %.4f, %.2fs", hybrid, elapsed);
    return c;
}

Check porter_vocabulary()
{
    Check c;
    std::ifstream voc(SCHOLARREC_SOURCE_DIR "/tests/fixtures/porter/voc.txt");
    std::ifstream out(SCHOLARREC_SOURCE_DIR "/tests/fixtures/porter/output.txt");
    c.expect(static_cast<bool>(voc) && static_cast<bool>(out), "reference vocabulary missing");
    std::size_t total = 0, matched = 0;
    std::string word, expected;
    while (std::getline(voc, word) && std::getline(out, expected)) {
        ++total;
        matched += porter_stem(word) == expected ? 1 : 0;
    }
    c.expect(total > 0 && matched == total, std::to_string(total - matched) + " mismatches");
    c.detail = std::to_string(matched) + "/" + std::to_string(total) + " entries";
    return c;
}

Check determinism(const testutil::TempDir& dir)
{
    Check c;
    SynthParams params;
    params.seed = 42;
    testutil::write_synth_corpus(dir / "det-corpus", params);
    const auto config = groups_config(dir / "det-corpus", RecommenderKind::hybrid);
    auto a = run_pipeline(config, dir / "det-a");
    auto b = run_pipeline(config, dir / "det-b");
    c.expect(testutil::read_file(a.run) == testutil::read_file(b.run), "run files differ");
    c.expect(testutil::read_file(a.metrics) == testutil::read_file(b.metrics), "metrics files differ");
    c.expect(!testutil::read_file(a.run).empty(), "empty run file");
    c.detail = "seed 42, run " + std::to_string(testutil::read_file(a.run).size()) + " bytes identical";
    return c;
}

}  // namespace

int main()
{
    testutil::TempDir dir("acceptance");
    struct Criterion {
        const char* name;
        std::function<Check()> run;
    };
    const Criterion criteria[] = {
        {"similarity oracle equivalence", similarity_oracle},
        {"retrieval oracle equivalence", retrieval_oracle},
        {"configuration degeneracies", degeneracies},
        {"evaluator parity with trec_eval", evaluator_parity},
        {"test-set constraints", testset_constraints},
        {"hybrid ordering on synthetic groups", [&] { return qualitative_ordering(dir); }},
        {"porter reference vocabulary", porter_vocabulary},
        {"seeded determinism", [&] { return determinism(dir); }},
    };
    int failed = 0;
    int number = 0;
    for (const auto& criterion : criteria) {
        ++number;
        Check result;
        try {
            result = criterion.run();
        } catch (const std::exception& e) {
            result.failure = std::string("exception: ") + e.what();
        }
        const bool pass = result.failure.empty();
        failed += pass ? 0 : 1;
        std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", number, criterion.name,
                    pass ? result.detail.c_str() : result.failure.c_str());
    }
    std::fflush(stdout);
    return failed;
}
