#include <gtest/gtest.h>

#include "fsmp/harness.hpp"

using namespace fsmp;

TEST(Suite, DefaultSuiteCarriesAnchors)
{
    auto suite = default_suite();
    EXPECT_GE(suite.size(), 17u);
    for (const auto& c : suite) {
        EXPECT_FALSE(c.anchor.empty()) << c.name;
        EXPECT_NO_THROW(generate(c.spec)) << c.name;
        if (c.mode == EvidenceMode::Exhaustive) {
            // Exhaustive cases must fit their budget: every size up to the expected value.
            const Graph g = generate(c.spec);
            const auto domain = detail::make_domain(g, c.variant, false);
            std::uint64_t needed = 0;
            for (std::size_t k = 1; k <= c.expect; ++k)
                needed += detail::binomial(domain.size(), k);
            EXPECT_LE(needed, c.budget) << c.name;
        }
    }
}

TEST(Suite, ParseRoundTrip)
{
    auto suite = default_suite();
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : suite)
        j.push_back(to_json(c));
    auto parsed = parse_suite(j);
    ASSERT_EQ(parsed.size(), suite.size());
    for (std::size_t i = 0; i < suite.size(); ++i)
        EXPECT_EQ(to_json(parsed[i]), to_json(suite[i]));
}

TEST(Suite, ParseErrors)
{
    EXPECT_THROW(parse_suite(nlohmann::json::object()), Error);
    EXPECT_THROW(parse_suite(nlohmann::json::parse(R"([{"name":"x"}])")), Error);
    EXPECT_THROW(parse_suite(nlohmann::json::parse(R"([{"name":"x","spec":"cycle:5","variant":"XMP","expect":1}])")),
        Error);
    EXPECT_THROW(load_suite("/nonexistent/suite.json"), Error);
}

TEST(Verify, SmallSuiteSortedAndJudged)
{
    auto suite = parse_suite(nlohmann::json::parse(R"([
        {"name":"z-smp-cycle-5","spec":"cycle:5","variant":"SMP","expect":2,"mode":"exhaustive","budget":1000},
        {"name":"a-fsmp-k4","spec":"complete:4","variant":"FSMP","expect":2,"mode":"exhaustive","budget":100000},
        {"name":"m-wrong","spec":"complete:4","variant":"FSMP","expect":3,"mode":"exhaustive","budget":100000},
        {"name":"b-over-budget","spec":"torus:5,5","variant":"FSMP","expect":4,"mode":"exhaustive","budget":100},
        {"name":"c-probe-c7","spec":"cycle:7","variant":"FSMP","expect":1,"mode":"probe","trials":50,"seed":3},
        {"name":"d-trivial","spec":"torus:4,4","variant":"FMP","expect":4,"expect_trivial":true,"budget":100000}
    ])"));
    SuiteReport r = verify_known_results(suite, 1);
    ASSERT_EQ(r.cases.size(), 6u);
    EXPECT_EQ(r.cases[0].name, "a-fsmp-k4");
    EXPECT_EQ(r.cases[0].verdict, Verdict::Pass);
    EXPECT_EQ(r.cases[1].name, "b-over-budget");
    EXPECT_EQ(r.cases[1].verdict, Verdict::BudgetExceeded);
    EXPECT_EQ(r.cases[2].verdict, Verdict::Pass);
    EXPECT_EQ(r.cases[3].verdict, Verdict::Pass);
    EXPECT_EQ(r.cases[3].computed_trivial, true);
    EXPECT_EQ(r.cases[4].name, "m-wrong");
    EXPECT_EQ(r.cases[4].verdict, Verdict::Fail);
    EXPECT_EQ(r.cases[4].computed, 2u);
    EXPECT_EQ(r.cases[5].verdict, Verdict::Pass);
    EXPECT_FALSE(r.passed());

    std::ostringstream table;
    print_table(table, r);
    EXPECT_NE(table.str().find("suite FAILED"), std::string::npos);
    EXPECT_EQ(to_json(r, false).dump(), to_json(verify_known_results(suite, 2), false).dump());
}

TEST(Verify, ProbeCaseDetectsWrongExpectation)
{
    // fsmp(K5) = 3, so claiming 4 must be caught by probes at size 3.
    VerificationCase c{"k5", "complete:5", Variant::FSMP, 4, std::nullopt, EvidenceMode::Probe, 0, 1, 2000, ""};
    CaseResult r = run_case(c, 1);
    EXPECT_EQ(r.verdict, Verdict::Fail);
    EXPECT_EQ(r.computed, 3u);
}

TEST(ProductTheorem, CompleteBaseFailsHypothesis)
{
    ProductTheoremReport r = verify_product_theorem(GeneratorSpec::complete(6), 5);
    EXPECT_EQ(r.verdict, Verdict::HypothesisUnmet);
    EXPECT_FALSE(r.hypothesis_met);
    EXPECT_FALSE(r.upper_bound_witness.has_value());
}

TEST(ProductTheorem, LowDegreeBaseFailsHypothesis)
{
    ProductTheoremReport r = verify_product_theorem(GeneratorSpec::cycle(5), 5);
    EXPECT_EQ(r.verdict, Verdict::HypothesisUnmet);
    EXPECT_NE(r.hypothesis_detail.find("< 4"), std::string::npos);
}

TEST(ProductTheorem, CycleLengthHypothesis)
{
    for (std::size_t n : {4u, 3u, 6u}) {
        try {
            verify_product_theorem(GeneratorSpec::torus({5, 5}), n);
            FAIL() << n;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolated);
        }
    }
}

TEST(ProductTheorem, TorusBaseSmallProbe)
{
    ProductTheoremOptions o;
    o.mode = EvidenceMode::Probe;
    o.trials = 2000;
    o.seed = 1;
    ProductTheoremReport r = verify_product_theorem(GeneratorSpec::torus({5, 5}), 5, o);
    EXPECT_TRUE(r.hypothesis_met);
    EXPECT_EQ(r.target, 6u);
    ASSERT_TRUE(r.upper_bound_witness.has_value());
    EXPECT_EQ(r.upper_bound_witness->size(), 6u);
    EXPECT_EQ(r.levels.size(), 5u);
    EXPECT_EQ(r.verdict, Verdict::Pass);
    // Exhaustive mode falls back to probes when the budget cannot cover C(500, <=5).
    o.mode = EvidenceMode::Exhaustive;
    EXPECT_EQ(verify_product_theorem(GeneratorSpec::torus({5, 5}), 5, o).lower_bound_mode, EvidenceMode::Probe);
}
