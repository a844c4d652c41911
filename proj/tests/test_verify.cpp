#include <gtest/gtest.h>

#include "luinv/verify.hpp"

using namespace luinv;

TEST(Verify, LuInvarianceSmall) {
    const Dims dims{2, 3};
    auto specs = all_specs(Kind::pure, 2, 3);
    const auto mixed = all_specs(Kind::mixed, 2, 3);
    specs.insert(specs.end(), mixed.begin(), mixed.end());
    const auto rep = check_lu_invariance(specs, dims, 5, 3);
    EXPECT_TRUE(rep.passed) << rep.to_json().dump();
    EXPECT_LT(rep.max_residual, 1e-12);
}

TEST(Verify, NormIsExactlyInvariant) {
    const auto rep = check_lu_invariance({InvariantSpec{canonical_form(PermTuple::identity(1, 1)), Kind::pure}},
                                         Dims{2, 2}, 10, 4);
    EXPECT_TRUE(rep.passed);
    EXPECT_LT(rep.max_residual, 1e-14);
}

TEST(Verify, LuRejectsMismatchedSpecs) {
    EXPECT_THROW(check_lu_invariance(all_specs(Kind::mixed, 3, 2), Dims{2, 2}, 1, 1), std::invalid_argument);
}

TEST(Verify, Independence) {
    const auto full = check_linear_independence(2, Kind::pure, Dims{2, 2, 2}, 5);
    EXPECT_TRUE(full.passed);
    EXPECT_EQ(full.parameters["rank"], 4);
    const auto degenerate = check_linear_independence(3, Kind::pure, Dims{2, 2, 2}, 5);
    EXPECT_TRUE(degenerate.passed);
    EXPECT_EQ(degenerate.parameters["rank"], 5);
    EXPECT_EQ(degenerate.notes.size(), 2u);
    const auto mixed = check_linear_independence(2, Kind::mixed, Dims{2, 2}, 5);
    EXPECT_TRUE(mixed.passed);
    EXPECT_EQ(mixed.parameters["rank"], 4);
}

TEST(Verify, ClassConsistency) {
    const auto rep = check_class_consistency(3, 2, 9);
    EXPECT_TRUE(rep.passed) << rep.to_json().dump();
    EXPECT_EQ(rep.inconclusive, 0);
    EXPECT_EQ(rep.parameters["class_pairs"], rep.parameters["separated_pairs"]);
    EXPECT_THROW(check_class_consistency(4, 2, 9), resource_error);
}

TEST(Verify, Purification) {
    for (int m = 1; m <= 3; ++m) {
        const auto rep = check_purification(m, Dims{2, 2}, 11);
        EXPECT_TRUE(rep.passed) << rep.to_json().dump();
        EXPECT_EQ(rep.parameters["ranks"], (std::vector<int>{1, 2, 4}));
    }
    EXPECT_EQ(check_purification(1, Dims{2}, 1).parameters["ranks"], (std::vector<int>{1, 2}));
}

TEST(Verify, CountsAndIdentities) {
    EXPECT_TRUE(check_counts(4, 6).passed);
    for (const auto& rep : check_qubit_relations(2, 20)) EXPECT_TRUE(rep.passed) << rep.check;
    EXPECT_TRUE(check_determinants(2, 20).passed);
}

TEST(Verify, ReportsAreDeterministic) {
    const auto a = run_suite("purification", {5, std::nullopt, 10});
    const auto b = run_suite("purification", {5, std::nullopt, 10});
    EXPECT_EQ(reports_to_json(a), reports_to_json(b));
}

TEST(Verify, ReportJson) {
    VerifyReport rep;
    rep.check = "demo";
    rep.tolerance = 1.0;
    rep.observe(0.5, {{"i", 0}});
    EXPECT_TRUE(rep.passed);
    rep.observe(2.0, {{"i", 1}});
    rep.observe(3.0, {{"i", 2}});
    EXPECT_FALSE(rep.passed);
    const auto j = rep.to_json();
    EXPECT_EQ(j["witness"]["i"], 1);
    EXPECT_EQ(j["max_residual"], 3.0);
    for (const char* key : {"check", "parameters", "tolerance", "passed", "inconclusive", "notes"})
        EXPECT_TRUE(j.contains(key)) << key;
    rep.observe(std::nan(""), {{"i", 3}});
    EXPECT_TRUE(std::isnan(rep.max_residual));
}

TEST(Verify, SuiteNames) {
    EXPECT_THROW(run_suite("nope"), std::invalid_argument);
    const auto counts = run_suite("counts");
    ASSERT_EQ(counts.size(), 1u);
    EXPECT_EQ(counts[0].check, "counts");
}
