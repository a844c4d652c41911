#include <gtest/gtest.h>

#include "luinv/contract.hpp"
#include "oracle.hpp"

using namespace luinv;

namespace {

oracle::tuple images_of(const PermTuple& sigma) {
    oracle::tuple out;
    for (const auto& p : sigma.perms()) out.push_back(p.images());
    return out;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

PureState ghz_unnormalized() {
    Vector a = Vector::Zero(8);
    a(0) = 1;
    a(7) = 1;
    return PureState(Dims{2, 2, 2}, a);
}

}  // namespace

TEST(Contract, PureMatchesOracle) {
    for (const auto& dims : {Dims{2, 2}, Dims{2, 3, 2}, Dims{3}}) {
        const auto psi = random_pure(dims, 31);
        for (int m = 1; m <= 3; ++m)
            for (const auto& label : enumerate_orbits(m, dims.parties() - 1)) {
                const auto want = oracle::pure_invariant(images_of(label.rep()), m, dims.list(), psi.amplitudes);
                EXPECT_LT(rel(eval_pure(label.rep(), psi), want), 1e-12) << to_string(label);
                EXPECT_LT(rel(eval_pure_sequential(label.rep(), psi), want), 1e-12) << to_string(label);
            }
    }
}

TEST(Contract, MixedMatchesOracle) {
    for (const auto& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3}}) {
        const auto rho = random_density(dims, 32, 3);
        for (int m = 1; m <= 3; ++m)
            for (const auto& label : enumerate_orbits(m, dims.parties())) {
                const auto want = oracle::mixed_invariant(images_of(label.rep()), m, dims.list(), rho.entries);
                EXPECT_LT(rel(eval_mixed(label.rep(), rho), want), 1e-12) << to_string(label);
                EXPECT_LT(rel(eval_mixed_sequential(label.rep(), rho), want), 1e-12) << to_string(label);
            }
    }
}

TEST(Contract, GradeFourSequentialMatchesNestedLoops) {
    const auto rho = random_density(Dims{2, 2}, 5, 4);
    for (const auto& label : enumerate_orbits(4, 2))
        EXPECT_LT(rel(eval_mixed_sequential(label.rep(), rho), eval_mixed(label.rep(), rho)), 1e-11) << to_string(label);
    const auto psi = random_pure(Dims{2, 2, 2}, 6);
    for (const auto& label : enumerate_orbits(4, 2))
        EXPECT_LT(rel(eval_pure_sequential(label.rep(), psi), eval_pure(label.rep(), psi)), 1e-11) << to_string(label);
}

TEST(Contract, LabelIsWellDefined) {
    const auto rho = random_density(Dims{2, 3}, 7, 6);
    for (const auto& label : enumerate_orbits(3, 2)) {
        const cplx v = eval_mixed(label.rep(), rho);
        for (const auto& member : conjugation_orbit(label.rep())) EXPECT_LT(rel(eval_mixed(member, rho), v), 1e-12);
    }
}

TEST(Contract, NormAndScaling) {
    const auto psi = random_pure(Dims{2, 3}, 9);
    const double n2 = psi.amplitudes.squaredNorm();
    EXPECT_NEAR(std::abs(eval_pure(parse_tuple("e", 1), psi) - n2), 0.0, 1e-12);
    PureState scaled = psi;
    const cplx c(0.7, -1.1);
    scaled.amplitudes *= c;
    for (const auto& label : enumerate_orbits(3, 1))
        EXPECT_LT(rel(eval_pure(label.rep(), scaled), std::pow(std::norm(c), 3) * eval_pure(label.rep(), psi)), 1e-12);
}

TEST(Contract, SinglePartyPureIsPowerOfNorm) {
    const auto psi = random_pure(Dims{3}, 10);
    const double n2 = psi.amplitudes.squaredNorm();
    for (int m = 1; m <= 4; ++m)
        EXPECT_LT(rel(eval_pure(PermTuple::identity(m, 0), psi), std::pow(n2, m)), 1e-12);
}

TEST(Contract, FactorizesOverComponents) {
    const auto rho = random_density(Dims{2, 2}, 12, 4);
    for (const auto& label : enumerate_orbits(3, 2)) {
        if (is_transitive(label.rep())) continue;
        cplx product = 1;
        for (const auto& part : point_orbits(label.rep())) product *= eval_mixed(restrict_to(label.rep(), part), rho);
        EXPECT_LT(rel(eval_mixed(label.rep(), rho), product), 1e-12) << to_string(label);
    }
}

TEST(Contract, KnownValues) {
    // unnormalized GHZ: Kempe invariant 2
    EXPECT_LT(rel(eval_pure(parse_tuple("s,s2", 3), ghz_unnormalized()), 2.0), 1e-14);
    // unnormalized Bell pair: Tr π₁² = 2
    Vector bell = Vector::Zero(4);
    bell(0) = 1;
    bell(3) = 1;
    EXPECT_LT(rel(eval_pure(parse_tuple("t", 2), PureState(Dims{2, 2}, bell)), 2.0), 1e-14);
}

TEST(Contract, PurificationRoutesAgree) {
    const auto psi = random_pure(Dims{2, 2}, 13);
    for (int m = 1; m <= 3; ++m)
        for (const auto& label : enumerate_orbits(m, 1))
            EXPECT_LT(eval_pure_via_mixed(label.rep(), psi).max_relative_spread(), 1e-12) << to_string(label);
    const auto single = random_pure(Dims{3}, 14);
    EXPECT_LT(eval_pure_via_mixed(PermTuple::identity(3, 0), single).max_relative_spread(), 1e-12);
}

TEST(Contract, Guards) {
    const auto rho = random_density(Dims{2, 2}, 1, 1);
    EXPECT_THROW(eval_mixed(parse_tuple("t", 2), rho), std::invalid_argument);
    const double saved = max_contraction_terms.load();
    max_contraction_terms = 10.0;
    EXPECT_THROW(eval_mixed(parse_tuple("t,t", 2), rho), resource_error);
    max_contraction_terms = saved;
}

TEST(Contract, SpecHelpers) {
    const auto specs = all_specs(Kind::pure, 3);
    EXPECT_EQ(specs.size(), 1u + 4u + 11u);
    for (const auto& s : specs) EXPECT_EQ(s.parties(), 3);
    EXPECT_EQ(all_specs(Kind::mixed, 2).size(), 1u + 4u + 11u);
    const auto psi = random_pure(Dims{2, 2}, 15);
    const InvariantSpec spec{canonical_form(parse_tuple("t,e", 2)), Kind::mixed};
    EXPECT_LT(rel(evaluate(spec, psi), evaluate(spec, projector(psi))), 1e-12);
    EXPECT_THROW(evaluate(InvariantSpec{canonical_form(parse_tuple("t", 2)), Kind::pure}, projector(psi)),
                 std::invalid_argument);
}
