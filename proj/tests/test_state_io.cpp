#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "luinv/state_io.hpp"

using namespace luinv;

TEST(StateIo, PureRoundTripIsExact) {
    const auto psi = random_pure(Dims{2, 3}, 8);
    const auto back = std::get<PureState>(parse_state(to_json(psi)));
    EXPECT_EQ(back.dims, psi.dims);
    EXPECT_EQ(back.amplitudes, psi.amplitudes);
}

TEST(StateIo, MixedRoundTripIsExact) {
    const auto rho = random_density(Dims{2, 2}, 8, 3);
    const auto back = std::get<DensityMatrix>(parse_state(to_json(rho)));
    EXPECT_EQ(back.dims, rho.dims);
    EXPECT_EQ(back.entries, rho.entries);
}

TEST(StateIo, NestedLayoutFollowsDims) {
    const auto psi = std::get<PureState>(parse_state(
        R"({"dims":[2,3],"kind":"pure","data":[[[1,0],[2,0],[3,0]],[[4,0],[5,0],[6,1]]]})"));
    EXPECT_EQ(psi.amplitudes(2), cplx(3, 0));
    EXPECT_EQ(psi.amplitudes(5), cplx(6, 1));
}

TEST(StateIo, Errors) {
    EXPECT_THROW(parse_state("{"), parse_error);
    EXPECT_THROW(parse_state(R"({"dims":[2],"kind":"pure"})"), parse_error);
    EXPECT_THROW(parse_state(R"({"dims":[2],"kind":"pure","data":[[1,0]]})"), parse_error);
    EXPECT_THROW(parse_state(R"({"dims":[0],"kind":"pure","data":[]})"), parse_error);
    EXPECT_THROW(parse_state(R"({"dims":[2],"kind":"other","data":[]})"), parse_error);
    EXPECT_THROW(parse_state(R"({"dims":[2],"kind":"mixed","data":[[[1,0],[0,1]],[[0,1],[1,0]]]})"), parse_error);
    EXPECT_THROW(parse_state(R"({"dims":[2],"kind":"mixed","data":[[[1,0]],[[0,0],[1,0]]]})"), parse_error);
    EXPECT_THROW(load_state("/nonexistent/state.json"), parse_error);
}

TEST(StateIo, FileRoundTrip) {
    const auto path = testing::TempDir() + "state_io_test.json";
    const auto rho = random_density(Dims{3}, 2, 2);
    {
        std::ofstream f(path);
        f << to_json(rho);
    }
    const auto back = std::get<DensityMatrix>(load_state(path));
    EXPECT_EQ(back.entries, rho.entries);
    std::remove(path.c_str());
}
