#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "apfoe/mulcount.hpp"
#include "apfoe/qam.hpp"

using namespace apfoe;

namespace {

// Unnormalized square grid, odd levels up to +-(sqrt(M)-1).
std::vector<cplx> raw_grid(int m) {
    const int side = m == 16 ? 4 : 8;
    std::vector<cplx> pts;
    for (int i = 0; i < side; ++i)
        for (int q = 0; q < side; ++q) pts.emplace_back(2 * i - side + 1, 2 * q - side + 1);
    return pts;
}

} // namespace

TEST(Qam, SixteenQamFourthMomentUnnormalized) {
    cplx s4{}, p{};
    for (auto v : raw_grid(16)) {
        s4 += std::pow(v, 4);
        p += std::norm(v);
    }
    s4 /= 16.0;
    p /= 16.0;
    EXPECT_DOUBLE_EQ(p.real(), 10.0);
    EXPECT_NEAR(s4.real(), -68.0, 1e-12);

    const auto c = build_constellation(16);
    EXPECT_NEAR(c.fourth_moment.real() * 100.0, -68.0, 1e-10);
}

TEST(Qam, NormalizedFourthMoments) {
    EXPECT_NEAR(build_constellation(16).fourth_moment.real(), -0.68, 1e-12);
    EXPECT_NEAR(build_constellation(16).fourth_moment.imag(), 0.0, 1e-12);
    EXPECT_NEAR(build_constellation(64).fourth_moment.real(), -1092.0 / 1764.0, 1e-12);
}

TEST(Qam, ConstellationUnitPowerAndSize) {
    for (int m : {16, 64}) {
        const auto c = build_constellation(m);
        ASSERT_EQ(c.points.size(), static_cast<std::size_t>(m));
        double p = 0.0;
        for (auto v : c.points) p += std::norm(v);
        EXPECT_NEAR(p / m, 1.0, 1e-12);
    }
}

TEST(Qam, RejectsUnsupportedOrder) {
    EXPECT_THROW(build_constellation(32), std::invalid_argument);
    EXPECT_THROW(build_constellation(4), std::invalid_argument);
}

TEST(Qam, GenerateDeterministic) {
    const auto c = build_constellation(16);
    const auto a = generate_symbols(c, 4, 1, 1.0);
    const auto b = generate_symbols(c, 4, 1, 1.0);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(a.samples, generate_symbols(c, 4, 2, 1.0).samples);
}

TEST(Qam, GenerateMeanPower) {
    const auto s = generate_symbols(build_constellation(16), 100000, 7, 1.0);
    double p = 0.0;
    for (auto v : s.samples) p += std::norm(v);
    EXPECT_NEAR(p / 1e5, 1.0, 0.02);
}

TEST(Qam, GenerateMembership) {
    const auto c = build_constellation(64);
    const auto s = generate_symbols(c, 1000, 3, 1.0);
    std::set<int> used;
    for (auto v : s.samples) {
        const auto it = std::find(c.points.begin(), c.points.end(), v);
        ASSERT_NE(it, c.points.end());
        used.insert(static_cast<int>(it - c.points.begin()));
    }
    EXPECT_EQ(used.size(), 64u);
}

TEST(Qam, GenerateRejectsZeroCount) {
    EXPECT_THROW(generate_symbols(build_constellation(16), 0, 1, 1.0), std::invalid_argument);
}

TEST(Qam, FourthPowerBasics) {
    const CVec in{{1, 0}, {0, 1}, {0, 0}, {1, 1}};
    const auto out = fourth_power(in);
    EXPECT_EQ(out[0], cplx(1, 0));
    EXPECT_EQ(out[1], cplx(1, 0));
    EXPECT_EQ(out[2], cplx(0, 0));
    EXPECT_NEAR(std::abs(out[3] - cplx(-4, 0)), 0.0, 1e-15);
}

TEST(Qam, FourthPowerMeanApproachesMoment) {
    const auto s = generate_symbols(build_constellation(16), 100000, 11, 1.0);
    const auto x4 = fourth_power(s);
    cplx m{};
    for (auto v : x4.samples) m += v;
    m /= 1e5;
    EXPECT_NEAR(m.real(), -0.68, 0.02 * 0.68);
    EXPECT_NEAR(m.imag(), 0.0, 0.02);
}

TEST(Qam, FourthPowerCountsSixMulPerSample) {
    MulCountScope scope;
    fourth_power(CVec(100, cplx(0.3, 0.4)));
    EXPECT_EQ(scope.tally().fourth_power, 600u);
}
