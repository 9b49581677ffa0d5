#include <gtest/gtest.h>

#include <cmath>

#include "citerank/doublerank.hpp"
#include "citerank/error.hpp"
#include "support.hpp"

using namespace citerank;
using testing_support::records;

TEST(DoubleRankSeries, GlobalIsIdentity) {
    const auto corpus = rank_global(records({50, 40, 30, 20, 10, 0}));
    const auto s = double_rank_series(corpus, kGlobal);
    ASSERT_EQ(s.points.size(), 6u);
    for (const auto& p : s.points) EXPECT_EQ(p.global_rank, p.local_rank);
}

TEST(DoubleRankSeries, HandEnumeratedPoints) {
    const auto corpus = rank_global(records({9, 7, 5, 3, 1}, {"X", "", "", "X", ""}));
    const auto s = double_rank_series(corpus, "X");
    ASSERT_EQ(s.points.size(), 2u);
    EXPECT_EQ(s.points[0].global_rank, 1.0);
    EXPECT_EQ(s.points[0].local_rank, 1.0);
    EXPECT_EQ(s.points[1].global_rank, 4.0);
    EXPECT_EQ(s.points[1].local_rank, 2.0);
}

TEST(DoubleRankSeries, LastLocalRankIsP) {
    const auto corpus = rank_global(records({9, 9, 5, 5, 5, 1, 0}, {"X", "X", "", "X", "X", "", "X"}));
    const auto s = double_rank_series(corpus, "X");
    EXPECT_EQ(s.points.back().local_rank, 5.0);
    // tied group papers share the mean global rank
    EXPECT_EQ(s.points[0].global_rank, 1.5);
    EXPECT_EQ(s.points[1].global_rank, 1.5);
    EXPECT_EQ(s.points[2].global_rank, 4.0);
}

TEST(DoubleRankSeries, SinglePaperIsInsufficient) {
    const auto corpus = rank_global(records({3, 2}, {"X", ""}));
    EXPECT_THROW(double_rank_series(corpus, "X"), InsufficientDataError);
}

TEST(PowerLawReference, OneDecadeOneOrder) {
    const double G = 54321;
    const auto ref = power_law_reference({1.0, 1000}, {0.1, 100}, G);
    EXPECT_NEAR(ref.alpha, 1.0, 1e-12);
    for (double g : {1.0, 77.0, 5432.1, G}) EXPECT_NEAR(expected_local_rank(ref, g), 1000.0 * g / G, 1e-9 * g);
}

TEST(PowerLawReference, GermanySolarCells) {
    const double P = 1834, R1 = 0.077, G = 61202;
    const auto ref = power_law_reference({1.0, P}, {0.1, R1 * P}, G);
    EXPECT_NEAR(ref.alpha, -std::log10(R1), 1e-12);
    EXPECT_NEAR(ref.alpha, 1.1135, 5e-5);
    // anchor equations evaluated directly
    EXPECT_NEAR(ref.coeff * std::pow(G, ref.alpha), P, 1e-9 * P);
    EXPECT_NEAR(ref.coeff * std::pow(0.1 * G, ref.alpha), R1 * P, 1e-9 * P);
    // ideal-model P_top1%: two applications of R = 0.1^alpha
    EXPECT_NEAR(expected_local_rank(ref, 0.01 * G), P * R1 * R1, 1e-9 * P);
    EXPECT_NEAR(P * R1 * R1, 10.87, 0.01);
    EXPECT_NEAR(extrapolate_breakthrough(ref, 0.0001), P * std::pow(R1, 4), 1e-12);
    EXPECT_NEAR(extrapolate_breakthrough(ref, 0.0001), 0.064, 0.001);
}

TEST(PowerLawReference, GlobalAnchorsGiveIdentity) {
    const double G = 1e5;
    const auto ref = power_law_reference({1.0, G}, {0.1, 0.1 * G}, G);
    EXPECT_NEAR(ref.alpha, 1.0, 1e-12);
    EXPECT_NEAR(ref.coeff, 1.0, 1e-12);
    EXPECT_NEAR(expected_local_rank(ref, 42), 42.0, 1e-9);
    EXPECT_NEAR(extrapolate_breakthrough(ref, 0.0001), 1e-4 * G, 1e-9);
}

TEST(PowerLawReference, AnchorPassThroughTop10Top1) {
    const auto ref = power_law_reference({0.1, 80}, {0.01, 5}, 20000);
    EXPECT_NEAR(expected_local_rank(ref, 2000), 80.0, 80e-9);
    EXPECT_NEAR(expected_local_rank(ref, 200), 5.0, 5e-9);
    EXPECT_NEAR(expected_global_rank(ref, 5.0), 200.0, 200e-9);
}

TEST(PowerLawReference, InvalidAnchors) {
    EXPECT_THROW(power_law_reference({1.0, 0}, {0.1, 10}, 100), DomainError);
    EXPECT_THROW(power_law_reference({1.0, 100}, {0.1, -1}, 100), DomainError);
    EXPECT_THROW(power_law_reference({0.1, 100}, {0.1, 10}, 100), DomainError);
    EXPECT_THROW(power_law_reference({0.1, 100}, {1.0, 10}, 100), DomainError);
    EXPECT_THROW(power_law_reference({1.0, 10}, {0.1, 100}, 100), DomainError);
}

TEST(ExpectedLocalRank, OutOfRange) {
    const auto ref = power_law_reference({1.0, 100}, {0.1, 10}, 1000);
    EXPECT_THROW(expected_local_rank(ref, 0.5), DomainError);
    EXPECT_THROW(expected_local_rank(ref, 1001), DomainError);
    EXPECT_NEAR(expected_local_rank(ref, 100), 10.0, 1e-9);
}

TEST(ExtrapolateBreakthrough, LinearCase) {
    const auto ref = power_law_reference({1.0, 1000}, {0.1, 100}, 1e6);
    EXPECT_NEAR(ref.coeff, 1e-3, 1e-15);
    EXPECT_NEAR(extrapolate_breakthrough(ref, 0.0002), 0.2, 1e-12);
    EXPECT_THROW(extrapolate_breakthrough(ref, 0.1), DomainError);
    EXPECT_THROW(extrapolate_breakthrough(ref, 0.0), DomainError);
}

TEST(RatioEqualityGap, Values) {
    const auto zero = ratio_equality_gap({0.1, 0.1, 0.1});
    EXPECT_EQ(zero.gap_12, 0.0);
    EXPECT_EQ(zero.gap_13, 0.0);
    // Japan, immunity
    EXPECT_NEAR(ratio_equality_gap({0.057, 0.06, 0.106}).gap_13, -0.86, 0.005);
    // Harvard, physical sciences and engineering
    const auto harvard = ratio_equality_gap({0.254, 0.221, 0.170});
    EXPECT_NEAR(harvard.gap_13, 0.33, 0.005);
    EXPECT_NEAR(harvard.gap_12, (0.254 - 0.221) / 0.254, 1e-12);
    EXPECT_THROW(ratio_equality_gap({0.021, 0.03, std::nullopt}), InsufficientDataError);
}

TEST(AnchorPairText, RoundTrip) {
    EXPECT_EQ(parse_anchor_pair("P:top10"), AnchorPair::all_and_top10);
    EXPECT_EQ(parse_anchor_pair("top10:top1"), AnchorPair::top10_and_top1);
    EXPECT_EQ(to_string(AnchorPair::top10_and_top1), "top10:top1");
    EXPECT_THROW(parse_anchor_pair("P:top1"), DomainError);
}

namespace {

DoubleRankSeries on_curve(double stretch) {
    // l = g / 100 on the reference; stretch scales the actual global ranks
    DoubleRankSeries s{"X", {}};
    for (int l = 1; l <= 1000; ++l) s.points.push_back({std::min(1e5, 100.0 * l * stretch), static_cast<double>(l)});
    return s;
}

} // namespace

TEST(UpperTailDeviation, ExactCurveConforms) {
    const auto ref = power_law_reference({1.0, 1000}, {0.1, 100}, 1e5);
    const auto report = upper_tail_deviation(on_curve(1.0), ref);
    EXPECT_EQ(report.points, 20u);
    EXPECT_NEAR(report.mean_log_residual, 0.0, 1e-12);
    EXPECT_NEAR(report.max_abs_log_residual, 0.0, 1e-12);
    EXPECT_EQ(report.verdict, Verdict::conforming);
}

TEST(UpperTailDeviation, SignFollowsGlobalRankShift) {
    const auto ref = power_law_reference({1.0, 1000}, {0.1, 100}, 1e5);
    const auto higher = upper_tail_deviation(on_curve(0.5), ref);
    EXPECT_NEAR(higher.mean_log_residual, std::log(0.5), 1e-12);
    EXPECT_EQ(higher.verdict, Verdict::undervalued);
    const auto lower = upper_tail_deviation(on_curve(1.5), ref);
    EXPECT_NEAR(lower.mean_log_residual, std::log(1.5), 1e-12);
    EXPECT_EQ(lower.verdict, Verdict::overvalued);
    // within tolerance either way
    EXPECT_EQ(upper_tail_deviation(on_curve(1.05), ref).verdict, Verdict::conforming);
    EXPECT_EQ(upper_tail_deviation(on_curve(1.5), ref, 0.02, 0.5).verdict, Verdict::conforming);
}

TEST(UpperTailDeviation, WindowAndPointCount) {
    const auto ref = power_law_reference({1.0, 1000}, {0.1, 100}, 1e5);
    EXPECT_THROW(upper_tail_deviation(on_curve(1.0), ref, 0.2), DomainError);
    EXPECT_THROW(upper_tail_deviation(on_curve(1.0), ref, 0.0), DomainError);
    EXPECT_THROW(upper_tail_deviation(on_curve(1.0), ref, 0.002), InsufficientDataError);
    EXPECT_EQ(upper_tail_deviation(on_curve(1.0), ref, 0.003).points, 3u);
}
