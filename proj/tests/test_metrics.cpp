#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dqmotion/error.hpp"
#include "dqmotion/metrics.hpp"
#include "support/test_support.hpp"

using namespace dqm;
using namespace dqm::testing;

namespace {

PositionSequence random_positions(std::mt19937_64& rng, std::size_t frames, std::size_t joints) {
    PositionSequence s(frames, std::vector<Vec3>(joints));
    for (auto& f : s) {
        for (auto& p : f) p = random_vec(rng, 3.0);
    }
    return s;
}

std::vector<std::vector<double>> series_of(const PositionSequence& s) {
    std::vector<std::vector<double>> out(s.front().size() * 3, std::vector<double>(s.size()));
    for (std::size_t f = 0; f < s.size(); ++f) {
        for (std::size_t j = 0; j < s[f].size(); ++j) {
            for (int a = 0; a < 3; ++a) out[j * 3 + a][f] = s[f][j][a];
        }
    }
    return out;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::IoError;
}

}  // namespace

TEST(Euclidean, AnchorsAndSymmetry) {
    std::mt19937_64 rng(101);
    const PositionSequence a = random_positions(rng, 10, 5);
    EXPECT_EQ(metric_euclidean(a, a), 0.0);
    PositionSequence b = a;
    for (auto& f : b) f[2] = f[2] + Vec3{0, 0, 2};
    EXPECT_NEAR(metric_euclidean(a, b), 2.0 / 5.0, 1e-15);
    const PositionSequence c = random_positions(rng, 10, 5);
    EXPECT_EQ(metric_euclidean(a, c), metric_euclidean(c, a));
    PositionSequence shorter(a.begin(), a.end() - 1);
    EXPECT_EQ(code_of([&] { metric_euclidean(a, shorter); }), ErrorCode::LengthMismatch);
}

TEST(Euclidean, IgnoresRootTranslation) {
    std::mt19937_64 rng(102);
    for (int t = 0; t < 20; ++t) {
        const Skeleton sk = random_skeleton(rng, 2 + t % 15);
        const auto pred = random_motion(rng, sk, 6);
        const auto truth = random_motion(rng, sk, 6);
        const double base = metric_euclidean(joint_positions(sk, pred), joint_positions(sk, truth));
        auto moved = pred;
        for (auto& p : moved) p.root_translation = random_vec(rng, 100.0);
        EXPECT_NEAR(metric_euclidean(joint_positions(sk, moved), joint_positions(sk, truth)), base, 1e-12);
        const MetricReport r1 = metric_report(sk, pred, truth);
        const MetricReport r2 = metric_report(sk, moved, truth);
        EXPECT_NEAR(r1.npss, r2.npss, 1e-12);
        EXPECT_NEAR(r1.acceleration_pred, r2.acceleration_pred, 1e-12);
    }
}

TEST(Npss, IdenticalIsZero) {
    std::mt19937_64 rng(103);
    const PositionSequence a = random_positions(rng, 33, 4);
    EXPECT_EQ(metric_npss(a, a), 0.0);
}

TEST(Npss, MatchesBruteForceOracle) {
    std::mt19937_64 rng(104);
    for (std::size_t frames = 2; frames <= 64; frames += 3) {
        const PositionSequence a = random_positions(rng, frames, 3);
        const PositionSequence b = random_positions(rng, frames, 3);
        EXPECT_NEAR(metric_npss(a, b), oracle_npss(series_of(a), series_of(b)), 1e-9) << frames;
    }
}

TEST(Npss, DoubledFrequencySinusoid) {
    const std::size_t n = 64;
    std::vector<double> slow(n), fast(n);
    for (std::size_t t = 0; t < n; ++t) {
        slow[t] = std::sin(2 * std::numbers::pi * 3 * static_cast<double>(t) / n);
        fast[t] = std::sin(2 * std::numbers::pi * 6 * static_cast<double>(t) / n);
    }
    const double got = metric_npss_series({fast}, {slow});
    EXPECT_GT(got, 0.0);
    EXPECT_NEAR(got, oracle_npss({fast}, {slow}), 1e-9);
    // Half the mass sits at bins 3 and 61, the other half at 6 and 58: the
    // cumulative curves differ by 1/2 over bins 3..5 and 58..60.
    EXPECT_NEAR(got, 3.0, 1e-9);
}

TEST(Npss, CircularShiftIsInvisible) {
    const std::size_t n = 48;
    std::vector<double> x(n), shifted(n);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = std::sin(2 * std::numbers::pi * 2 * t / double(n)) + 0.3 * std::cos(2 * std::numbers::pi * 5 * t / double(n));
    }
    for (std::size_t t = 0; t < n; ++t) shifted[t] = x[(t + 7) % n];
    EXPECT_NEAR(metric_npss_series({shifted}, {x}), 0.0, 1e-9);
}

TEST(Npss, ZeroPowerAndErrors) {
    const std::vector<double> zero(8, 0.0), constant(8, 2.0);
    // A silent signal is treated as all mass at DC, like a constant one.
    EXPECT_EQ(metric_npss_series({zero}, {constant}), 0.0);
    EXPECT_EQ(code_of([&] { metric_npss_series({{1.0}}, {{1.0}}); }), ErrorCode::TooFewFrames);
    EXPECT_EQ(code_of([&] { metric_npss_series({zero}, {{1.0, 2.0}}); }), ErrorCode::LengthMismatch);
}

TEST(Npss, SerialEqualsParallel) {
    std::mt19937_64 rng(105);
    const PositionSequence a = random_positions(rng, 100, 20);
    const PositionSequence b = random_positions(rng, 100, 20);
    EXPECT_EQ(metric_npss(a, b, Exec::Serial), metric_npss(a, b, Exec::Parallel));
}

TEST(Acceleration, Anchors) {
    PositionSequence constant(10, std::vector<Vec3>(3, Vec3{1, 2, 3}));
    EXPECT_EQ(metric_acceleration(constant), 0.0);
    PositionSequence linear(10, std::vector<Vec3>(3));
    for (std::size_t t = 0; t < 10; ++t) {
        for (std::size_t j = 0; j < 3; ++j) linear[t][j] = Vec3{double(t) * 1.5, double(j), -2.0 * double(t)};
    }
    EXPECT_EQ(metric_acceleration(linear), 0.0);
    PositionSequence square(10, std::vector<Vec3>(1));
    for (std::size_t t = 0; t < 10; ++t) square[t][0] = Vec3{double(t * t), 0, 0};
    EXPECT_EQ(metric_acceleration(square), 2.0);
    PositionSequence two(2, std::vector<Vec3>(1));
    EXPECT_EQ(code_of([&] { metric_acceleration(two); }), ErrorCode::TooFewFrames);
}

TEST(Report, ComposesTheMetricsAndRoundTripsJson) {
    std::mt19937_64 rng(106);
    const PositionSequence a = random_positions(rng, 20, 6);
    const PositionSequence b = random_positions(rng, 20, 6);
    const MetricReport r = metric_report(a, b, 0.01);
    EXPECT_EQ(r.euclidean, metric_euclidean(a, b));
    EXPECT_EQ(r.npss, metric_npss(a, b));
    EXPECT_EQ(r.acceleration_pred, metric_acceleration(a));
    EXPECT_EQ(r.acceleration_truth, metric_acceleration(b));
    EXPECT_EQ(r.acceleration_error, std::abs(r.acceleration_pred - r.acceleration_truth));
    EXPECT_EQ(MetricReport::from_json(r.to_json()), r);
    const MetricReport same = metric_report(a, a);
    EXPECT_EQ(same.euclidean, 0.0);
    EXPECT_EQ(same.npss, 0.0);
    EXPECT_EQ(same.acceleration_error, 0.0);
    EXPECT_THROW(MetricReport::from_json("{\"npss\": 1}"), Error);
}

TEST(Windows, StartsAndParity) {
    std::mt19937_64 rng(107);
    const PositionSequence a = random_positions(rng, 50, 4);
    const PositionSequence b = random_positions(rng, 50, 4);
    const WindowedMetrics w = metric_windows(a, b, 10, 400, 7);
    EXPECT_EQ(w.starts, (std::vector<std::size_t>{0, 7, 14, 21, 28, 35}));
    const PositionSequence wa(a.begin() + 14, a.begin() + 24), wb(b.begin() + 14, b.begin() + 24);
    EXPECT_EQ(w.windows[2], metric_report(wa, wb));
    const WindowedMetrics limited = metric_windows(a, b, 10, 2, 7);
    EXPECT_EQ(limited.starts.size(), 2u);
    const WindowedMetrics full = metric_windows(a, b, 0, 400, 7);
    EXPECT_EQ(full.starts, std::vector<std::size_t>{0});
    EXPECT_EQ(full.mean, metric_report(a, b));
    EXPECT_EQ(code_of([&] { metric_windows(a, b, 60, 400, 7); }), ErrorCode::TooFewFrames);
}
