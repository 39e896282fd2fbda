#include <gtest/gtest.h>

#include <cmath>

#include "dqmotion/container.hpp"
#include "dqmotion/encoding.hpp"
#include "dqmotion/error.hpp"
#include "support/test_support.hpp"

#include <json.hpp>

using namespace dqm;
using namespace dqm::testing;

namespace {

struct Sample {
    std::shared_ptr<const Skeleton> skeleton;
    std::vector<LocalPose> poses;
};

Sample random_sample(std::mt19937_64& rng, std::size_t joints, std::size_t frames) {
    auto sk = std::make_shared<const Skeleton>(random_skeleton(rng, joints));
    return {sk, random_motion(rng, *sk, frames)};
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

TEST(Encoding, NamesAndDimensions) {
    const std::array<std::size_t, 6> dims = {3, 4, 6, 7, 8, 9};
    for (std::size_t i = 0; i < kAllReprKinds.size(); ++i) {
        const ReprKind kind = kAllReprKinds[i];
        EXPECT_EQ(repr_dimension(kind), dims[i]);
        EXPECT_EQ(repr_from_name(to_string(kind)), kind);
        EXPECT_EQ(repr_from_name(cli_name(kind)), kind);
    }
    EXPECT_EQ(cli_name(ReprKind::DualQuat), "dq");
    EXPECT_FALSE(repr_from_name("euler").has_value());
}

TEST(Encoding, WidthIsThreePlusBlockTimesJoints) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 30; ++t) {
        const Sample s = random_sample(rng, 2 + t, 3);
        const std::size_t joints = s.skeleton->encoded_joints().size();
        for (ReprKind kind : kAllReprKinds) {
            const EncodedClip clip = encode(s.skeleton, s.poses, kind, 0.01);
            EXPECT_EQ(clip.width(), 3 + repr_dimension(kind) * joints);
            EXPECT_EQ(clip.features.size(), 3 * clip.width());
        }
    }
}

TEST(Encoding, BlockContents) {
    std::mt19937_64 rng(42);
    const Sample s = random_sample(rng, 12, 1);
    const Skeleton& sk = *s.skeleton;
    const LocalPose& pose = s.poses[0];
    const auto fk = matrix_fk(sk, pose);
    const CurrentPose cur = local_to_current(sk, pose);
    for (ReprKind kind : kAllReprKinds) {
        const EncodedClip clip = encode(s.skeleton, s.poses, kind, 0.01);
        const FeatureLayout layout = FeatureLayout::make(sk, kind);
        const auto row = clip.frame(0);
        EXPECT_EQ(row[0], pose.root_translation.x);
        for (std::size_t k = 0; k < layout.joints(); ++k) {
            const std::size_t j = layout.joint[k];
            const double* b = row.data() + layout.block(k);
            if (has_positions(kind) && kind != ReprKind::DualQuat) {
                const double* p = b + layout.position_in_block();
                EXPECT_LT(norm(Vec3{p[0], p[1], p[2]} - fk[j].position), 1e-9);
            }
            if (kind == ReprKind::DualQuat) {
                const DualQuaternion d = DualQuaternion::from_array(b);
                EXPECT_LT(quat_distance(d.real, cur.joints[j].real), 1e-15);
                EXPECT_LT(norm(dq_translation(d) - fk[j].position), 1e-9);
            }
            if (kind == ReprKind::Quaternions || kind == ReprKind::QuaternionsPositions) {
                EXPECT_LT(quat_distance({b[0], b[1], b[2], b[3]}, pose.rotations[j]), 1e-15);
            }
            if (kind == ReprKind::Ortho6d || kind == ReprKind::Ortho6dPositions) {
                const Eigen::Matrix3d m = quat_matrix(pose.rotations[j]);
                for (int r = 0; r < 3; ++r) {
                    EXPECT_NEAR(b[r], m(r, 0), 1e-12);
                    EXPECT_NEAR(b[3 + r], m(r, 1), 1e-12);
                }
            }
        }
    }
}

TEST(Encoding, DecodeRecoversPosesForInvertibleKinds) {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 40; ++t) {
        const Sample s = random_sample(rng, 2 + t % 20, 8);
        for (ReprKind kind : kAllReprKinds) {
            if (kind == ReprKind::Positions) continue;
            const auto back = decode(encode(s.skeleton, s.poses, kind, 0.01));
            ASSERT_EQ(back.size(), s.poses.size());
            for (std::size_t f = 0; f < back.size(); ++f) {
                EXPECT_EQ(back[f].root_translation, s.poses[f].root_translation);
                for (std::size_t j = 0; j < s.skeleton->size(); ++j) {
                    ASSERT_LT(quat_distance(back[f].rotations[j], s.poses[f].rotations[j]), 1e-9) << to_string(kind);
                }
            }
        }
    }
}

TEST(Encoding, PositionsAreNotInvertible) {
    std::mt19937_64 rng(44);
    const Sample s = random_sample(rng, 4, 2);
    const EncodedClip clip = encode(s.skeleton, s.poses, ReprKind::Positions, 0.01);
    EXPECT_EQ(code_of([&] { decode(clip); }), ErrorCode::NotInvertible);
}

TEST(Encoding, DecodeNormalizesScaledDualQuaternions) {
    std::mt19937_64 rng(45);
    const Sample s = random_sample(rng, 6, 3);
    EncodedClip clip = encode(s.skeleton, s.poses, ReprKind::DualQuat, 0.01);
    for (std::size_t i = 3; i < clip.width(); ++i) clip.features[i] *= 1.7;
    const auto back = decode(clip);
    for (std::size_t j = 0; j < s.skeleton->size(); ++j) {
        EXPECT_LT(quat_distance(back[0].rotations[j], s.poses[0].rotations[j]), 1e-12);
    }
    for (std::size_t i = 3; i < 11; ++i) clip.features[i] = 0.0;
    EXPECT_EQ(code_of([&] { decode(clip); }), ErrorCode::DegenerateNorm);
}

TEST(Antipodal, FlipsAreRemovedWithoutChangingTransforms) {
    std::mt19937_64 rng(46);
    for (int t = 0; t < 50; ++t) {
        std::vector<DualQuaternion> series;
        Quaternion r = random_unit_quat(rng);
        Vec3 tr = random_vec(rng, 5.0);
        const Quaternion step = quat_normalize({1.0, uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1), 0.05});
        for (int f = 0; f < 60; ++f) {
            DualQuaternion d = dq_from_rotation_translation(r, tr);
            if (std::bernoulli_distribution(0.3)(rng)) d = -d;
            series.push_back(d);
            r = r * step;
            tr = tr + Vec3{0.1, 0, 0};
        }
        const auto before = series;
        antipodal_correct(series);
        for (std::size_t f = 1; f < series.size(); ++f) EXPECT_GE(dq_dot(series[f - 1], series[f]), 0.0);
        EXPECT_GE(series[0].real.w, 0.0);
        for (std::size_t f = 0; f < series.size(); ++f) {
            for (int p = 0; p < 100; ++p) {
                const Vec3 pt = random_vec(rng, 10.0);
                ASSERT_LT(norm(dq_transform_point(series[f], pt) - dq_transform_point(before[f], pt)), 1e-12);
            }
        }
    }
}

TEST(Antipodal, QuaternionSeries) {
    std::vector<Quaternion> q = {{-1, 0, 0, 0}, {-0.9, 0.1, 0, 0}, {0.8, -0.2, 0, 0}};
    antipodal_correct(q);
    EXPECT_GT(q[0].w, 0.0);
    EXPECT_GT(quat_dot(q[0], q[1]), 0.0);
    EXPECT_GT(quat_dot(q[1], q[2]), 0.0);
}

TEST(Antipodal, EncodedClipsAreContinuous) {
    const MotionClip clip = bvh_read_file(data_path("spinning_humanoid.bvh"));
    auto sk = std::make_shared<const Skeleton>(clip.skeleton);
    for (ReprKind kind : {ReprKind::DualQuat, ReprKind::Quaternions, ReprKind::QuaternionsPositions}) {
        const EncodedClip enc = encode(sk, clip_to_local(clip), kind, clip.frame_time);
        const FeatureLayout layout = FeatureLayout::make(*sk, kind);
        const std::size_t dim = kind == ReprKind::DualQuat ? 8 : 4;
        for (std::size_t f = 1; f < enc.frame_count; ++f) {
            for (std::size_t k = 0; k < layout.joints(); ++k) {
                double d = 0.0;
                for (std::size_t i = 0; i < dim; ++i) d += enc.frame(f - 1)[layout.block(k) + i] * enc.frame(f)[layout.block(k) + i];
                ASSERT_GE(d, 0.0);
            }
        }
    }
}

TEST(Ortho6d, GramSchmidtProducesRotation) {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 200; ++t) {
        std::array<double, 6> v;
        for (double& x : v) x = uniform(rng, -2, 2);
        const auto m = ortho6d_to_matrix(v);
        Eigen::Matrix3d r;
        r << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
        EXPECT_LT((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
        const Quaternion q = matrix_to_quat(m);
        EXPECT_LT((quat_matrix(q) - r).cwiseAbs().maxCoeff(), 1e-12);
        const auto six = quat_to_ortho6d(q);
        EXPECT_NEAR(six[0] * v[1] - six[1] * v[0], 0.0, 1e-9 * (1 + std::abs(v[0]) + std::abs(v[1])));
    }
    const std::array<double, 6> parallel = {1, 0, 0, 2, 0, 0};
    EXPECT_EQ(code_of([&] { ortho6d_to_matrix(parallel); }), ErrorCode::DegenerateNorm);
}

TEST(Standardization, StatsAndRoundTrip) {
    std::mt19937_64 rng(48);
    const Sample s = random_sample(rng, 9, 30);
    for (ReprKind kind : kAllReprKinds) {
        const EncodedClip clip = encode(s.skeleton, s.poses, kind, 0.01);
        const NormalizationStats stats = fit_stats(clip);
        const std::size_t w = clip.width();
        for (std::size_t c = 0; c < w; ++c) {
            double mean = 0.0;
            for (std::size_t f = 0; f < clip.frame_count; ++f) mean += clip.frame(f)[c];
            mean /= static_cast<double>(clip.frame_count);
            double var = 0.0;
            for (std::size_t f = 0; f < clip.frame_count; ++f) var += std::pow(clip.frame(f)[c] - mean, 2);
            var /= static_cast<double>(clip.frame_count);
            EXPECT_NEAR(stats.mean[c], mean, 1e-12);
            EXPECT_NEAR(stats.std[c], std::max(std::sqrt(var), kStdFloor), 1e-12);
        }
        const EncodedClip z = standardize(clip, stats);
        EXPECT_TRUE(z.standardized());
        const EncodedClip back = destandardize(z);
        EXPECT_FALSE(back.standardized());
        for (std::size_t i = 0; i < clip.features.size(); ++i) {
            ASSERT_NEAR(back.features[i], clip.features[i], 1e-12 * (1.0 + std::abs(clip.features[i])));
        }
        EXPECT_EQ(code_of([&] { standardize(z, stats); }), ErrorCode::NotApplicable);
        EXPECT_EQ(code_of([&] { destandardize(clip); }), ErrorCode::NotApplicable);
    }
}

TEST(Standardization, ConstantColumnsUseFloor) {
    std::mt19937_64 rng(49);
    auto sk = std::make_shared<const Skeleton>(random_skeleton(rng, 3));
    const std::vector<LocalPose> poses(4, identity_pose(*sk));
    const EncodedClip clip = encode(sk, poses, ReprKind::DualQuat, 0.01);
    const NormalizationStats stats = fit_stats(clip);
    for (double s : stats.std) EXPECT_EQ(s, kStdFloor);
    const EncodedClip z = standardize(clip, stats);
    for (double v : z.features) EXPECT_EQ(v, 0.0);
}

TEST(Standardization, Errors) {
    std::mt19937_64 rng(50);
    const Sample s = random_sample(rng, 3, 1);
    const EncodedClip one = encode(s.skeleton, s.poses, ReprKind::DualQuat, 0.01);
    EXPECT_EQ(code_of([&] { fit_stats(one); }), ErrorCode::TooFewFrames);
    NormalizationStats bad{{1.0}, {1.0}};
    EXPECT_EQ(code_of([&] { standardize(one, bad); }), ErrorCode::ShapeMismatch);
}

TEST(Encoding, DecodeDestandardizesFirst) {
    std::mt19937_64 rng(51);
    const Sample s = random_sample(rng, 7, 10);
    const EncodedClip clip = encode(s.skeleton, s.poses, ReprKind::DualQuat, 0.01);
    const auto a = decode(clip);
    const auto b = decode(standardize(clip, fit_stats(clip)));
    for (std::size_t f = 0; f < a.size(); ++f) {
        for (std::size_t j = 0; j < a[f].rotations.size(); ++j) {
            EXPECT_LT(quat_distance(a[f].rotations[j], b[f].rotations[j]), 1e-9);
        }
    }
}

TEST(Encoding, SerialAndParallelAreBitIdentical) {
    std::mt19937_64 rng(52);
    const Sample s = random_sample(rng, 20, 50);
    for (ReprKind kind : kAllReprKinds) {
        const EncodedClip a = encode(s.skeleton, s.poses, kind, 0.01, Exec::Serial);
        const EncodedClip b = encode(s.skeleton, s.poses, kind, 0.01, Exec::Parallel);
        EXPECT_EQ(a.features, b.features);
        const NormalizationStats sa = fit_stats(a, Exec::Serial);
        const NormalizationStats sb = fit_stats(a, Exec::Parallel);
        EXPECT_EQ(sa.mean, sb.mean);
        EXPECT_EQ(sa.std, sb.std);
        if (kind == ReprKind::Positions) continue;
        const auto da = decode(a, Exec::Serial);
        const auto db = decode(a, Exec::Parallel);
        for (std::size_t f = 0; f < da.size(); ++f) EXPECT_EQ(da[f].rotations, db[f].rotations);
    }
}

TEST(Container, RoundTripIsBitExact) {
    std::mt19937_64 rng(53);
    const Sample s = random_sample(rng, 8, 12);
    for (ReprKind kind : kAllReprKinds) {
        EncodedClip clip = encode(s.skeleton, s.poses, kind, 1.0 / 120.0);
        for (bool standardized : {false, true}) {
            if (standardized) clip = standardize(clip, fit_stats(clip));
            const std::string bytes = write_container(clip);
            EXPECT_EQ(bytes.substr(0, 4), "DQMC");
            const EncodedClip back = read_container(bytes);
            EXPECT_EQ(back.kind, clip.kind);
            EXPECT_EQ(back.frame_count, clip.frame_count);
            EXPECT_EQ(back.frame_time, clip.frame_time);
            EXPECT_EQ(back.features, clip.features);
            EXPECT_TRUE(*back.skeleton == *clip.skeleton);
            ASSERT_EQ(back.standardized(), standardized);
            if (standardized) {
                EXPECT_EQ(back.stats->mean, clip.stats->mean);
                EXPECT_EQ(back.stats->std, clip.stats->std);
            }
            EXPECT_EQ(write_container(back), bytes);
        }
    }
}

TEST(Container, StructuralProblemsAreFormatErrors) {
    std::mt19937_64 rng(54);
    const Sample s = random_sample(rng, 3, 2);
    const std::string bytes = write_container(encode(s.skeleton, s.poses, ReprKind::DualQuat, 0.01));
    std::string bad = bytes;
    bad[0] = 'X';
    EXPECT_EQ(code_of([&] { read_container(bad); }), ErrorCode::FormatError);
    bad = bytes;
    bad[4] = 9;
    EXPECT_EQ(code_of([&] { read_container(bad); }), ErrorCode::FormatError);
    bad = bytes;
    bad[8] = 17;
    EXPECT_EQ(code_of([&] { read_container(bad); }), ErrorCode::FormatError);
    EXPECT_EQ(code_of([&] { read_container(bytes.substr(0, bytes.size() - 1)); }), ErrorCode::FormatError);
    EXPECT_EQ(code_of([&] { read_container(bytes + "x"); }), ErrorCode::FormatError);
    EXPECT_EQ(code_of([&] { read_container(bytes.substr(0, 10)); }), ErrorCode::FormatError);
    bad = bytes;
    bad[40] ^= 1;  // digest no longer matches the hierarchy text
    EXPECT_EQ(code_of([&] { read_container(bad); }), ErrorCode::FormatError);
}

TEST(Container, JsonView) {
    std::mt19937_64 rng(55);
    const Sample s = random_sample(rng, 3, 2);
    const auto j = nlohmann::json::parse(container_json(encode(s.skeleton, s.poses, ReprKind::DualQuat, 0.01)));
    EXPECT_EQ(j.at("kind"), "dualquat");
    EXPECT_EQ(j.at("frames"), 2);
}
