// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "cli.hpp"
#include "dqmotion/container.hpp"
#include "dqmotion/encoding.hpp"
#include "dqmotion/error.hpp"
#include "dqmotion/losses.hpp"
#include "dqmotion/metrics.hpp"
#include "support/test_support.hpp"

using namespace dqm;
using namespace dqm::testing;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    fmt::print("{} [{}] {}: {}\n", ok ? "PASS" : "FAIL", id, title, detail);
    std::fflush(stdout);
    if (!ok) ++failures;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dqmotion");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void oracle_equivalence() {
    std::mt19937_64 rng(1001);
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int trials = 0;
    for (; trials < 1000; ++trials) {
        const std::size_t joints = 2 + static_cast<std::size_t>(trials) % 29;
        const Skeleton sk = random_skeleton(rng, joints);
        for (int p = 0; p < 3; ++p) {
            const LocalPose pose = random_pose(rng, sk);
            const CurrentPose cur = local_to_current(sk, pose);
            const auto fk = matrix_fk(sk, pose);
            for (std::size_t j = 0; j < sk.size(); ++j) {
                worst = std::max(worst, norm(dq_translation(cur.joints[j]) - fk[j].position));
            }
        }
    }
    const double elapsed = seconds_since(t0);
    report(1, "dual-quaternion FK equals matrix FK", worst < 1e-9 && elapsed < 30.0,
           fmt::format("{} skeletons x 3 poses, max deviation {:.3e}, {:.2f} s", trials, worst, elapsed));
}

void inverse_pair() {
    std::mt19937_64 rng(1002);
    double rot = 0.0, off = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const Skeleton sk = random_skeleton(rng, 2 + static_cast<std::size_t>(t) % 29);
        const LocalPose pose = random_pose(rng, sk);
        const RecoveredLocal back = current_to_local(sk, local_to_current(sk, pose));
        for (std::size_t j = 0; j < sk.size(); ++j) {
            rot = std::max(rot, quat_distance(back.pose.rotations[j], pose.rotations[j]));
            const Vec3 expected = j == 0 ? Vec3{0, 0, 0} : sk.joint(j).offset;
            off = std::max(off, norm(back.offsets[j] - expected));
        }
    }
    report(2, "current/local inverse pair", rot < 1e-9 && off < 1e-9,
           fmt::format("1000 trials, rotation {:.3e}, offset {:.3e}", rot, off));
}

void unitary_invariant() {
    std::mt19937_64 rng(1003);
    double residual = 0.0, idempotence = 0.0;
    int count = 0;
    while (count < 100000) {
        double v[8];
        for (double& x : v) x = uniform(rng, -5, 5);
        const DualQuaternion d = DualQuaternion::from_array(v);
        if (quat_norm(d.real) <= 0.1) continue;
        ++count;
        const DualQuaternion n = dq_normalize(d);
        const auto [a, b] = dq_unitary_residual(n);
        residual = std::max({residual, std::abs(a), std::abs(b)});
        const auto x = n.to_array();
        const auto y = dq_normalize(n).to_array();
        for (int i = 0; i < 8; ++i) idempotence = std::max(idempotence, std::abs(x[i] - y[i]));
    }
    report(3, "normalization yields unit dual quaternions", residual < 1e-12 && idempotence < 1e-12,
           fmt::format("{} vectors, residual {:.3e}, idempotence {:.3e}", count, residual, idempotence));
}

void antipodal() {
    std::mt19937_64 rng(1004);
    double min_dot = 1.0, moved = 0.0;
    std::size_t flips = 0;
    for (int s = 0; s < 50; ++s) {
        std::vector<DualQuaternion> series;
        Quaternion r = random_unit_quat(rng);
        Vec3 t = random_vec(rng, 5.0);
        const Quaternion step = quat_normalize({1.0, uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2), 0.1});
        for (int f = 0; f < 100; ++f) {
            DualQuaternion d = dq_from_rotation_translation(r, t);
            if (std::bernoulli_distribution(0.25)(rng)) {
                d = -d;
                ++flips;
            }
            series.push_back(d);
            r = r * step;
            t = t + random_vec(rng, 0.1);
        }
        const auto before = series;
        antipodal_correct(series);
        for (std::size_t f = 1; f < series.size(); ++f) min_dot = std::min(min_dot, dq_dot(series[f - 1], series[f]));
        for (std::size_t f = 0; f < series.size(); ++f) {
            for (int p = 0; p < 100; ++p) {
                const Vec3 pt = random_vec(rng, 10.0);
                moved = std::max(moved, norm(dq_transform_point(series[f], pt) - dq_transform_point(before[f], pt)));
            }
        }
    }
    report(4, "antipodal correction", min_dot >= 0.0 && moved < 1e-12,
           fmt::format("{} injected flips, min consecutive dot {:.4f}, max point change {:.3e}", flips, min_dot,
                       moved));
}

void full_round_trip() {
    struct Case {
        std::string file;
        std::optional<double> fps;
    };
    std::vector<Case> cases;
    for (const auto& name : fixture_names()) cases.push_back({name, std::nullopt});
    cases.push_back({"walk_120fps.bvh", 30.0});
    double quat = 0.0, pos = 0.0;
    bool cli_ok = true;
    for (const Case& c : cases) {
        MotionClip clip = bvh_read_file(data_path(c.file));
        if (c.fps) clip = bvh_subsample(clip, *c.fps);
        auto sk = std::make_shared<const Skeleton>(clip.skeleton);
        const auto original = clip_to_local(clip);
        const auto decoded = decode(read_container(write_container(encode(sk, original, ReprKind::DualQuat,
                                                                          clip.frame_time))));
        const MotionClip written = bvh_parse(bvh_write(local_to_clip(decoded, *sk, clip.frame_time)));
        const auto recovered = clip_to_local(written);
        for (std::size_t f = 0; f < original.size(); ++f) {
            const auto a = homogeneous_fk(*sk, original[f]);
            const auto b = homogeneous_fk(written.skeleton, recovered[f]);
            for (std::size_t j = 0; j < sk->size(); ++j) {
                quat = std::max(quat, quat_distance(original[f].rotations[j], recovered[f].rotations[j]));
                quat = std::max(quat, quat_distance(original[f].rotations[j], decoded[f].rotations[j]));
                pos = std::max(pos, (a[j] - b[j]).norm());
            }
        }
        std::vector<std::string> args = {"roundtrip", data_path(c.file)};
        if (c.fps) args.insert(args.end(), {"--fps", fmt::format("{}", *c.fps)});
        cli_ok = cli_ok && run_cli(args) == 0;
    }
    report(5, "BVH -> dq -> BVH round trip", quat < 1e-6 && pos < 1e-6 && cli_ok && cases.size() >= 5,
           fmt::format("{} fixtures (gimbal lock, 120->30 fps included), quaternion {:.3e}, position {:.3e}, "
                       "roundtrip exit {}",
                       cases.size(), quat, pos, cli_ok ? "0" : "nonzero"));
}

void loss_ground_truths() {
    std::mt19937_64 rng(1006);
    double reg = 0.0, off = 0.0, stretch = 0.0;
    for (const auto& name : fixture_names()) {
        const MotionClip clip = bvh_read_file(data_path(name));
        auto sk = std::make_shared<const Skeleton>(clip.skeleton);
        const EncodedClip enc = encode(sk, clip_to_local(clip), ReprKind::DualQuat, clip.frame_time);
        const FeatureLayout layout = FeatureLayout::make(*sk, ReprKind::DualQuat);
        for (std::size_t f = 0; f < enc.frame_count; ++f) {
            reg = std::max(reg, loss_regularization(layout, enc.frame(f)).value);
            off = std::max(off, loss_offset(layout, enc.frame(f)).value);
        }
    }
    for (int t = 0; t < 200; ++t) {
        auto sk = std::make_shared<const Skeleton>(random_skeleton(rng, 3 + static_cast<std::size_t>(t) % 25));
        const FeatureLayout layout = FeatureLayout::make(*sk, ReprKind::DualQuat);
        auto row = encode(sk, {random_pose(rng, *sk)}, ReprKind::DualQuat, 0.01).features;
        reg = std::max(reg, loss_regularization(layout, row).value);
        off = std::max(off, loss_offset(layout, row).value);
        const std::size_t leaf = layout.joints() - 1;
        const DualQuaternion parent = DualQuaternion::from_array(row.data() + layout.block(*layout.parent[leaf]));
        const Vec3 axis = quat_rotate(parent.real, (1.0 / norm(layout.offset[leaf])) * layout.offset[leaf]);
        const double delta = uniform(rng, 0.01, 3.0);
        const auto moved =
            (dq_from_rotation_translation({1, 0, 0, 0}, delta * axis) * DualQuaternion::from_array(row.data() + layout.block(leaf)))
                .to_array();
        std::copy(moved.begin(), moved.end(), row.begin() + static_cast<std::ptrdiff_t>(layout.block(leaf)));
        stretch = std::max(stretch, std::abs(loss_offset(layout, row).value - delta / double(layout.joints() - 1)));
    }

    JointSpec root{"root", std::nullopt, {0, 0, 0}, {Channel::Zrotation, Channel::Yrotation, Channel::Xrotation}, false};
    auto one = std::make_shared<const Skeleton>(std::vector<JointSpec>{root});
    const FeatureLayout layout = FeatureLayout::make(*one, ReprKind::DualQuat);
    double anchor = 0.0;
    bool in_range = true;
    for (int t = 0; t < 200; ++t) {
        LocalPose p = identity_pose(*one);
        p.rotations[0] = random_unit_quat(rng);
        const auto q = encode(one, {p}, ReprKind::DualQuat, 0.01).features;
        auto neg = q;
        for (std::size_t i = 3; i < neg.size(); ++i) neg[i] = -neg[i];
        LocalPose turned = p;
        turned.rotations[0] = p.rotations[0] * quat_from_axis_angle(Axis::Z, std::numbers::pi / 2);
        const auto r = encode(one, {turned}, ReprKind::DualQuat, 0.01).features;
        anchor = std::max(anchor, std::abs(loss_rotational(layout, q, q).aligned.value));
        anchor = std::max(anchor, std::abs(loss_rotational(layout, neg, q).raw.value - 2.0));
        anchor = std::max(anchor, std::abs(loss_rotational(layout, neg, q).aligned.value));
        anchor = std::max(anchor, std::abs(loss_rotational(layout, r, q).aligned.value - (1 - std::cos(std::numbers::pi / 4))));
        auto noise = q;
        for (std::size_t i = 3; i < noise.size(); ++i) noise[i] += uniform(rng, -1, 1);
        const RotationalLoss l = loss_rotational(layout, noise, q);
        in_range = in_range && l.raw.value >= 0.0 && l.raw.value <= 2.0 && l.aligned.value >= 0.0;
    }
    report(6, "loss ground truths", reg < 1e-24 && off < 1e-9 && stretch < 1e-9 && anchor < 1e-12 && in_range,
           fmt::format("reg {:.3e}, offset {:.3e}, stretch error {:.3e}, rotational anchors {:.3e}", reg, off,
                       stretch, anchor));
}

void gradient_checks() {
    std::mt19937_64 rng(1007);
    const std::array<LossKind, 5> losses = {LossKind::Mse, LossKind::Positional, LossKind::Offset,
                                            LossKind::Regularization, LossKind::Rotational};
    std::string detail;
    bool ok = true;
    for (LossKind loss : losses) {
        double worst = 0.0;
        int flagged = 0;
        for (int t = 0; t < 100; ++t) {
            auto sk = std::make_shared<const Skeleton>(random_skeleton(rng, 2 + static_cast<std::size_t>(t) % 8));
            const FeatureLayout layout = FeatureLayout::make(*sk, ReprKind::DualQuat);
            const auto truth = encode(sk, {random_pose(rng, *sk)}, ReprKind::DualQuat, 0.01).features;
            auto point = encode(sk, {random_pose(rng, *sk)}, ReprKind::DualQuat, 0.01).features;
            for (std::size_t i = 3; i < point.size(); ++i) point[i] += uniform(rng, -0.2, 0.2);
            const GradCheckResult r = grad_check(loss, layout, point, truth, 1e-6);
            worst = std::max(worst, r.max_relative_deviation);
            flagged += r.non_differentiable ? 1 : 0;
        }
        ok = ok && worst < 1e-5 && flagged == 0;
        detail += fmt::format("{} {:.2e}{} ", to_string(loss), worst, flagged ? fmt::format(" ({} flagged)", flagged) : "");
    }
    report(7, "analytic gradients match central differences", ok, detail + "(100 points each)");
}

void metric_anchors() {
    PositionSequence constant(12, std::vector<Vec3>(4, Vec3{1, -2, 3}));
    PositionSequence linear(12, std::vector<Vec3>(4)), square(12, std::vector<Vec3>(1));
    for (std::size_t t = 0; t < 12; ++t) {
        for (std::size_t j = 0; j < 4; ++j) linear[t][j] = Vec3{0.5 * double(t) + double(j), -double(t), 2.0};
        square[t][0] = Vec3{0, double(t * t), 0};
    }
    const bool accel = metric_acceleration(constant) == 0.0 && metric_acceleration(linear) == 0.0 &&
                       metric_acceleration(square) == 2.0;

    std::mt19937_64 rng(1008);
    double oracle = 0.0, self = 0.0;
    for (std::size_t frames = 2; frames <= 64; ++frames) {
        PositionSequence a(frames, std::vector<Vec3>(3)), b = a;
        for (std::size_t f = 0; f < frames; ++f) {
            for (std::size_t j = 0; j < 3; ++j) {
                a[f][j] = random_vec(rng, 2.0);
                b[f][j] = random_vec(rng, 2.0);
            }
        }
        std::vector<std::vector<double>> sa(9, std::vector<double>(frames)), sb = sa;
        for (std::size_t f = 0; f < frames; ++f) {
            for (std::size_t i = 0; i < 9; ++i) {
                sa[i][f] = a[f][i / 3][int(i % 3)];
                sb[i][f] = b[f][i / 3][int(i % 3)];
            }
        }
        oracle = std::max(oracle, std::abs(metric_npss(a, b) - oracle_npss(sa, sb)));
        self = std::max(self, metric_npss(a, a));
    }

    double invariance = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Skeleton sk = random_skeleton(rng, 2 + static_cast<std::size_t>(t) % 20);
        const auto pred = random_motion(rng, sk, 8);
        const auto truth = random_motion(rng, sk, 8);
        auto moved = pred;
        for (auto& p : moved) p.root_translation = random_vec(rng, 500.0);
        invariance = std::max(invariance, std::abs(metric_euclidean(joint_positions(sk, pred), joint_positions(sk, truth)) -
                                                   metric_euclidean(joint_positions(sk, moved), joint_positions(sk, truth))));
    }
    report(8, "metric anchors", accel && self == 0.0 && oracle < 1e-9 && invariance < 1e-12,
           fmt::format("acceleration anchors {}, NPSS(a,a) {}, NPSS vs O(F^2) oracle {:.3e} (F<=64), "
                       "root invariance {:.3e}",
                       accel ? "exact" : "wrong", self, oracle, invariance));
}

void feature_layout() {
    std::mt19937_64 rng(1009);
    bool widths = true;
    double round = 0.0;
    for (int t = 0; t < 100; ++t) {
        auto sk = std::make_shared<const Skeleton>(random_skeleton(rng, 2 + static_cast<std::size_t>(t) % 29));
        const auto poses = random_motion(rng, *sk, 5);
        const std::size_t joints = sk->encoded_joints().size();
        for (ReprKind kind : kAllReprKinds) {
            const EncodedClip clip = encode(sk, poses, kind, 0.01);
            widths = widths && clip.width() == 3 + repr_dimension(kind) * joints &&
                     clip.features.size() == clip.width() * 5;
            const EncodedClip back = destandardize(standardize(clip, fit_stats(clip)));
            for (std::size_t i = 0; i < clip.features.size(); ++i) {
                round = std::max(round, std::abs(back.features[i] - clip.features[i]) / (1.0 + std::abs(clip.features[i])));
            }
        }
    }
    const std::array<std::size_t, 6> dims = {3, 4, 6, 7, 8, 9};
    for (std::size_t i = 0; i < 6; ++i) widths = widths && repr_dimension(kAllReprKinds[i]) == dims[i];
    const LossWeights w;
    const bool weights = w.reg == 0.01 && w.pos == 1.0 / 3.0 && w.quat == 1.0 / 3.0;
    report(9, "feature layout and defaults", widths && round < 1e-12 && weights,
           fmt::format("widths {}, standardize round trip {:.3e}, default weights reg={} pos={:.6f} quat={:.6f}",
                       widths ? "3+D*J" : "wrong", round, w.reg, w.pos, w.quat));
}

void parser_robustness() {
    double drift = 0.0;
    for (const auto& name : fixture_names()) {
        const MotionClip a = bvh_read_file(data_path(name));
        const MotionClip b = bvh_parse(bvh_write(a));
        const MotionClip c = bvh_parse(bvh_write(b));
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            drift = std::max({drift, std::abs(a.values[i] - b.values[i]), std::abs(b.values[i] - c.values[i])});
        }
        if (!(a.skeleton == b.skeleton)) drift = INFINITY;
    }
    const fs::path dir = fs::temp_directory_path() / "dqmotion_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    struct Bad {
        const char* file;
        ErrorCode code;
    };
    const std::array<Bad, 4> bad = {Bad{"frames_zero.bvh", ErrorCode::SyntaxError},
                                    Bad{"missing_brace.bvh", ErrorCode::SyntaxError},
                                    Bad{"row_width.bvh", ErrorCode::ChannelMismatch},
                                    Bad{"bad_channel.bvh", ErrorCode::UnsupportedChannel}};
    bool malformed_ok = true;
    for (const Bad& b : bad) {
        const std::string path = data_path(std::string("malformed/") + b.file);
        try {
            bvh_read_file(path);
            malformed_ok = false;
        } catch (const Error& e) {
            malformed_ok = malformed_ok && e.code() == b.code && e.line().has_value();
        }
        const std::string out = (dir / "out.dqm").string();
        malformed_ok = malformed_ok && run_cli({"encode", path, "-o", out}) == 3 && fs::is_empty(dir);
    }
    fs::remove_all(dir);
    report(10, "parser robustness", drift <= 1e-5 && malformed_ok,
           fmt::format("{} fixtures, parse/write drift {:.3e}; {} malformed files line-anchored, exit 3, no output",
                       fixture_names().size(), drift, malformed_ok ? "all" : "not all"));
}

}  // namespace

int main() {
    const std::array<void (*)(), 10> criteria = {oracle_equivalence, inverse_pair,    unitary_invariant,
                                                  antipodal,          full_round_trip, loss_ground_truths,
                                                  gradient_checks,    metric_anchors,  feature_layout,
                                                  parser_robustness};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), "criterion raised", false, e.what());
        }
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
}
