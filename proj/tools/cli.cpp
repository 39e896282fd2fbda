#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dqmotion/bvh.hpp"
#include "dqmotion/container.hpp"
#include "dqmotion/encoding.hpp"
#include "dqmotion/error.hpp"
#include "dqmotion/kinematics.hpp"
#include "dqmotion/losses.hpp"
#include "dqmotion/metrics.hpp"

namespace dqm::cli {

namespace {

using nlohmann::json;

// Thrown for flag problems found after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::SyntaxError:
        case ErrorCode::ChannelMismatch:
        case ErrorCode::UnsupportedChannel:
        case ErrorCode::FormatError:
        case ErrorCode::IoError: return kIoOrFormat;
        case ErrorCode::BadRate:
        case ErrorCode::ShapeMismatch:
        case ErrorCode::LengthMismatch:
        case ErrorCode::NotApplicable:
        case ErrorCode::NoPositions:
        case ErrorCode::TooFewFrames: return kUsage;
        case ErrorCode::NotInvertible:
        case ErrorCode::NotUnit:
        case ErrorCode::DegenerateNorm: return kValidationFailure;
    }
    return kIoOrFormat;
}

void configure_logging() {
    static const bool once = [] {
        auto logger = spdlog::stderr_color_mt("dqmotion");
        spdlog::set_default_logger(logger);
        spdlog::set_level(spdlog::level::warn);
        if (const char* level = std::getenv("DQMOTION_LOG")) {
            spdlog::set_level(spdlog::level::from_str(level));
        }
        return true;
    }();
    (void)once;
}

std::string repr_check(const std::string& name) {
    return repr_from_name(name) ? std::string() : "unknown representation '" + name + "'";
}

ReprKind parse_repr(const std::string& name) { return *repr_from_name(name); }

MotionClip load_clip(const std::string& path, std::optional<double> fps) {
    spdlog::debug("reading {}", path);
    MotionClip clip = bvh_read_file(path);
    if (fps) clip = bvh_subsample(clip, *fps);
    return clip;
}

double max_abs(Quaternion q) { return std::max({std::abs(q.w), std::abs(q.x), std::abs(q.y), std::abs(q.z)}); }

std::string fmt_real(double v) { return fmt::format("{:.17g}", v); }

// ---------------------------------------------------------------------------

struct InspectArgs {
    std::string input;
    bool as_json = false;
};

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
    const MotionClip clip = bvh_read_file(a.input);
    const Skeleton& sk = clip.skeleton;
    const std::size_t joints = sk.encoded_joints().size();
    const std::size_t end_sites = sk.size() - joints;
    const double fps = clip.frame_time > 0.0 ? 1.0 / clip.frame_time : 0.0;
    if (a.as_json) {
        json j;
        j["schema_version"] = 1;
        j["joints"] = joints;
        j["end_sites"] = end_sites;
        j["frames"] = clip.frame_count;
        j["frame_time"] = clip.frame_time;
        j["fps"] = fps;
        j["channels"] = sk.channel_count();
        j["digest"] = fmt::format("{:016x}", sk.digest());
        json list = json::array();
        for (std::size_t i = 0; i < sk.size(); ++i) {
            const JointSpec& js = sk.joint(i);
            json channels = json::array();
            for (Channel c : js.channels) channels.push_back(std::string(to_string(c)));
            list.push_back({{"name", js.name},
                            {"parent", js.parent ? json(sk.joint(*js.parent).name) : json(nullptr)},
                            {"offset", {js.offset.x, js.offset.y, js.offset.z}},
                            {"channels", channels},
                            {"end_site", js.is_end_site}});
        }
        j["skeleton"] = std::move(list);
        out << j.dump(2) << '\n';
        return kOk;
    }
    fmt::print(out, "joints: {}, frames: {}, fps: {:g}\n", joints, clip.frame_count, fps);
    fmt::print(out, "frame_time: {:g}\nend_sites: {}\nchannels: {}\n", clip.frame_time, end_sites,
               sk.channel_count());
    for (std::size_t i = 0; i < sk.size(); ++i) {
        const JointSpec& js = sk.joint(i);
        std::vector<std::string_view> names;
        for (Channel c : js.channels) names.push_back(to_string(c));
        fmt::print(out, "  {}{} parent={} offset=({:g}, {:g}, {:g}) channels=[{}]\n", js.name,
                   js.is_end_site ? " (end site)" : "", js.parent ? sk.joint(*js.parent).name : "-", js.offset.x,
                   js.offset.y, js.offset.z, fmt::join(names, " "));
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct EncodeArgs {
    std::string input;
    std::string output;
    std::string repr = "dq";
    std::optional<double> fps;
    bool standardize = false;
};

double max_unit_residual(const EncodedClip& clip) {
    const FeatureLayout layout = FeatureLayout::make(*clip.skeleton, clip.kind);
    double worst = 0.0;
    for (std::size_t f = 0; f < clip.frame_count; ++f) {
        const auto row = clip.frame(f);
        for (std::size_t k = 0; k < layout.joints(); ++k) {
            const auto [a, b] = dq_unitary_residual(DualQuaternion::from_array(row.data() + layout.block(k)));
            worst = std::max({worst, std::abs(a), std::abs(b)});
        }
    }
    return worst;
}

int cmd_encode(const EncodeArgs& a, std::ostream& out, std::ostream& err) {
    const ReprKind kind = parse_repr(a.repr);
    const MotionClip clip = load_clip(a.input, a.fps);
    auto skeleton = std::make_shared<const Skeleton>(clip.skeleton);
    EncodedClip encoded = encode(skeleton, clip_to_local(clip), kind, clip.frame_time);
    fmt::print(out, "repr: {}\nwidth: {}\nframes: {}\n", to_string(kind), encoded.width(), encoded.frame_count);
    if (kind == ReprKind::DualQuat) {
        const double residual = max_unit_residual(encoded);
        fmt::print(out, "max_unit_residual: {}\n", fmt_real(residual));
        if (residual > kUnitTolerance) {
            fmt::print(err, "error: encoded blocks violate the unit condition ({})\n", fmt_real(residual));
            return kValidationFailure;
        }
    }
    if (a.standardize) {
        encoded = standardize(encoded, fit_stats(encoded));
        fmt::print(out, "standardized: true\n");
    }
    write_container_file(a.output, encoded);
    spdlog::info("wrote {}", a.output);
    return kOk;
}

// ---------------------------------------------------------------------------

struct DecodeArgs {
    std::string input;
    std::string output;
};

int cmd_decode(const DecodeArgs& a, std::ostream& out) {
    const EncodedClip clip = read_container_file(a.input);
    const auto poses = decode(clip);
    const MotionClip motion = local_to_clip(poses, *clip.skeleton, clip.frame_time);
    write_file_atomic(a.output, bvh_write(motion));
    fmt::print(out, "frames: {}\njoints: {}\n", motion.frame_count, clip.joint_count());
    return kOk;
}

// ---------------------------------------------------------------------------

struct RoundtripArgs {
    std::string input;
    std::string repr = "dq";
    double tol = 1e-6;
    std::optional<double> fps;
    bool as_json = false;
};

int cmd_roundtrip(const RoundtripArgs& a, std::ostream& out) {
    const ReprKind kind = parse_repr(a.repr);
    if (kind == ReprKind::Positions) throw UsageError("the positions representation cannot be decoded");
    const MotionClip clip = load_clip(a.input, a.fps);
    const Skeleton& sk = clip.skeleton;
    auto skeleton = std::make_shared<const Skeleton>(sk);
    const auto original = clip_to_local(clip);

    const EncodedClip encoded = read_container(write_container(encode(skeleton, original, kind, clip.frame_time)));
    const auto decoded = decode(encoded);
    const MotionClip written = bvh_parse(bvh_write(local_to_clip(decoded, sk, clip.frame_time)));
    const auto recovered = clip_to_local(written);

    double quat_dev = 0.0;
    double pos_dev = 0.0;
    double offset_dev = 0.0;
    for (std::size_t j = 0; j < sk.size(); ++j) {
        offset_dev = std::max(offset_dev, norm(sk.joint(j).offset - written.skeleton.joint(j).offset));
    }
    for (std::size_t f = 0; f < original.size(); ++f) {
        // Both the in-memory decode and the re-parsed BVH text are compared.
        for (const LocalPose* other : {&decoded[f], &recovered[f]}) {
            for (std::size_t j : sk.encoded_joints()) {
                const Quaternion p = original[f].rotations[j];
                const Quaternion q = other->rotations[j];
                quat_dev = std::max(quat_dev, std::min(max_abs(p - q), max_abs(p + q)));
            }
            const auto fk_a = matrix_fk(sk, original[f]);
            const auto fk_b = matrix_fk(sk, *other);
            for (std::size_t j = 0; j < fk_a.size(); ++j) {
                pos_dev = std::max(pos_dev, norm(fk_a[j].position - fk_b[j].position));
            }
            pos_dev = std::max(pos_dev, norm(original[f].root_translation - other->root_translation));
        }
    }
    if (kind == ReprKind::DualQuat) {
        const FeatureLayout layout = FeatureLayout::make(sk, kind);
        for (std::size_t f = 0; f < encoded.frame_count; ++f) {
            for (double v : loss_offset(layout, encoded.frame(f)).per_joint) offset_dev = std::max(offset_dev, v);
        }
    }
    const bool ok = quat_dev <= a.tol && pos_dev <= a.tol && offset_dev <= a.tol;
    if (a.as_json) {
        json j{{"schema_version", 1},
               {"repr", std::string(to_string(kind))},
               {"frames", clip.frame_count},
               {"joints", sk.encoded_joints().size()},
               {"max_quaternion_deviation", quat_dev},
               {"max_position_deviation", pos_dev},
               {"max_offset_deviation", offset_dev},
               {"tolerance", a.tol},
               {"ok", ok}};
        out << j.dump(2) << '\n';
    } else {
        fmt::print(out,
                   "repr: {}\nframes: {}\nmax_quaternion_deviation: {}\nmax_position_deviation: {}\n"
                   "max_offset_deviation: {}\ntolerance: {}\nstatus: {}\n",
                   to_string(kind), clip.frame_count, fmt_real(quat_dev), fmt_real(pos_dev), fmt_real(offset_dev),
                   fmt_real(a.tol), ok ? "ok" : "fail");
    }
    return ok ? kOk : kValidationFailure;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string input;
    bool as_json = false;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
    EncodedClip clip = read_container_file(a.input);
    if (!has_quaternion_blocks(clip.kind)) {
        throw Error(ErrorCode::NotApplicable,
                    "validate needs a dualquat, quaternions or quaternions_positions container, got " +
                        std::string(to_string(clip.kind)));
    }
    if (clip.standardized()) clip = destandardize(clip);
    const FeatureLayout layout = FeatureLayout::make(*clip.skeleton, clip.kind);
    const bool dq = clip.kind == ReprKind::DualQuat;
    const std::size_t dim = dq ? 8 : 4;

    struct Where {
        std::size_t frame = 0;
        std::size_t joint = 0;
    };
    double worst_residual = 0.0;
    Where residual_at;
    double min_dot = std::numeric_limits<double>::infinity();
    Where dot_at;
    std::optional<std::pair<Where, std::string>> first_violation;

    for (std::size_t f = 0; f < clip.frame_count; ++f) {
        const auto row = clip.frame(f);
        for (std::size_t k = 0; k < layout.joints(); ++k) {
            const double* b = row.data() + layout.block(k);
            double residual = 0.0;
            if (dq) {
                const auto [n, o] = dq_unitary_residual(DualQuaternion::from_array(b));
                residual = std::max(std::abs(n), std::abs(o));
            } else {
                const Quaternion q{b[0], b[1], b[2], b[3]};
                residual = std::abs(quat_dot(q, q) - 1.0);
            }
            if (residual > worst_residual) {
                worst_residual = residual;
                residual_at = {f, k};
            }
            if (residual > kUnitTolerance && !first_violation) first_violation = {{f, k}, "unit"};
            if (f == 0) continue;
            const double* prev = clip.frame(f - 1).data() + layout.block(k);
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += prev[i] * b[i];
            if (dot < min_dot) {
                min_dot = dot;
                dot_at = {f, k};
            }
            if (dot < 0.0 && !first_violation) first_violation = {{f, k}, "continuity"};
        }
    }
    const auto joint_name = [&](std::size_t k) { return clip.skeleton->joint(layout.joint[k]).name; };
    const bool has_dot = std::isfinite(min_dot);
    if (a.as_json) {
        json j{{"schema_version", 1},
               {"kind", std::string(to_string(clip.kind))},
               {"frames", clip.frame_count},
               {"joints", layout.joints()},
               {"max_unit_residual", worst_residual},
               {"max_unit_residual_at", {{"frame", residual_at.frame}, {"joint", joint_name(residual_at.joint)}}},
               {"min_continuity_dot", has_dot ? json(min_dot) : json(nullptr)},
               {"min_continuity_dot_at",
                has_dot ? json{{"frame", dot_at.frame}, {"joint", joint_name(dot_at.joint)}} : json(nullptr)},
               {"ok", !first_violation}};
        j["first_violation"] = first_violation ? json{{"frame", first_violation->first.frame},
                                                      {"joint", joint_name(first_violation->first.joint)},
                                                      {"check", first_violation->second}}
                                               : json(nullptr);
        out << j.dump(2) << '\n';
    } else {
        fmt::print(out, "kind: {}\nmax_unit_residual: {} (frame {}, joint {})\n", to_string(clip.kind),
                   fmt_real(worst_residual), residual_at.frame, joint_name(residual_at.joint));
        if (has_dot) {
            fmt::print(out, "min_continuity_dot: {} (frame {}, joint {})\n", fmt_real(min_dot), dot_at.frame,
                       joint_name(dot_at.joint));
        }
        if (first_violation) {
            fmt::print(out, "violation: {} at frame {}, joint {}\n", first_violation->second,
                       first_violation->first.frame, joint_name(first_violation->first.joint));
        }
        fmt::print(out, "status: {}\n", first_violation ? "fail" : "ok");
    }
    return first_violation ? kValidationFailure : kOk;
}

// ---------------------------------------------------------------------------

struct LossArgs {
    std::string pred;
    std::string truth;
    std::string weights;
    std::string space = "local";
    bool standardized_mse = false;
    bool as_text = false;
};

LossWeights parse_weights(const std::string& spec) {
    LossWeights w;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        const std::size_t comma = std::min(spec.find(',', pos), spec.size());
        const std::string item = spec.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("weight '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("weight '" + item + "' has no numeric value");
        }
        if (key == "mse") w.mse = value;
        else if (key == "quat") w.quat = value;
        else if (key == "pos") w.pos = value;
        else if (key == "offset") w.offset = value;
        else if (key == "reg") w.reg = value;
        else throw UsageError("unknown weight '" + key + "' (expected mse, quat, pos, offset, reg)");
    }
    try {
        validate(w);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return w;
}

int cmd_loss(const LossArgs& a, std::ostream& out) {
    const LossWeights weights = parse_weights(a.weights);
    const RotationSpace space = a.space == "current" ? RotationSpace::Current : RotationSpace::Local;
    EncodedClip pred = read_container_file(a.pred);
    EncodedClip truth = read_container_file(a.truth);
    if (pred.skeleton->digest() != truth.skeleton->digest()) {
        throw Error(ErrorCode::ShapeMismatch, fmt::format("skeleton digests differ ({:016x} vs {:016x})",
                                                          pred.skeleton->digest(), truth.skeleton->digest()));
    }
    if (!a.standardized_mse) {
        if (pred.standardized()) pred = destandardize(pred);
        if (truth.standardized()) truth = destandardize(truth);
    }
    const LossReport report = loss_total(pred, truth, weights, space);
    out << (a.as_text ? report.to_text() : report.to_json() + "\n");
    return kOk;
}

// ---------------------------------------------------------------------------

struct MetricsArgs {
    std::string pred;
    std::string truth;
    std::size_t horizon = 0;
    std::size_t seeds = 400;
    std::size_t stride = 7;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
    const MotionClip pred = bvh_read_file(a.pred);
    const MotionClip truth = bvh_read_file(a.truth);
    if (!(pred.skeleton == truth.skeleton)) throw Error(ErrorCode::ShapeMismatch, "skeletons differ");
    if (pred.frame_count != truth.frame_count) {
        throw Error(ErrorCode::LengthMismatch, fmt::format("frame counts differ ({} vs {})", pred.frame_count,
                                                           truth.frame_count));
    }
    const PositionSequence p = joint_positions(pred.skeleton, clip_to_local(pred));
    const PositionSequence t = joint_positions(truth.skeleton, clip_to_local(truth));
    const WindowedMetrics result = metric_windows(p, t, a.horizon, a.seeds, a.stride, truth.frame_time);
    out << result.to_json() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
    std::vector<std::string> inputs;
    std::string repr = "dq";
    std::optional<double> fps;
};

int cmd_stats(const StatsArgs& a, std::ostream& out) {
    const ReprKind kind = parse_repr(a.repr);
    std::vector<EncodedClip> clips(a.inputs.size());
    for (std::size_t i = 0; i < a.inputs.size(); ++i) {
        const MotionClip clip = load_clip(a.inputs[i], a.fps);
        clips[i] = encode(std::make_shared<const Skeleton>(clip.skeleton), clip_to_local(clip), kind,
                          clip.frame_time);
        if (i > 0 && !(*clips[i].skeleton == *clips[0].skeleton)) {
            throw Error(ErrorCode::ShapeMismatch, "skeleton of " + a.inputs[i] + " differs from " + a.inputs[0]);
        }
    }
    EncodedClip pooled = clips.front();
    for (std::size_t i = 1; i < clips.size(); ++i) {
        pooled.features.insert(pooled.features.end(), clips[i].features.begin(), clips[i].features.end());
        pooled.frame_count += clips[i].frame_count;
    }
    const NormalizationStats stats = fit_stats(pooled);
    json j{{"schema_version", 1},
           {"repr", std::string(to_string(kind))},
           {"files", a.inputs},
           {"frames", pooled.frame_count},
           {"width", pooled.width()},
           {"mean", stats.mean},
           {"std", stats.std}};
    out << j.dump(2) << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    configure_logging();
    CLI::App app{"Dual-quaternion motion encoding toolkit", "dqmotion"};
    app.require_subcommand(1);
    app.fallthrough(false);

    InspectArgs inspect;
    auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a BVH file");
    inspect_cmd->add_option("input", inspect.input, "BVH file")->required();
    inspect_cmd->add_flag("--json", inspect.as_json, "Emit JSON");

    EncodeArgs enc;
    auto* encode_cmd = app.add_subcommand("encode", "Encode a BVH file into a .dqm container");
    encode_cmd->add_option("input", enc.input, "BVH file")->required();
    encode_cmd->add_option("--repr", enc.repr, "dq, quat, pos, ortho6d, quat-pos or ortho6d-pos")
        ->check(repr_check);
    encode_cmd->add_option("--fps", enc.fps, "Subsample to this frame rate")->check(CLI::PositiveNumber);
    encode_cmd->add_flag("--standardize", enc.standardize, "Store per-column standardization");
    encode_cmd->add_option("-o,--output", enc.output, "Container path")->required();

    DecodeArgs dec;
    auto* decode_cmd = app.add_subcommand("decode", "Decode a .dqm container into BVH");
    decode_cmd->add_option("input", dec.input, "Container")->required();
    decode_cmd->add_option("-o,--output", dec.output, "BVH path")->required();

    RoundtripArgs rt;
    auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Check BVH -> encode -> decode -> BVH fidelity");
    roundtrip_cmd->add_option("input", rt.input, "BVH file")->required();
    roundtrip_cmd->add_option("--repr", rt.repr, "Representation")->check(repr_check);
    roundtrip_cmd->add_option("--tol", rt.tol, "Largest accepted deviation")->check(CLI::NonNegativeNumber);
    roundtrip_cmd->add_option("--fps", rt.fps, "Subsample to this frame rate")->check(CLI::PositiveNumber);
    roundtrip_cmd->add_flag("--json", rt.as_json, "Emit JSON");

    ValidateArgs val;
    auto* validate_cmd = app.add_subcommand("validate", "Check unit conditions and sign continuity of a container");
    validate_cmd->add_option("input", val.input, "Container")->required();
    validate_cmd->add_flag("--json", val.as_json, "Emit JSON");

    LossArgs loss;
    auto* loss_cmd = app.add_subcommand("loss", "Training losses between two containers");
    loss_cmd->add_option("pred", loss.pred, "Predicted container")->required();
    loss_cmd->add_option("truth", loss.truth, "Ground-truth container")->required();
    loss_cmd->add_option("--weights", loss.weights, "Comma-separated key=value weights");
    loss_cmd->add_option("--space", loss.space, "Rotation space of the rotational loss")
        ->check(CLI::IsMember({"local", "current"}));
    loss_cmd->add_flag("--standardized-mse", loss.standardized_mse,
                       "Evaluate the MSE on standardized features when both inputs carry stats");
    loss_cmd->add_flag("--text", loss.as_text, "Emit key=value lines instead of JSON");

    MetricsArgs met;
    auto* metrics_cmd = app.add_subcommand("metrics", "Evaluation metrics between two BVH files");
    metrics_cmd->add_option("pred", met.pred, "Predicted BVH")->required();
    metrics_cmd->add_option("truth", met.truth, "Ground-truth BVH")->required();
    metrics_cmd->add_option("--horizon", met.horizon, "Window length in frames, 0 for the full length");
    metrics_cmd->add_option("--seeds", met.seeds, "Number of windows")->check(CLI::PositiveNumber);
    metrics_cmd->add_option("--stride", met.stride, "Frames between window starts")->check(CLI::PositiveNumber);

    StatsArgs st;
    auto* stats_cmd = app.add_subcommand("stats", "Pooled standardization statistics over BVH files");
    stats_cmd->add_option("inputs", st.inputs, "BVH files")->required();
    stats_cmd->add_option("--repr", st.repr, "Representation")->check(repr_check);
    stats_cmd->add_option("--fps", st.fps, "Subsample to this frame rate")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*inspect_cmd) return cmd_inspect(inspect, out);
        if (*encode_cmd) return cmd_encode(enc, out, err);
        if (*decode_cmd) return cmd_decode(dec, out);
        if (*roundtrip_cmd) return cmd_roundtrip(rt, out);
        if (*validate_cmd) return cmd_validate(val, out);
        if (*loss_cmd) return cmd_loss(loss, out);
        if (*metrics_cmd) return cmd_metrics(met, out);
        if (*stats_cmd) return cmd_stats(st, out);
    } catch (const UsageError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsage;
    } catch (const Error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kIoOrFormat;
    }
    return kUsage;
}

}  // namespace dqm::cli
