#include "dqmotion/losses.hpp"

#include <cmath>

#include <fmt/format.h>

#include <json.hpp>

#include "dqmotion/error.hpp"
#include "loss_kernels.hpp"
#include "parallel.hpp"

namespace dqm {

namespace {

LossComponent as_component(detail::LossEval&& e) { return {e.value, std::move(e.per_joint)}; }

std::string_view space_name(RotationSpace space) { return space == RotationSpace::Local ? "local" : "current"; }

// Mean of per-frame components, accumulated in frame order.
LossComponent average(const std::vector<detail::LossEval>& frames, std::size_t joints) {
    LossComponent out{0.0, std::vector<double>(joints, 0.0)};
    if (frames.empty()) return out;
    const double n = static_cast<double>(frames.size());
    for (const auto& f : frames) {
        out.value += f.value;
        for (std::size_t k = 0; k < joints; ++k) out.per_joint[k] += f.per_joint[k];
    }
    out.value /= n;
    for (double& v : out.per_joint) v /= n;
    return out;
}

}  // namespace

void validate(const LossWeights& w) {
    for (double v : {w.mse, w.quat, w.pos, w.offset, w.reg}) {
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::NotApplicable, "loss weights must be finite and >= 0");
    }
}

bool loss_applies(LossKind loss, ReprKind kind) {
    switch (loss) {
        case LossKind::Mse: return true;
        case LossKind::Rotational:
        case LossKind::Regularization: return has_quaternion_blocks(kind);
        case LossKind::Positional: return has_positions(kind);
        case LossKind::Offset: return kind == ReprKind::DualQuat;
    }
    return false;
}

LossComponent loss_mse(const FeatureLayout& layout, std::span<const double> pred, std::span<const double> truth) {
    return as_component(detail::evaluate_loss(LossKind::Mse, layout, pred, truth, RotationSpace::Local, true, {}));
}

RotationalLoss loss_rotational(const FeatureLayout& layout, std::span<const double> pred,
                               std::span<const double> truth, RotationSpace space) {
    return {as_component(detail::evaluate_loss(LossKind::Rotational, layout, pred, truth, space, true, {})),
            as_component(detail::evaluate_loss(LossKind::Rotational, layout, pred, truth, space, false, {}))};
}

LossComponent loss_positional(const FeatureLayout& layout, std::span<const double> pred,
                              std::span<const double> truth) {
    return as_component(
        detail::evaluate_loss(LossKind::Positional, layout, pred, truth, RotationSpace::Local, true, {}));
}

LossComponent loss_offset(const FeatureLayout& layout, std::span<const double> pred) {
    return as_component(detail::evaluate_loss(LossKind::Offset, layout, pred, {}, RotationSpace::Local, true, {}));
}

LossComponent loss_regularization(const FeatureLayout& layout, std::span<const double> pred) {
    return as_component(
        detail::evaluate_loss(LossKind::Regularization, layout, pred, {}, RotationSpace::Local, true, {}));
}

LossReport loss_total(const EncodedClip& pred, const EncodedClip& truth, const LossWeights& weights,
                      RotationSpace space, Exec exec) {
    validate(weights);
    if (pred.kind != truth.kind) throw Error(ErrorCode::ShapeMismatch, "representation kinds differ");
    if (!pred.skeleton || !truth.skeleton || !(*pred.skeleton == *truth.skeleton)) {
        throw Error(ErrorCode::ShapeMismatch, "skeletons differ");
    }
    if (pred.frame_count != truth.frame_count) throw Error(ErrorCode::ShapeMismatch, "frame counts differ");
    if (pred.features.size() != pred.frame_count * pred.width() ||
        truth.features.size() != truth.frame_count * truth.width()) {
        throw Error(ErrorCode::ShapeMismatch, "feature storage does not match width");
    }
    if (pred.frame_count == 0) throw Error(ErrorCode::TooFewFrames, "clips hold no frames");

    const EncodedClip pred_raw = pred.standardized() ? destandardize(pred, exec) : pred;
    const EncodedClip truth_raw = truth.standardized() ? destandardize(truth, exec) : truth;
    const bool mse_standardized = pred.standardized() && truth.standardized();
    const EncodedClip& pred_mse = mse_standardized ? pred : pred_raw;
    const EncodedClip& truth_mse = mse_standardized ? truth : truth_raw;

    const FeatureLayout layout = FeatureLayout::make(*pred.skeleton, pred.kind);
    const std::size_t frames = pred.frame_count;

    constexpr std::array<LossKind, 5> kinds = {LossKind::Mse, LossKind::Rotational, LossKind::Positional,
                                               LossKind::Offset, LossKind::Regularization};
    // Slot 5 holds the rotational loss without sign alignment.
    std::array<std::vector<detail::LossEval>, 6> per_frame;
    for (auto& v : per_frame) v.resize(frames);

    detail::for_each_index(frames, exec, [&](std::size_t f) {
        for (std::size_t c = 0; c < kinds.size(); ++c) {
            const LossKind loss = kinds[c];
            if (!loss_applies(loss, pred.kind)) continue;
            const auto p = (loss == LossKind::Mse ? pred_mse : pred_raw).frame(f);
            const auto t = (loss == LossKind::Mse ? truth_mse : truth_raw).frame(f);
            per_frame[c][f] = detail::evaluate_loss(loss, layout, p, t, space, true, {});
        }
        if (loss_applies(LossKind::Rotational, pred.kind)) {
            per_frame[5][f] = detail::evaluate_loss(LossKind::Rotational, layout, pred_raw.frame(f),
                                                    truth_raw.frame(f), space, false, {});
        }
    });

    LossReport report;
    report.weights = weights;
    report.space = space;
    report.standardized_inputs = mse_standardized;
    report.kind = pred.kind;
    report.frames = frames;
    report.joints = layout.joints();
    const std::size_t joints = layout.joints();
    report.mse = average(per_frame[0], joints);
    report.weighted_total = weights.mse * report.mse->value;
    if (loss_applies(LossKind::Rotational, pred.kind)) {
        report.rotational = average(per_frame[1], joints);
        report.rotational_raw = average(per_frame[5], joints);
        report.weighted_total += weights.quat * report.rotational->value;
    }
    if (loss_applies(LossKind::Positional, pred.kind)) {
        report.positional = average(per_frame[2], joints);
        report.weighted_total += weights.pos * report.positional->value;
    }
    if (loss_applies(LossKind::Offset, pred.kind)) {
        report.offset = average(per_frame[3], joints);
        report.weighted_total += weights.offset * report.offset->value;
    }
    if (loss_applies(LossKind::Regularization, pred.kind)) {
        report.regularization = average(per_frame[4], joints);
        report.weighted_total += weights.reg * report.regularization->value;
    }
    return report;
}

std::string LossReport::to_json() const {
    using nlohmann::json;
    json j;
    j["schema_version"] = 1;
    j["kind"] = std::string(to_string(kind));
    j["frames"] = frames;
    j["joints"] = joints;
    j["space"] = std::string(space_name(space));
    j["reduction"] = "mean_over_joints_then_frames";
    j["standardized_inputs"] = standardized_inputs;
    j["weights"] = {{"mse", weights.mse},
                    {"quat", weights.quat},
                    {"pos", weights.pos},
                    {"offset", weights.offset},
                    {"reg", weights.reg}};
    json components = json::object();
    auto put = [&](const char* key, const std::optional<LossComponent>& c) {
        if (c) components[key] = {{"value", c->value}, {"per_joint", c->per_joint}};
    };
    put("mse", mse);
    put("quat", rotational);
    put("quat_raw", rotational_raw);
    put("pos", positional);
    put("offset", offset);
    put("reg", regularization);
    j["components"] = std::move(components);
    j["weighted_total"] = weighted_total;
    return j.dump(2);
}

std::string LossReport::to_text() const {
    std::string out;
    auto line = [&](std::string_view key, auto value) { out += fmt::format("{}={}\n", key, value); };
    line("kind", to_string(kind));
    line("frames", frames);
    line("joints", joints);
    line("space", space_name(space));
    line("standardized_inputs", standardized_inputs ? "true" : "false");
    line("weight.mse", weights.mse);
    line("weight.quat", weights.quat);
    line("weight.pos", weights.pos);
    line("weight.offset", weights.offset);
    line("weight.reg", weights.reg);
    auto put = [&](std::string_view key, const std::optional<LossComponent>& c) {
        if (!c) return;
        line(key, c->value);
        out += fmt::format("{}.per_joint={}\n", key, fmt::join(c->per_joint, ","));
    };
    put("mse", mse);
    put("quat", rotational);
    put("quat_raw", rotational_raw);
    put("pos", positional);
    put("offset", offset);
    put("reg", regularization);
    line("weighted_total", weighted_total);
    return out;
}

}  // namespace dqm
