#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dqmotion/encoding.hpp"

namespace dqm {

// Every loss is a mean over joints per frame and a mean over frames per clip.

enum class RotationSpace { Local, Current };
enum class LossKind { Mse, Rotational, Positional, Offset, Regularization };

std::string_view to_string(LossKind kind);

struct LossWeights {
    double mse = 1.0;
    double quat = 1.0 / 3.0;
    double pos = 1.0 / 3.0;
    double offset = 1.0;
    double reg = 0.01;
};

// Throws NotApplicable if any weight is negative or not finite.
void validate(const LossWeights& weights);

struct LossComponent {
    double value = 0.0;
    std::vector<double> per_joint;
};

struct RotationalLoss {
    LossComponent aligned;  // 1 - |<q, q~>|
    LossComponent raw;      // 1 - <q, q~>
};

bool loss_applies(LossKind loss, ReprKind kind);

// Single-frame losses; pred and truth are full feature rows (width 3 + D J).
// ShapeMismatch on width mismatch, NotApplicable/NoPositions on the wrong kind.
LossComponent loss_mse(const FeatureLayout& layout, std::span<const double> pred, std::span<const double> truth);
RotationalLoss loss_rotational(const FeatureLayout& layout, std::span<const double> pred,
                               std::span<const double> truth, RotationSpace space = RotationSpace::Local);
LossComponent loss_positional(const FeatureLayout& layout, std::span<const double> pred,
                              std::span<const double> truth);
// Bone-offset violation of a dual quaternion row against the layout's skeleton
// offsets, averaged over non-root joints.
LossComponent loss_offset(const FeatureLayout& layout, std::span<const double> pred);
// Computed on raw, unnormalized blocks.
LossComponent loss_regularization(const FeatureLayout& layout, std::span<const double> pred);

// Loss value with its closed-form gradient with respect to pred. grad may be
// empty; otherwise it must have the row width. The rotational loss here is
// the sign-aligned one.
double loss_with_gradient(LossKind loss, const FeatureLayout& layout, std::span<const double> pred,
                          std::span<const double> truth, std::span<double> grad,
                          RotationSpace space = RotationSpace::Local);

struct GradCheckResult {
    // max_i |analytic_i - fd_i| / max(|analytic|_inf, |fd|_inf, 1e-8)
    double max_relative_deviation = 0.0;
    std::size_t worst_index = 0;
    // Set when one-sided or multi-scale finite differences disagree, e.g. at
    // an antipodal tie or a zero distance.
    bool non_differentiable = false;
};

inline constexpr std::array<double, 3> kGradCheckLadder = {1e-4, 1e-5, 1e-6};

// eps must lie in [1e-8, 1e-3].
GradCheckResult grad_check(LossKind loss, const FeatureLayout& layout, std::span<const double> point,
                           std::span<const double> truth, double eps, RotationSpace space = RotationSpace::Local);

struct LossReport {
    std::optional<LossComponent> mse;
    std::optional<LossComponent> rotational;      // aligned
    std::optional<LossComponent> rotational_raw;  // no sign alignment
    std::optional<LossComponent> positional;
    std::optional<LossComponent> offset;
    std::optional<LossComponent> regularization;
    double weighted_total = 0.0;
    LossWeights weights;
    RotationSpace space = RotationSpace::Local;
    bool standardized_inputs = false;  // whether mse saw standardized features
    ReprKind kind = ReprKind::DualQuat;
    std::size_t frames = 0;
    std::size_t joints = 0;

    std::string to_json() const;
    // One key=value pair per line.
    std::string to_text() const;
};

// Geometric losses always run on destandardized features. ShapeMismatch when
// kind, skeleton, width or frame count differ.
LossReport loss_total(const EncodedClip& pred, const EncodedClip& truth, const LossWeights& weights = {},
                      RotationSpace space = RotationSpace::Local, Exec exec = Exec::Parallel);

}  // namespace dqm
