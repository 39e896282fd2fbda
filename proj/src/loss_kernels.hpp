#pragma once

#include <span>
#include <vector>

#include "dqmotion/losses.hpp"

namespace dqm::detail {

struct LossEval {
    double value = 0.0;
    std::vector<double> per_joint;
};

// Shared by the value-only entry points and the gradient check. grad, when
// non-empty, receives d(value)/d(pred) and must be zero-initialised.
LossEval evaluate_loss(LossKind loss, const FeatureLayout& layout, std::span<const double> pred,
                       std::span<const double> truth, RotationSpace space, bool sign_aligned,
                       std::span<double> grad);

}  // namespace dqm::detail
