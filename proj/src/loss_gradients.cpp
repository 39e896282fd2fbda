#include <algorithm>
#include <cmath>

#include "dqmotion/error.hpp"
#include "loss_kernels.hpp"

namespace dqm {

namespace {

Quaternion load4(const double* p) { return {p[0], p[1], p[2], p[3]}; }
DualQuaternion load8(const double* p) { return DualQuaternion::from_array(p); }
Vec3 load3(const double* p) { return {p[0], p[1], p[2]}; }

void add4(double* g, Quaternion q) {
    g[0] += q.w;
    g[1] += q.x;
    g[2] += q.y;
    g[3] += q.z;
}
void add3(double* g, Vec3 v) {
    g[0] += v.x;
    g[1] += v.y;
    g[2] += v.z;
}

// Vector part of 2 d r*, the translation of a unit dual quaternion.
Vec3 translation_of(const DualQuaternion& x) { return (2.0 * (x.dual * quat_conjugate(x.real))).vec(); }

// Adjoints of translation_of with respect to (real, dual).
std::pair<Quaternion, Quaternion> translation_vjp(const DualQuaternion& x, Vec3 g) {
    const Quaternion gq = Quaternion::pure(g);
    return {-2.0 * (gq * x.dual), 2.0 * (gq * x.real)};
}

// Adjoint of r -> r / |r|.
Quaternion normalize_vjp(Quaternion r, Quaternion g) {
    const double n = quat_norm(r);
    const Quaternion rh = (1.0 / n) * r;
    return (1.0 / n) * (g - quat_dot(rh, g) * rh);
}

// Adjoint of dq_normalize: real' = r/n, dual' = d/n - r <r,d>/n^3.
std::pair<Quaternion, Quaternion> dq_normalize_vjp(const DualQuaternion& in, Quaternion g_real, Quaternion g_dual) {
    const Quaternion& r = in.real;
    const Quaternion& d = in.dual;
    const double n = quat_norm(r);
    const double n3 = n * n * n;
    const double s = quat_dot(r, d);
    const double r_gd = quat_dot(r, g_dual);
    const double d_gd = quat_dot(d, g_dual);
    const Quaternion from_dual = (-d_gd / n3) * r - (s / n3) * g_dual - (r_gd / n3) * d +
                                 (3.0 * s * r_gd / (n3 * n * n)) * r;
    const Quaternion gr = normalize_vjp(r, g_real) + from_dual;
    const Quaternion gd = (1.0 / n) * g_dual - (r_gd / n3) * r;
    return {gr, gd};
}

void require_width(const FeatureLayout& layout, std::span<const double> a, std::span<const double> b) {
    if (a.size() != layout.width || (!b.empty() && b.size() != layout.width)) {
        throw Error(ErrorCode::ShapeMismatch, "frame width does not match layout width " +
                                                  std::to_string(layout.width));
    }
}

// ----------------------------------------------------------------------------

detail::LossEval mse(const FeatureLayout& layout, std::span<const double> pred, std::span<const double> truth,
                     std::span<double> grad) {
    const std::size_t joints = layout.joints();
    const double count = static_cast<double>(joints * layout.dimension);
    detail::LossEval out{0.0, std::vector<double>(joints, 0.0)};
    for (std::size_t k = 0; k < joints; ++k) {
        double sum = 0.0;
        for (std::size_t i = layout.block(k); i < layout.block(k) + layout.dimension; ++i) {
            const double d = pred[i] - truth[i];
            sum += d * d;
            if (!grad.empty()) grad[i] += 2.0 * d / count;
        }
        out.per_joint[k] = sum / static_cast<double>(layout.dimension);
        out.value += sum / count;
    }
    return out;
}

// Rotations compared by the rotational loss, for one row.
struct RotationForward {
    std::vector<Quaternion> raw;   // block quaternion (real part for dual quaternions)
    std::vector<Quaternion> unit;  // normalized
    std::vector<Quaternion> q;     // compared rotation in the requested space
};

RotationForward rotations(const FeatureLayout& layout, std::span<const double> row, RotationSpace space) {
    const std::size_t joints = layout.joints();
    RotationForward f{std::vector<Quaternion>(joints), std::vector<Quaternion>(joints),
                      std::vector<Quaternion>(joints)};
    for (std::size_t k = 0; k < joints; ++k) {
        f.raw[k] = load4(row.data() + layout.block(k));
        f.unit[k] = quat_normalize(f.raw[k]);
    }
    const bool dq = layout.kind == ReprKind::DualQuat;
    for (std::size_t k = 0; k < joints; ++k) {
        const auto parent = layout.parent[k];
        if (!parent) {
            f.q[k] = f.unit[k];
        } else if (dq) {
            // Dual quaternions hold current rotations; local = conj(parent) * child.
            f.q[k] = space == RotationSpace::Local ? quat_conjugate(f.unit[*parent]) * f.unit[k] : f.unit[k];
        } else {
            // Quaternion blocks hold local rotations; current = parent current * local.
            f.q[k] = space == RotationSpace::Current ? f.q[*parent] * f.unit[k] : f.unit[k];
        }
    }
    return f;
}

detail::LossEval rotational(const FeatureLayout& layout, std::span<const double> pred, std::span<const double> truth,
                            RotationSpace space, bool aligned, std::span<double> grad) {
    if (!has_quaternion_blocks(layout.kind)) {
        throw Error(ErrorCode::NotApplicable, "rotational loss needs quaternion or dual quaternion blocks");
    }
    const std::size_t joints = layout.joints();
    const RotationForward p = rotations(layout, pred, space);
    const RotationForward t = rotations(layout, truth, space);
    detail::LossEval out{0.0, std::vector<double>(joints, 0.0)};
    std::vector<Quaternion> g_q(joints, Quaternion{0, 0, 0, 0});
    for (std::size_t k = 0; k < joints; ++k) {
        const double d = quat_dot(t.q[k], p.q[k]);
        const double sign = (aligned && d < 0.0) ? -1.0 : 1.0;
        // Roundoff can push |d| a hair past 1.
        out.per_joint[k] = std::clamp(1.0 - sign * d, 0.0, 2.0);
        out.value += out.per_joint[k] / static_cast<double>(joints);
        g_q[k] = (-sign / static_cast<double>(joints)) * t.q[k];
    }
    if (grad.empty()) return out;

    const bool dq = layout.kind == ReprKind::DualQuat;
    std::vector<Quaternion> g_unit(joints, Quaternion{0, 0, 0, 0});
    if (dq && space == RotationSpace::Local) {
        for (std::size_t k = 0; k < joints; ++k) {
            const auto parent = layout.parent[k];
            if (!parent) {
                g_unit[k] = g_unit[k] + g_q[k];
                continue;
            }
            const Quaternion& a = p.unit[*parent];
            const Quaternion& b = p.unit[k];
            g_unit[*parent] = g_unit[*parent] + b * quat_conjugate(g_q[k]);
            g_unit[k] = g_unit[k] + a * g_q[k];
        }
    } else if (!dq && space == RotationSpace::Current) {
        std::vector<Quaternion> g_cur = g_q;
        for (std::size_t k = joints; k-- > 0;) {
            const auto parent = layout.parent[k];
            if (!parent) {
                g_unit[k] = g_unit[k] + g_cur[k];
                continue;
            }
            g_cur[*parent] = g_cur[*parent] + g_cur[k] * quat_conjugate(p.unit[k]);
            g_unit[k] = g_unit[k] + quat_conjugate(p.q[*parent]) * g_cur[k];
        }
    } else {
        g_unit = g_q;
    }
    for (std::size_t k = 0; k < joints; ++k) {
        add4(grad.data() + layout.block(k), normalize_vjp(p.raw[k], g_unit[k]));
    }
    return out;
}

Vec3 position_of(const FeatureLayout& layout, std::span<const double> row, std::size_t k) {
    const double* block = row.data() + layout.block(k);
    if (layout.kind == ReprKind::DualQuat) return translation_of(dq_normalize(load8(block)));
    return load3(block + layout.position_in_block());
}

detail::LossEval positional(const FeatureLayout& layout, std::span<const double> pred, std::span<const double> truth,
                            std::span<double> grad) {
    if (!has_positions(layout.kind)) throw Error(ErrorCode::NoPositions, "representation carries no positions");
    const std::size_t joints = layout.joints();
    detail::LossEval out{0.0, std::vector<double>(joints, 0.0)};
    for (std::size_t k = 0; k < joints; ++k) {
        const Vec3 diff = position_of(layout, pred, k) - position_of(layout, truth, k);
        const double dist = norm(diff);
        out.per_joint[k] = dist;
        out.value += dist / static_cast<double>(joints);
        if (grad.empty() || dist == 0.0) continue;
        const Vec3 g = (1.0 / (dist * static_cast<double>(joints))) * diff;
        double* gb = grad.data() + layout.block(k);
        if (layout.kind == ReprKind::DualQuat) {
            const DualQuaternion raw = load8(pred.data() + layout.block(k));
            const DualQuaternion unit = dq_normalize(raw);
            const auto [g_real_hat, g_dual_hat] = translation_vjp(unit, g);
            const auto [g_real, g_dual] = dq_normalize_vjp(raw, g_real_hat, g_dual_hat);
            add4(gb, g_real);
            add4(gb + 4, g_dual);
        } else {
            add3(gb + layout.position_in_block(), g);
        }
    }
    return out;
}

detail::LossEval offset(const FeatureLayout& layout, std::span<const double> pred, std::span<double> grad) {
    if (layout.kind != ReprKind::DualQuat) {
        throw Error(ErrorCode::NotApplicable, "offset loss needs the dual quaternion representation");
    }
    const std::size_t joints = layout.joints();
    detail::LossEval out{0.0, std::vector<double>(joints, 0.0)};
    if (joints < 2) return out;
    const double bones = static_cast<double>(joints - 1);
    std::vector<DualQuaternion> raw(joints);
    std::vector<DualQuaternion> unit(joints);
    for (std::size_t k = 0; k < joints; ++k) {
        raw[k] = load8(pred.data() + layout.block(k));
        unit[k] = dq_normalize(raw[k]);
    }
    std::vector<Quaternion> g_real(joints, Quaternion{0, 0, 0, 0});
    std::vector<Quaternion> g_dual(joints, Quaternion{0, 0, 0, 0});
    for (std::size_t k = 0; k < joints; ++k) {
        const auto parent = layout.parent[k];
        if (!parent) continue;
        const DualQuaternion a = dq_conjugate(unit[*parent]);
        const DualQuaternion& b = unit[k];
        const DualQuaternion local = a * b;
        const Vec3 diff = translation_of(local) - layout.offset[k];
        const double dist = norm(diff);
        out.per_joint[k] = dist;
        out.value += dist / bones;
        if (grad.empty() || dist == 0.0) continue;

        const auto [gx_r, gx_d] = translation_vjp(local, (1.0 / (dist * bones)) * diff);
        const Quaternion ga_r = gx_r * quat_conjugate(b.real) + gx_d * quat_conjugate(b.dual);
        const Quaternion ga_d = gx_d * quat_conjugate(b.real);
        g_real[k] = g_real[k] + quat_conjugate(a.real) * gx_r + quat_conjugate(a.dual) * gx_d;
        g_dual[k] = g_dual[k] + quat_conjugate(a.real) * gx_d;
        g_real[*parent] = g_real[*parent] + quat_conjugate(ga_r);
        g_dual[*parent] = g_dual[*parent] + quat_conjugate(ga_d);
    }
    if (!grad.empty()) {
        for (std::size_t k = 0; k < joints; ++k) {
            const auto [gr, gd] = dq_normalize_vjp(raw[k], g_real[k], g_dual[k]);
            add4(grad.data() + layout.block(k), gr);
            add4(grad.data() + layout.block(k) + 4, gd);
        }
    }
    return out;
}

detail::LossEval regularization(const FeatureLayout& layout, std::span<const double> pred, std::span<double> grad) {
    if (!has_quaternion_blocks(layout.kind)) {
        throw Error(ErrorCode::NotApplicable, "regularization needs quaternion or dual quaternion blocks");
    }
    const std::size_t joints = layout.joints();
    const double scale = 1.0 / static_cast<double>(joints);
    detail::LossEval out{0.0, std::vector<double>(joints, 0.0)};
    const bool dq = layout.kind == ReprKind::DualQuat;
    for (std::size_t k = 0; k < joints; ++k) {
        const double* block = pred.data() + layout.block(k);
        const Quaternion r = load4(block);
        const double a = quat_dot(r, r) - 1.0;
        const double b = dq ? quat_dot(r, load4(block + 4)) : 0.0;
        out.per_joint[k] = a * a + b * b;
        out.value += scale * out.per_joint[k];
        if (grad.empty()) continue;
        double* gb = grad.data() + layout.block(k);
        add4(gb, (4.0 * a * scale) * r);
        if (dq) {
            add4(gb, (2.0 * b * scale) * load4(block + 4));
            add4(gb + 4, (2.0 * b * scale) * r);
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(LossKind kind) {
    switch (kind) {
        case LossKind::Mse: return "mse";
        case LossKind::Rotational: return "quat";
        case LossKind::Positional: return "pos";
        case LossKind::Offset: return "offset";
        case LossKind::Regularization: return "reg";
    }
    return "?";
}

namespace detail {

LossEval evaluate_loss(LossKind loss, const FeatureLayout& layout, std::span<const double> pred,
                       std::span<const double> truth, RotationSpace space, bool sign_aligned,
                       std::span<double> grad) {
    const bool needs_truth = loss != LossKind::Offset && loss != LossKind::Regularization;
    require_width(layout, pred, needs_truth ? truth : std::span<const double>{});
    if (!grad.empty() && grad.size() != layout.width) {
        throw Error(ErrorCode::ShapeMismatch, "gradient buffer width does not match layout");
    }
    switch (loss) {
        case LossKind::Mse: return mse(layout, pred, truth, grad);
        case LossKind::Rotational: return rotational(layout, pred, truth, space, sign_aligned, grad);
        case LossKind::Positional: return positional(layout, pred, truth, grad);
        case LossKind::Offset: return offset(layout, pred, grad);
        case LossKind::Regularization: return regularization(layout, pred, grad);
    }
    return {};
}

}  // namespace detail

double loss_with_gradient(LossKind loss, const FeatureLayout& layout, std::span<const double> pred,
                          std::span<const double> truth, std::span<double> grad, RotationSpace space) {
    std::fill(grad.begin(), grad.end(), 0.0);
    return detail::evaluate_loss(loss, layout, pred, truth, space, true, grad).value;
}

GradCheckResult grad_check(LossKind loss, const FeatureLayout& layout, std::span<const double> point,
                           std::span<const double> truth, double eps, RotationSpace space) {
    if (!(eps >= 1e-8 && eps <= 1e-3)) throw Error(ErrorCode::NotApplicable, "eps must lie in [1e-8, 1e-3]");
    const std::size_t width = layout.width;
    std::vector<double> analytic(width, 0.0);
    const double base = loss_with_gradient(loss, layout, point, truth, analytic, space);

    std::vector<double> x(point.begin(), point.end());
    auto value_at = [&](std::size_t i, double h) {
        const double saved = x[i];
        x[i] = saved + h;
        const double v = detail::evaluate_loss(loss, layout, x, truth, space, true, {}).value;
        x[i] = saved;
        return v;
    };

    std::vector<double> fd(width);
    std::vector<double> ladder_spread(width, 0.0);
    std::vector<double> one_sided_gap(width, 0.0);
    for (std::size_t i = 0; i < width; ++i) {
        fd[i] = (value_at(i, eps) - value_at(i, -eps)) / (2.0 * eps);
        double lo = fd[i];
        double hi = fd[i];
        for (double h : kGradCheckLadder) {
            const double plus = value_at(i, h);
            const double minus = value_at(i, -h);
            const double central = (plus - minus) / (2.0 * h);
            lo = std::min(lo, central);
            hi = std::max(hi, central);
            if (h == kGradCheckLadder.back()) {
                one_sided_gap[i] = std::abs((plus - base) / h - (base - minus) / h);
            }
        }
        ladder_spread[i] = hi - lo;
    }

    double scale = 1e-8;
    for (std::size_t i = 0; i < width; ++i) scale = std::max({scale, std::abs(analytic[i]), std::abs(fd[i])});
    GradCheckResult result;
    for (std::size_t i = 0; i < width; ++i) {
        const double dev = std::abs(analytic[i] - fd[i]) / scale;
        if (dev > result.max_relative_deviation) {
            result.max_relative_deviation = dev;
            result.worst_index = i;
        }
        if (ladder_spread[i] > 1e-3 * scale || one_sided_gap[i] > 1e-3 * scale) result.non_differentiable = true;
    }
    return result;
}

}  // namespace dqm
