#include "dqmotion/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dqmotion/error.hpp"

namespace dqm {

namespace {

// Pole test on the cosine of the middle angle. The third angle is always solved
// from the residual rotation, so anything above this bound extracts exactly.
constexpr double kGimbalCosine = 1e-12;

// Entry (r, c) of the rotation matrix induced by unit q.
double rotation_entry(Quaternion q, int r, int c) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    switch (r * 3 + c) {
        case 0: return 1.0 - 2.0 * (y * y + z * z);
        case 1: return 2.0 * (x * y - w * z);
        case 2: return 2.0 * (x * z + w * y);
        case 3: return 2.0 * (x * y + w * z);
        case 4: return 1.0 - 2.0 * (x * x + z * z);
        case 5: return 2.0 * (y * z - w * x);
        case 6: return 2.0 * (x * z - w * y);
        case 7: return 2.0 * (y * z + w * x);
        default: return 1.0 - 2.0 * (x * x + y * y);
    }
}

void set_about(EulerAngles& e, Axis a, double v) {
    switch (a) {
        case Axis::X: e.alpha = v; break;
        case Axis::Y: e.beta = v; break;
        case Axis::Z: e.gamma = v; break;
    }
}

}  // namespace

Quaternion quat_normalize(Quaternion q) {
    const double n = quat_norm(q);
    if (!(n > 1e-12)) throw Error(ErrorCode::DegenerateNorm, "quaternion norm is at or below 1e-12");
    return (1.0 / n) * q;
}

Vec3 quat_rotate(Quaternion q, Vec3 v) {
    return (q * Quaternion::pure(v) * quat_conjugate(q)).vec();
}

Quaternion quat_canonical(Quaternion q) {
    for (double c : q.to_array()) {
        if (c > 0.0) return q;
        if (c < 0.0) return -q;
    }
    return q;
}

EulerOrder euler_order_from_axes(Axis first, Axis second, Axis third) {
    for (EulerOrder o : {EulerOrder::XYZ, EulerOrder::XZY, EulerOrder::YXZ, EulerOrder::YZX,
                         EulerOrder::ZXY, EulerOrder::ZYX}) {
        const auto a = axes(o);
        if (a[0] == first && a[1] == second && a[2] == third) return o;
    }
    throw Error(ErrorCode::UnsupportedChannel, "rotation axes must be a permutation of X, Y, Z");
}

std::string_view to_string(EulerOrder order) {
    switch (order) {
        case EulerOrder::XYZ: return "XYZ";
        case EulerOrder::XZY: return "XZY";
        case EulerOrder::YXZ: return "YXZ";
        case EulerOrder::YZX: return "YZX";
        case EulerOrder::ZXY: return "ZXY";
        case EulerOrder::ZYX: return "ZYX";
    }
    return "?";
}

Quaternion quat_from_axis_angle(Axis axis, double angle) {
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    switch (axis) {
        case Axis::X: return {c, s, 0.0, 0.0};
        case Axis::Y: return {c, 0.0, s, 0.0};
        case Axis::Z: return {c, 0.0, 0.0, s};
    }
    return Quaternion::identity();
}

Quaternion quat_from_euler(const EulerAngles& e) {
    const auto a = axes(e.order);
    return quat_from_axis_angle(a[0], e.about(a[0])) * quat_from_axis_angle(a[1], e.about(a[1])) *
           quat_from_axis_angle(a[2], e.about(a[2]));
}

// For q = q_i(t1) q_j(t2) q_k(t3) with parity p (+1 for cyclic i->j->k):
//   t2 = atan2(p R[i][k], hypot(R[j][k], R[k][k])),  t1 = atan2(-p R[j][k], R[k][k]).
// t3 comes from q_j(t2)* q_i(t1)* q, which is a pure rotation about k. Solving it
// this way absorbs the error in t1 when the middle angle is close to +-pi/2.
EulerAngles quat_to_euler(Quaternion q, EulerOrder order) {
    q = quat_normalize(q);
    const auto a = axes(order);
    const int i = static_cast<int>(a[0]);
    const int j = static_cast<int>(a[1]);
    const int k = static_cast<int>(a[2]);
    const double p = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;

    const double s = std::clamp(p * rotation_entry(q, i, k), -1.0, 1.0);
    const double c = std::hypot(rotation_entry(q, j, k), rotation_entry(q, k, k));
    double t1 = 0.0;
    double t2 = 0.0;
    if (c <= kGimbalCosine) {
        t2 = std::copysign(std::numbers::pi / 2.0, s);
    } else {
        t2 = std::atan2(s, c);
        t1 = std::atan2(-p * rotation_entry(q, j, k), rotation_entry(q, k, k));
    }
    const Quaternion rest = quat_conjugate(quat_from_axis_angle(a[1], t2)) *
                            quat_conjugate(quat_from_axis_angle(a[0], t1)) * q;
    const std::array<double, 3> v = {rest.x, rest.y, rest.z};
    const double t3 = std::remainder(2.0 * std::atan2(v[static_cast<std::size_t>(k)], rest.w), 2.0 * std::numbers::pi);

    EulerAngles e;
    e.order = order;
    set_about(e, a[0], t1);
    set_about(e, a[1], t2);
    set_about(e, a[2], t3);
    return e;
}

}  // namespace dqm
