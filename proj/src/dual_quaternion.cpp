#include "dqmotion/dual_quaternion.hpp"

#include <cmath>

#include "dqmotion/error.hpp"

namespace dqm {

namespace {

void require_unit(const DualQuaternion& d, const char* what) {
    if (!dq_is_unit(d)) throw Error(ErrorCode::NotUnit, std::string(what) + ": dual quaternion is not unit");
}

double real_norm_checked(const DualQuaternion& d) {
    const double n = quat_norm(d.real);
    if (!(n > 1e-12)) throw Error(ErrorCode::DegenerateNorm, "real part norm is at or below 1e-12");
    return n;
}

}  // namespace

DualNumber dq_magnitude(const DualQuaternion& d) {
    const double n = real_norm_checked(d);
    return {n, quat_dot(d.real, d.dual) / n};
}

DualQuaternion dq_normalize(const DualQuaternion& d) {
    const double n = real_norm_checked(d);
    const Quaternion real = (1.0 / n) * d.real;
    const double s = quat_dot(d.real, d.dual) / (n * n);
    return {real, (1.0 / n) * d.dual - s * real};
}

DualQuaternion dq_from_rotation_translation(Quaternion r, Vec3 t) {
    if (std::abs(quat_norm(r) - 1.0) > kUnitTolerance) {
        throw Error(ErrorCode::NotUnit, "rotation quaternion is not unit");
    }
    return {r, 0.5 * (Quaternion::pure(t) * r)};
}

std::pair<double, double> dq_unitary_residual(const DualQuaternion& d) {
    return {quat_dot(d.real, d.real) - 1.0, quat_dot(d.real, d.dual)};
}

bool dq_is_unit(const DualQuaternion& d, double tolerance) {
    const auto [norm_residual, ortho_residual] = dq_unitary_residual(d);
    return std::abs(norm_residual) <= tolerance && std::abs(ortho_residual) <= tolerance;
}

Quaternion dq_rotation(const DualQuaternion& d) {
    require_unit(d, "dq_rotation");
    return d.real;
}

Vec3 dq_translation(const DualQuaternion& d) {
    require_unit(d, "dq_translation");
    return (2.0 * (d.dual * quat_conjugate(d.real))).vec();
}

Vec3 dq_transform_point(const DualQuaternion& d, Vec3 p) {
    require_unit(d, "dq_transform_point");
    const DualQuaternion point{Quaternion::identity(), Quaternion::pure(p)};
    const DualQuaternion dagger{quat_conjugate(d.real), -quat_conjugate(d.dual)};
    return (d * point * dagger).dual.vec();
}

}  // namespace dqm
