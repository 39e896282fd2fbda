#pragma once

#include <array>
#include <utility>

#include "dqmotion/quaternion.hpp"

namespace dqm {

// real + eps * dual, eps^2 = 0. For a rigid transform "rotate by r, then
// translate by t" the dual part is t r / 2 (t embedded as a pure quaternion).
struct DualQuaternion {
    Quaternion real = Quaternion::identity();
    Quaternion dual = {0.0, 0.0, 0.0, 0.0};

    static constexpr DualQuaternion identity() { return {}; }

    constexpr std::array<double, 8> to_array() const {
        return {real.w, real.x, real.y, real.z, dual.w, dual.x, dual.y, dual.z};
    }
    static constexpr DualQuaternion from_array(const double* v) {
        return {{v[0], v[1], v[2], v[3]}, {v[4], v[5], v[6], v[7]}};
    }

    friend constexpr DualQuaternion operator-(const DualQuaternion& d) { return {-d.real, -d.dual}; }
    friend constexpr bool operator==(const DualQuaternion&, const DualQuaternion&) = default;
};

struct DualNumber {
    double primal = 0.0;
    double dual = 0.0;
};

// Tolerances at API boundaries and after explicit normalization.
inline constexpr double kUnitTolerance = 1e-6;
inline constexpr double kNormalizedTolerance = 1e-12;

constexpr DualQuaternion dq_mul(const DualQuaternion& a, const DualQuaternion& b) {
    return {a.real * b.real, a.real * b.dual + a.dual * b.real};
}
constexpr DualQuaternion operator*(const DualQuaternion& a, const DualQuaternion& b) {
    return dq_mul(a, b);
}

constexpr DualQuaternion dq_conjugate(const DualQuaternion& d) {
    return {quat_conjugate(d.real), quat_conjugate(d.dual)};
}

// Eight-component Euclidean inner product.
constexpr double dq_dot(const DualQuaternion& a, const DualQuaternion& b) {
    return quat_dot(a.real, b.real) + quat_dot(a.dual, b.dual);
}

// |d| = |q_r| + eps <q_r, q_d> / |q_r|. Throws DegenerateNorm.
DualNumber dq_magnitude(const DualQuaternion& d);

// q_r/|q_r| + eps [q_d/|q_r| - (q_r/|q_r|) <q_r, q_d>/|q_r|^2]. Throws DegenerateNorm.
DualQuaternion dq_normalize(const DualQuaternion& d);

// Throws NotUnit unless |r| is within 1e-6 of one.
DualQuaternion dq_from_rotation_translation(Quaternion r, Vec3 t);

// (|q_r|^2 - 1, <q_r, q_d>); both vanish exactly for unit dual quaternions.
std::pair<double, double> dq_unitary_residual(const DualQuaternion& d);

bool dq_is_unit(const DualQuaternion& d, double tolerance = kUnitTolerance);

// The extractors and point transform below throw NotUnit for non-unit input.
Quaternion dq_rotation(const DualQuaternion& d);

// Vector part of 2 q_d q_r*.
Vec3 dq_translation(const DualQuaternion& d);

// Sandwich d (1 + eps p) d^dagger, where d^dagger = q_r* - eps q_d* conjugates
// both the quaternion and the dual unit.
Vec3 dq_transform_point(const DualQuaternion& d, Vec3 p);

constexpr DualQuaternion dq_antipode(const DualQuaternion& d) { return -d; }

}  // namespace dqm
