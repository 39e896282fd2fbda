#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace dqm {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Scalar-first quaternion (w, x, y, z).
struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static constexpr Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }
    static constexpr Quaternion pure(Vec3 v) { return {0.0, v.x, v.y, v.z}; }

    constexpr Vec3 vec() const { return {x, y, z}; }
    constexpr std::array<double, 4> to_array() const { return {w, x, y, z}; }

    friend constexpr Quaternion operator+(Quaternion a, Quaternion b) {
        return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Quaternion operator-(Quaternion a, Quaternion b) {
        return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Quaternion operator-(Quaternion a) { return {-a.w, -a.x, -a.y, -a.z}; }
    friend constexpr Quaternion operator*(double s, Quaternion a) {
        return {s * a.w, s * a.x, s * a.y, s * a.z};
    }
    friend constexpr bool operator==(Quaternion, Quaternion) = default;
};

// Hamilton product a*b.
constexpr Quaternion quat_mul(Quaternion a, Quaternion b) {
    return {
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    };
}
constexpr Quaternion operator*(Quaternion a, Quaternion b) { return quat_mul(a, b); }

constexpr Quaternion quat_conjugate(Quaternion q) { return {q.w, -q.x, -q.y, -q.z}; }

constexpr double quat_dot(Quaternion a, Quaternion b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double quat_norm(Quaternion q) { return std::sqrt(quat_dot(q, q)); }

// Throws DegenerateNorm when the norm is at or below 1e-12.
Quaternion quat_normalize(Quaternion q);

// Rotates v by the unit quaternion q.
Vec3 quat_rotate(Quaternion q, Vec3 v);

// Sign representative with w >= 0; on w == 0 the first nonzero component is
// made positive.
Quaternion quat_canonical(Quaternion q);

enum class Axis { X = 0, Y = 1, Z = 2 };

// The tag names the axes in multiplication order: ZYX means
// q = q_z * q_y * q_x, which is also the BVH channel order "Z Y X".
enum class EulerOrder { XYZ, XZY, YXZ, YZX, ZXY, ZYX };

constexpr std::array<Axis, 3> axes(EulerOrder order) {
    switch (order) {
        case EulerOrder::XYZ: return {Axis::X, Axis::Y, Axis::Z};
        case EulerOrder::XZY: return {Axis::X, Axis::Z, Axis::Y};
        case EulerOrder::YXZ: return {Axis::Y, Axis::X, Axis::Z};
        case EulerOrder::YZX: return {Axis::Y, Axis::Z, Axis::X};
        case EulerOrder::ZXY: return {Axis::Z, Axis::X, Axis::Y};
        case EulerOrder::ZYX: return {Axis::Z, Axis::Y, Axis::X};
    }
    return {Axis::Z, Axis::Y, Axis::X};
}

EulerOrder euler_order_from_axes(Axis first, Axis second, Axis third);
std::string_view to_string(EulerOrder order);

// Angles in radians, keyed by axis rather than by position in the order.
struct EulerAngles {
    double alpha = 0.0;  // about x
    double beta = 0.0;   // about y
    double gamma = 0.0;  // about z
    EulerOrder order = EulerOrder::ZYX;

    double about(Axis a) const {
        return a == Axis::X ? alpha : (a == Axis::Y ? beta : gamma);
    }
};

Quaternion quat_from_axis_angle(Axis axis, double angle);
Quaternion quat_from_euler(const EulerAngles& e);

// Requires |q| within 1e-6 of one. Near the pole of the middle axis the first
// angle is set to zero and the remaining rotation is carried by the third.
EulerAngles quat_to_euler(Quaternion q, EulerOrder order);

}  // namespace dqm
