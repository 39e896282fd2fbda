#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dqmotion/kinematics.hpp"

namespace dqm {

// Per-joint feature block kinds. Hybrids store the rotation part first and
// the root-relative joint position after it.
enum class ReprKind {
    Positions,             // D = 3
    Quaternions,           // D = 4, local
    Ortho6d,               // D = 6, first two columns of the local rotation matrix
    QuaternionsPositions,  // D = 7
    DualQuat,              // D = 8, current (root-relative)
    Ortho6dPositions,      // D = 9
};

inline constexpr std::array<ReprKind, 6> kAllReprKinds = {
    ReprKind::Positions,   ReprKind::Quaternions, ReprKind::Ortho6d,
    ReprKind::QuaternionsPositions, ReprKind::DualQuat, ReprKind::Ortho6dPositions};

std::size_t repr_dimension(ReprKind kind);
std::string_view to_string(ReprKind kind);
// Short names used on the command line: pos, quat, ortho6d, quat-pos, dq, ortho6d-pos.
std::string_view cli_name(ReprKind kind);
std::optional<ReprKind> repr_from_name(std::string_view name);

bool has_positions(ReprKind kind);
bool has_quaternion_blocks(ReprKind kind);  // quaternions, quaternions_positions, dualquat

struct NormalizationStats {
    std::vector<double> mean;
    std::vector<double> std;  // floored at 1e-8
};

inline constexpr double kStdFloor = 1e-8;

// Frame-major features, each row = root translation (3) followed by one
// D-wide block per encoded joint. When stats is set the features hold
// (x - mean) / std.
struct EncodedClip {
    ReprKind kind = ReprKind::DualQuat;
    std::shared_ptr<const Skeleton> skeleton;
    double frame_time = 0.0;
    std::size_t frame_count = 0;
    std::vector<double> features;
    std::optional<NormalizationStats> stats;

    std::size_t joint_count() const { return skeleton->encoded_joints().size(); }
    std::size_t width() const { return 3 + repr_dimension(kind) * joint_count(); }
    bool standardized() const { return stats.has_value(); }

    std::span<const double> frame(std::size_t f) const {
        return std::span<const double>(features).subspan(f * width(), width());
    }
    std::span<double> frame(std::size_t f) { return std::span<double>(features).subspan(f * width(), width()); }
};

// Where things live inside one feature row.
struct FeatureLayout {
    ReprKind kind = ReprKind::DualQuat;
    std::size_t dimension = 0;
    std::size_t width = 0;
    std::vector<std::size_t> joint;                  // skeleton index of each block
    std::vector<std::optional<std::size_t>> parent;  // parent block
    std::vector<Vec3> offset;                        // bone offset of each block's joint

    static FeatureLayout make(const Skeleton& skeleton, ReprKind kind);

    std::size_t joints() const { return joint.size(); }
    std::size_t block(std::size_t k) const { return 3 + k * dimension; }
    // Start of the position triple inside a block; requires has_positions(kind).
    std::size_t position_in_block() const { return dimension - 3; }
};

EncodedClip encode(std::shared_ptr<const Skeleton> skeleton, const std::vector<LocalPose>& poses, ReprKind kind,
                   double frame_time, Exec exec = Exec::Parallel);

// Standardized input is destandardized first. Throws NotInvertible for the
// positions kind and DegenerateNorm for blocks that cannot be normalized.
std::vector<LocalPose> decode(const EncodedClip& clip, Exec exec = Exec::Parallel);

// Per-joint sign selection along time: frame 0 gets a nonnegative scalar part
// (first nonzero component positive on ties), every later value the sign
// with the smaller distance to its corrected predecessor.
void antipodal_correct(std::span<Quaternion> series);
void antipodal_correct(std::span<DualQuaternion> series);

// Gram-Schmidt on two 3-columns; returns the row-major 3x3 rotation.
std::array<double, 9> ortho6d_to_matrix(std::span<const double, 6> columns);
Quaternion matrix_to_quat(const std::array<double, 9>& m);
std::array<double, 6> quat_to_ortho6d(Quaternion q);

// Population statistics per column. Throws TooFewFrames when F < 2.
NormalizationStats fit_stats(const EncodedClip& clip, Exec exec = Exec::Parallel);
// Throws ShapeMismatch on width mismatch and NotApplicable if already standardized.
EncodedClip standardize(const EncodedClip& clip, const NormalizationStats& stats, Exec exec = Exec::Parallel);
// Throws NotApplicable if the clip is not standardized.
EncodedClip destandardize(const EncodedClip& clip, Exec exec = Exec::Parallel);

}  // namespace dqm
