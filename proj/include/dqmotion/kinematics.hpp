#pragma once

#include <array>
#include <vector>

#include "dqmotion/bvh.hpp"
#include "dqmotion/dual_quaternion.hpp"
#include "dqmotion/exec.hpp"

namespace dqm {

// Parent-relative rotations, one per skeleton joint. End sites and joints
// without rotation channels hold the identity. The root displacement is kept
// apart from the rotation chain.
struct LocalPose {
    Vec3 root_translation;
    std::vector<Quaternion> rotations;
};

// Root-relative rigid transforms, one per skeleton joint. The root entry is a
// pure rotation.
struct CurrentPose {
    Vec3 root_translation;
    std::vector<DualQuaternion> joints;
};

// Output of the current -> local conversion: rotations plus the bone offsets
// carried by each local dual quaternion (zero for the root).
struct RecoveredLocal {
    LocalPose pose;
    std::vector<Vec3> offsets;
};

LocalPose identity_pose(const Skeleton& skeleton);

// Current transform of each joint: parent current times the local transform
// "rotate, then shift by the bone offset". Throws NotUnit.
CurrentPose local_to_current(const Skeleton& skeleton, const LocalPose& pose);

// local_j = conj(current_parent) * current_j. Rotations are returned with a
// nonnegative scalar part. Throws NotUnit.
RecoveredLocal current_to_local(const Skeleton& skeleton, const CurrentPose& pose);

std::vector<CurrentPose> local_to_current(const Skeleton& skeleton, const std::vector<LocalPose>& poses,
                                          Exec exec = Exec::Parallel);

// Homogeneous-matrix forward kinematics, kept independent of the dual
// quaternion path. Positions and rotations are relative to the root joint.
struct JointFrame {
    std::array<std::array<double, 3>, 3> rotation;
    Vec3 position;
};
std::vector<JointFrame> matrix_fk(const Skeleton& skeleton, const LocalPose& pose);

// Degrees to radians, channel-order-aware Euler composition per joint.
std::vector<LocalPose> clip_to_local(const MotionClip& clip, Exec exec = Exec::Parallel);

MotionClip local_to_clip(const std::vector<LocalPose>& poses, const Skeleton& skeleton, double frame_time,
                         Exec exec = Exec::Parallel);

}  // namespace dqm
