#include "dqmotion/kinematics.hpp"

#include <cmath>
#include <numbers>

#include "dqmotion/error.hpp"
#include "parallel.hpp"

namespace dqm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_size(const Skeleton& skeleton, std::size_t n) {
    if (n != skeleton.size()) {
        throw Error(ErrorCode::ShapeMismatch, "pose has " + std::to_string(n) + " joints, skeleton has " +
                                                  std::to_string(skeleton.size()));
    }
}

void require_unit_rotation(Quaternion q, std::size_t joint) {
    if (std::abs(quat_norm(q) - 1.0) > kUnitTolerance) {
        throw Error(ErrorCode::NotUnit, "local rotation of joint " + std::to_string(joint) + " is not unit");
    }
}

LocalPose frame_to_local(const Skeleton& skeleton, std::span<const double> row) {
    LocalPose pose = identity_pose(skeleton);
    for (std::size_t j = 0; j < skeleton.size(); ++j) {
        const JointSpec& joint = skeleton.joint(j);
        const std::size_t start = skeleton.channel_start(j);
        EulerAngles angles;
        for (std::size_t c = 0; c < joint.channels.size(); ++c) {
            const double v = row[start + c];
            switch (joint.channels[c]) {
                case Channel::Xposition: pose.root_translation.x = v; break;
                case Channel::Yposition: pose.root_translation.y = v; break;
                case Channel::Zposition: pose.root_translation.z = v; break;
                case Channel::Xrotation: angles.alpha = v * kDegToRad; break;
                case Channel::Yrotation: angles.beta = v * kDegToRad; break;
                case Channel::Zrotation: angles.gamma = v * kDegToRad; break;
            }
        }
        if (const auto order = skeleton.rotation_order(j)) {
            angles.order = *order;
            pose.rotations[j] = quat_from_euler(angles);
        }
    }
    return pose;
}

void local_to_frame(const Skeleton& skeleton, const LocalPose& pose, std::span<double> row) {
    require_size(skeleton, pose.rotations.size());
    for (std::size_t j = 0; j < skeleton.size(); ++j) {
        const JointSpec& joint = skeleton.joint(j);
        const std::size_t start = skeleton.channel_start(j);
        EulerAngles angles;
        if (const auto order = skeleton.rotation_order(j)) angles = quat_to_euler(pose.rotations[j], *order);
        for (std::size_t c = 0; c < joint.channels.size(); ++c) {
            double& v = row[start + c];
            switch (joint.channels[c]) {
                case Channel::Xposition: v = pose.root_translation.x; break;
                case Channel::Yposition: v = pose.root_translation.y; break;
                case Channel::Zposition: v = pose.root_translation.z; break;
                case Channel::Xrotation: v = angles.alpha / kDegToRad; break;
                case Channel::Yrotation: v = angles.beta / kDegToRad; break;
                case Channel::Zrotation: v = angles.gamma / kDegToRad; break;
            }
        }
    }
}

}  // namespace

LocalPose identity_pose(const Skeleton& skeleton) {
    return LocalPose{{}, std::vector<Quaternion>(skeleton.size(), Quaternion::identity())};
}

CurrentPose local_to_current(const Skeleton& skeleton, const LocalPose& pose) {
    require_size(skeleton, pose.rotations.size());
    CurrentPose out;
    out.root_translation = pose.root_translation;
    out.joints.resize(skeleton.size());
    require_unit_rotation(pose.rotations[0], 0);
    out.joints[0] = {pose.rotations[0], {0.0, 0.0, 0.0, 0.0}};
    for (std::size_t j = 1; j < skeleton.size(); ++j) {
        require_unit_rotation(pose.rotations[j], j);
        const JointSpec& joint = skeleton.joint(j);
        const DualQuaternion local = dq_from_rotation_translation(pose.rotations[j], joint.offset);
        out.joints[j] = out.joints[*joint.parent] * local;
    }
    return out;
}

RecoveredLocal current_to_local(const Skeleton& skeleton, const CurrentPose& pose) {
    require_size(skeleton, pose.joints.size());
    for (std::size_t j = 0; j < pose.joints.size(); ++j) {
        if (!dq_is_unit(pose.joints[j])) {
            throw Error(ErrorCode::NotUnit, "current transform of joint " + std::to_string(j) + " is not unit");
        }
    }
    RecoveredLocal out;
    out.pose.root_translation = pose.root_translation;
    out.pose.rotations.resize(skeleton.size());
    out.offsets.resize(skeleton.size());
    for (std::size_t j = 0; j < skeleton.size(); ++j) {
        const auto parent = skeleton.joint(j).parent;
        const DualQuaternion local =
            parent ? dq_conjugate(pose.joints[*parent]) * pose.joints[j] : pose.joints[j];
        out.pose.rotations[j] = quat_canonical(dq_rotation(local));
        out.offsets[j] = dq_translation(local);
    }
    return out;
}

std::vector<CurrentPose> local_to_current(const Skeleton& skeleton, const std::vector<LocalPose>& poses,
                                          Exec exec) {
    std::vector<CurrentPose> out(poses.size());
    detail::for_each_index(poses.size(), exec, [&](std::size_t f) { out[f] = local_to_current(skeleton, poses[f]); });
    return out;
}

std::vector<LocalPose> clip_to_local(const MotionClip& clip, Exec exec) {
    std::vector<LocalPose> out(clip.frame_count);
    detail::for_each_index(clip.frame_count, exec,
                           [&](std::size_t f) { out[f] = frame_to_local(clip.skeleton, clip.frame(f)); });
    return out;
}

MotionClip local_to_clip(const std::vector<LocalPose>& poses, const Skeleton& skeleton, double frame_time,
                         Exec exec) {
    MotionClip clip;
    clip.skeleton = skeleton;
    clip.frame_time = frame_time;
    clip.frame_count = poses.size();
    clip.values.assign(poses.size() * skeleton.channel_count(), 0.0);
    detail::for_each_index(poses.size(), exec,
                           [&](std::size_t f) { local_to_frame(skeleton, poses[f], clip.frame(f)); });
    return clip;
}

}  // namespace dqm
