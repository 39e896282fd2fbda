#include <Eigen/Geometry>

#include "dqmotion/error.hpp"
#include "dqmotion/kinematics.hpp"

namespace dqm {

std::vector<JointFrame> matrix_fk(const Skeleton& skeleton, const LocalPose& pose) {
    if (pose.rotations.size() != skeleton.size()) {
        throw Error(ErrorCode::ShapeMismatch, "pose and skeleton joint counts differ");
    }
    std::vector<Eigen::Matrix4d> current(skeleton.size());
    std::vector<JointFrame> out(skeleton.size());
    for (std::size_t j = 0; j < skeleton.size(); ++j) {
        const Quaternion& q = pose.rotations[j];
        Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
        local.topLeftCorner<3, 3>() = Eigen::Quaterniond(q.w, q.x, q.y, q.z).toRotationMatrix();
        const auto parent = skeleton.joint(j).parent;
        if (parent) {
            const Vec3& o = skeleton.joint(j).offset;
            local.topRightCorner<3, 1>() = Eigen::Vector3d(o.x, o.y, o.z);
            current[j] = current[*parent] * local;
        } else {
            current[j] = local;
        }
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) out[j].rotation[r][c] = current[j](r, c);
        }
        out[j].position = {current[j](0, 3), current[j](1, 3), current[j](2, 3)};
    }
    return out;
}

}  // namespace dqm
