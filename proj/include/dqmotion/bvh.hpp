#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dqmotion/quaternion.hpp"

namespace dqm {

enum class Channel { Xposition, Yposition, Zposition, Xrotation, Yrotation, Zrotation };

std::string_view to_string(Channel c);
std::optional<Channel> channel_from_string(std::string_view name);
constexpr bool is_rotation(Channel c) { return c >= Channel::Xrotation; }

struct JointSpec {
    std::string name;
    std::optional<std::size_t> parent;
    Vec3 offset;
    std::vector<Channel> channels;
    bool is_end_site = false;
};

// Joints in topological order (parent index < own index), root at 0. End
// sites are kept as zero-channel leaves.
class Skeleton {
public:
    Skeleton() = default;
    // Throws SyntaxError when the topology or naming invariants fail and
    // UnsupportedChannel for channel layouts the kinematics cannot express.
    explicit Skeleton(std::vector<JointSpec> joints);

    const std::vector<JointSpec>& joints() const { return joints_; }
    const JointSpec& joint(std::size_t i) const { return joints_[i]; }
    std::size_t size() const { return joints_.size(); }
    std::size_t channel_count() const { return channel_count_; }
    // Column of the joint's first channel within a motion row.
    std::size_t channel_start(std::size_t joint) const { return channel_start_[joint]; }

    // Joints that carry a rotation, i.e. everything except end sites. A
    // parent of such a joint is always such a joint too.
    const std::vector<std::size_t>& encoded_joints() const { return encoded_; }

    // Euler order of the joint's rotation channels, if it has any.
    std::optional<EulerOrder> rotation_order(std::size_t joint) const;

    // Stable 64-bit FNV-1a digest of the topology, names, offsets, channels.
    std::uint64_t digest() const;

    friend bool operator==(const Skeleton& a, const Skeleton& b);

private:
    std::vector<JointSpec> joints_;
    std::vector<std::size_t> channel_start_;
    std::vector<std::size_t> encoded_;
    std::size_t channel_count_ = 0;
};

// Frame-major raw motion; values stay in file units (degrees for rotations).
struct MotionClip {
    Skeleton skeleton;
    double frame_time = 0.0;
    std::size_t frame_count = 0;
    std::vector<double> values;  // frame_count x skeleton.channel_count()

    std::span<const double> frame(std::size_t f) const {
        const std::size_t c = skeleton.channel_count();
        return std::span<const double>(values).subspan(f * c, c);
    }
    std::span<double> frame(std::size_t f) {
        const std::size_t c = skeleton.channel_count();
        return std::span<double>(values).subspan(f * c, c);
    }
};

MotionClip bvh_parse(std::string_view text);
MotionClip bvh_read_file(const std::filesystem::path& path);

// HIERARCHY text only; also used as the skeleton section of the container.
std::string bvh_write_hierarchy(const Skeleton& skeleton);
Skeleton bvh_parse_hierarchy(std::string_view text);

// LF newlines, two-space indentation, six-decimal numbers.
std::string bvh_write(const MotionClip& clip);

// Keeps every k-th frame, k = round(source_fps / target_fps). Throws BadRate
// when target_fps is not positive or exceeds the source rate.
MotionClip bvh_subsample(const MotionClip& clip, double target_fps);

}  // namespace dqm
