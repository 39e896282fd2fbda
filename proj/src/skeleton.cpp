#include <algorithm>
#include <cmath>
#include <set>

#include "dqmotion/bvh.hpp"
#include "dqmotion/error.hpp"

namespace dqm {

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::Xposition: return "Xposition";
        case Channel::Yposition: return "Yposition";
        case Channel::Zposition: return "Zposition";
        case Channel::Xrotation: return "Xrotation";
        case Channel::Yrotation: return "Yrotation";
        case Channel::Zrotation: return "Zrotation";
    }
    return "?";
}

std::optional<Channel> channel_from_string(std::string_view name) {
    for (Channel c : {Channel::Xposition, Channel::Yposition, Channel::Zposition, Channel::Xrotation,
                      Channel::Yrotation, Channel::Zrotation}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

namespace {

Axis rotation_axis(Channel c) {
    return c == Channel::Xrotation ? Axis::X : (c == Channel::Yrotation ? Axis::Y : Axis::Z);
}

void check_channels(const JointSpec& j, bool is_root) {
    std::set<Channel> seen;
    int rotations = 0;
    int positions = 0;
    for (Channel c : j.channels) {
        if (!seen.insert(c).second) {
            throw Error(ErrorCode::UnsupportedChannel, "joint '" + j.name + "' repeats channel " +
                                                           std::string(to_string(c)));
        }
        is_rotation(c) ? ++rotations : ++positions;
    }
    if (j.is_end_site && !j.channels.empty()) {
        throw Error(ErrorCode::UnsupportedChannel, "end site '" + j.name + "' declares channels");
    }
    if (positions > 0 && !is_root) {
        throw Error(ErrorCode::UnsupportedChannel,
                    "non-root joint '" + j.name + "' declares position channels");
    }
    if ((rotations != 0 && rotations != 3) || (positions != 0 && positions != 3)) {
        throw Error(ErrorCode::UnsupportedChannel,
                    "joint '" + j.name + "' must declare all three axes of a channel group or none");
    }
}

}  // namespace

Skeleton::Skeleton(std::vector<JointSpec> joints) : joints_(std::move(joints)) {
    if (joints_.empty()) throw Error(ErrorCode::SyntaxError, "skeleton has no joints");
    std::set<std::string> names;
    channel_start_.reserve(joints_.size());
    for (std::size_t i = 0; i < joints_.size(); ++i) {
        const JointSpec& j = joints_[i];
        if (i == 0) {
            if (j.parent) throw Error(ErrorCode::SyntaxError, "root joint must not have a parent");
            if (j.is_end_site) throw Error(ErrorCode::SyntaxError, "root cannot be an end site");
        } else {
            if (!j.parent || *j.parent >= i) {
                throw Error(ErrorCode::SyntaxError, "joint '" + j.name + "' breaks topological order");
            }
            if (joints_[*j.parent].is_end_site) {
                throw Error(ErrorCode::SyntaxError, "end site cannot have children");
            }
            // The hierarchy text can only express depth-first preorder.
            std::optional<std::size_t> walk = i - 1;
            while (walk && *walk != *j.parent) walk = joints_[*walk].parent;
            if (!walk) {
                throw Error(ErrorCode::SyntaxError, "joint '" + j.name + "' is not in depth-first order");
            }
        }
        if (!names.insert(j.name).second) {
            throw Error(ErrorCode::SyntaxError, "duplicate joint name '" + j.name + "'");
        }
        if (!std::isfinite(j.offset.x) || !std::isfinite(j.offset.y) || !std::isfinite(j.offset.z)) {
            throw Error(ErrorCode::SyntaxError, "joint '" + j.name + "' has a non-finite offset");
        }
        check_channels(j, i == 0);
        channel_start_.push_back(channel_count_);
        channel_count_ += j.channels.size();
        if (!j.is_end_site) encoded_.push_back(i);
    }
}

std::optional<EulerOrder> Skeleton::rotation_order(std::size_t joint) const {
    std::vector<Axis> order;
    for (Channel c : joints_[joint].channels) {
        if (is_rotation(c)) order.push_back(rotation_axis(c));
    }
    if (order.size() != 3) return std::nullopt;
    return euler_order_from_axes(order[0], order[1], order[2]);
}

std::uint64_t Skeleton::digest() const {
    const std::string text = bvh_write_hierarchy(*this);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

bool operator==(const Skeleton& a, const Skeleton& b) {
    return std::equal(a.joints_.begin(), a.joints_.end(), b.joints_.begin(), b.joints_.end(),
                      [](const JointSpec& x, const JointSpec& y) {
                          return x.name == y.name && x.parent == y.parent && x.offset == y.offset &&
                                 x.channels == y.channels && x.is_end_site == y.is_end_site;
                      });
}

}  // namespace dqm
