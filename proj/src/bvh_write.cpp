#include <cmath>

#include <fmt/format.h>

#include "dqmotion/bvh.hpp"
#include "dqmotion/error.hpp"

namespace dqm {

namespace {

void write_joint(const Skeleton& s, const std::vector<std::vector<std::size_t>>& children, std::size_t j,
                 int depth, std::string& out) {
    const JointSpec& joint = s.joint(j);
    const std::string pad(2 * depth, ' ');
    if (joint.is_end_site) {
        out += pad + "End Site\n";
    } else {
        out += pad + (j == 0 ? "ROOT " : "JOINT ") + joint.name + "\n";
    }
    out += pad + "{\n";
    // Shortest round-trip form so an embedded hierarchy reproduces the skeleton bit for bit.
    out += fmt::format("{}  OFFSET {} {} {}\n", pad, joint.offset.x, joint.offset.y, joint.offset.z);
    if (!joint.is_end_site) {
        out += fmt::format("{}  CHANNELS {}", pad, joint.channels.size());
        for (Channel c : joint.channels) out += fmt::format(" {}", to_string(c));
        out += "\n";
    }
    for (std::size_t c : children[j]) write_joint(s, children, c, depth + 1, out);
    out += pad + "}\n";
}

}  // namespace

std::string bvh_write_hierarchy(const Skeleton& skeleton) {
    std::vector<std::vector<std::size_t>> children(skeleton.size());
    for (std::size_t j = 1; j < skeleton.size(); ++j) children[*skeleton.joint(j).parent].push_back(j);
    std::string out = "HIERARCHY\n";
    write_joint(skeleton, children, 0, 0, out);
    return out;
}

std::string bvh_write(const MotionClip& clip) {
    std::string out = bvh_write_hierarchy(clip.skeleton);
    out += "MOTION\n";
    out += fmt::format("Frames: {}\n", clip.frame_count);
    // Extra digits keep 1/fps stable through repeated rewrites.
    out += fmt::format("Frame Time: {:.8f}\n", clip.frame_time);
    for (std::size_t f = 0; f < clip.frame_count; ++f) {
        const auto row = clip.frame(f);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ' ';
            out += fmt::format("{:.6f}", row[c]);
        }
        out += '\n';
    }
    return out;
}

MotionClip bvh_subsample(const MotionClip& clip, double target_fps) {
    const double source_fps = 1.0 / clip.frame_time;
    if (!(target_fps > 0.0) || target_fps > source_fps + 1e-9) {
        throw Error(ErrorCode::BadRate, fmt::format("target rate {} fps is outside (0, {}] fps", target_fps, source_fps));
    }
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(source_fps / target_fps)));
    MotionClip out;
    out.skeleton = clip.skeleton;
    out.frame_time = clip.frame_time * static_cast<double>(stride);
    out.frame_count = (clip.frame_count + stride - 1) / stride;
    out.values.reserve(out.frame_count * clip.skeleton.channel_count());
    for (std::size_t f = 0; f < clip.frame_count; f += stride) {
        const auto row = clip.frame(f);
        out.values.insert(out.values.end(), row.begin(), row.end());
    }
    return out;
}

}  // namespace dqm
