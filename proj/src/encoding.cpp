#include "dqmotion/encoding.hpp"

#include <algorithm>
#include <cmath>

#include "dqmotion/error.hpp"
#include "parallel.hpp"

namespace dqm {

std::size_t repr_dimension(ReprKind kind) {
    switch (kind) {
        case ReprKind::Positions: return 3;
        case ReprKind::Quaternions: return 4;
        case ReprKind::Ortho6d: return 6;
        case ReprKind::QuaternionsPositions: return 7;
        case ReprKind::DualQuat: return 8;
        case ReprKind::Ortho6dPositions: return 9;
    }
    return 0;
}

std::string_view to_string(ReprKind kind) {
    switch (kind) {
        case ReprKind::Positions: return "positions";
        case ReprKind::Quaternions: return "quaternions";
        case ReprKind::Ortho6d: return "ortho6d";
        case ReprKind::QuaternionsPositions: return "quaternions_positions";
        case ReprKind::DualQuat: return "dualquat";
        case ReprKind::Ortho6dPositions: return "ortho6d_positions";
    }
    return "?";
}

std::string_view cli_name(ReprKind kind) {
    switch (kind) {
        case ReprKind::Positions: return "pos";
        case ReprKind::Quaternions: return "quat";
        case ReprKind::Ortho6d: return "ortho6d";
        case ReprKind::QuaternionsPositions: return "quat-pos";
        case ReprKind::DualQuat: return "dq";
        case ReprKind::Ortho6dPositions: return "ortho6d-pos";
    }
    return "?";
}

std::optional<ReprKind> repr_from_name(std::string_view name) {
    for (ReprKind k : kAllReprKinds) {
        if (name == cli_name(k) || name == to_string(k)) return k;
    }
    return std::nullopt;
}

bool has_positions(ReprKind kind) {
    return kind == ReprKind::Positions || kind == ReprKind::QuaternionsPositions ||
           kind == ReprKind::DualQuat || kind == ReprKind::Ortho6dPositions;
}

bool has_quaternion_blocks(ReprKind kind) {
    return kind == ReprKind::Quaternions || kind == ReprKind::QuaternionsPositions || kind == ReprKind::DualQuat;
}

FeatureLayout FeatureLayout::make(const Skeleton& skeleton, ReprKind kind) {
    FeatureLayout layout;
    layout.kind = kind;
    layout.dimension = repr_dimension(kind);
    const auto& encoded = skeleton.encoded_joints();
    std::vector<std::optional<std::size_t>> block_of(skeleton.size());
    for (std::size_t k = 0; k < encoded.size(); ++k) {
        const std::size_t j = encoded[k];
        block_of[j] = k;
        layout.joint.push_back(j);
        const auto parent = skeleton.joint(j).parent;
        layout.parent.push_back(parent ? block_of[*parent] : std::nullopt);
        layout.offset.push_back(skeleton.joint(j).offset);
    }
    layout.width = 3 + layout.dimension * encoded.size();
    return layout;
}

// ---------------------------------------------------------------------------
// rotation matrix helpers

std::array<double, 6> quat_to_ortho6d(Quaternion q) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    return {1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y + w * z), 2.0 * (x * z - w * y),
            2.0 * (x * y - w * z),       1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z + w * x)};
}

std::array<double, 9> ortho6d_to_matrix(std::span<const double, 6> v) {
    const Vec3 a{v[0], v[1], v[2]};
    const Vec3 b{v[3], v[4], v[5]};
    const double na = norm(a);
    if (!(na > 1e-12)) throw Error(ErrorCode::DegenerateNorm, "ortho6d first column vanishes");
    const Vec3 c1 = (1.0 / na) * a;
    const Vec3 b_perp = b - dot(c1, b) * c1;
    const double nb = norm(b_perp);
    if (!(nb > 1e-12)) throw Error(ErrorCode::DegenerateNorm, "ortho6d columns are parallel");
    const Vec3 c2 = (1.0 / nb) * b_perp;
    const Vec3 c3{c1.y * c2.z - c1.z * c2.y, c1.z * c2.x - c1.x * c2.z, c1.x * c2.y - c1.y * c2.x};
    return {c1.x, c2.x, c3.x, c1.y, c2.y, c3.y, c1.z, c2.z, c3.z};
}

// Shepperd's method: pivot on the largest of trace and diagonal entries.
Quaternion matrix_to_quat(const std::array<double, 9>& m) {
    const double m00 = m[0], m01 = m[1], m02 = m[2];
    const double m10 = m[3], m11 = m[4], m12 = m[5];
    const double m20 = m[6], m21 = m[7], m22 = m[8];
    const double trace = m00 + m11 + m22;
    Quaternion q;
    if (trace >= m00 && trace >= m11 && trace >= m22) {
        const double s = 2.0 * std::sqrt(1.0 + trace);
        q = {0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s};
    } else if (m00 >= m11 && m00 >= m22) {
        const double s = 2.0 * std::sqrt(1.0 + m00 - m11 - m22);
        q = {(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s};
    } else if (m11 >= m22) {
        const double s = 2.0 * std::sqrt(1.0 + m11 - m00 - m22);
        q = {(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s};
    } else {
        const double s = 2.0 * std::sqrt(1.0 + m22 - m00 - m11);
        q = {(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s};
    }
    return quat_canonical(quat_normalize(q));
}

// ---------------------------------------------------------------------------
// antipodal correction

namespace {

void seed_sign(double* v, std::size_t dim) {
    for (std::size_t i = 0; i < dim; ++i) {
        if (v[i] > 0.0) return;
        if (v[i] < 0.0) {
            for (std::size_t k = 0; k < dim; ++k) v[k] = -v[k];
            return;
        }
    }
}

// Column block [col, col + dim) of a row-major frames x stride matrix.
void correct_strided(double* data, std::size_t frames, std::size_t stride, std::size_t dim) {
    if (frames == 0) return;
    seed_sign(data, dim);
    for (std::size_t f = 1; f < frames; ++f) {
        const double* prev = data + (f - 1) * stride;
        double* cur = data + f * stride;
        double d = 0.0;
        for (std::size_t k = 0; k < dim; ++k) d += prev[k] * cur[k];
        if (d < 0.0) {
            for (std::size_t k = 0; k < dim; ++k) cur[k] = -cur[k];
        }
    }
}

}  // namespace

void antipodal_correct(std::span<Quaternion> series) {
    std::vector<double> flat;
    flat.reserve(series.size() * 4);
    for (const auto& q : series) flat.insert(flat.end(), {q.w, q.x, q.y, q.z});
    correct_strided(flat.data(), series.size(), 4, 4);
    for (std::size_t f = 0; f < series.size(); ++f) {
        series[f] = {flat[4 * f], flat[4 * f + 1], flat[4 * f + 2], flat[4 * f + 3]};
    }
}

void antipodal_correct(std::span<DualQuaternion> series) {
    std::vector<double> flat;
    flat.reserve(series.size() * 8);
    for (const auto& d : series) {
        const auto a = d.to_array();
        flat.insert(flat.end(), a.begin(), a.end());
    }
    correct_strided(flat.data(), series.size(), 8, 8);
    for (std::size_t f = 0; f < series.size(); ++f) series[f] = DualQuaternion::from_array(&flat[8 * f]);
}

// ---------------------------------------------------------------------------
// encode / decode

namespace {

void encode_frame(const Skeleton& skeleton, const FeatureLayout& layout, const LocalPose& pose,
                  std::span<double> row) {
    row[0] = pose.root_translation.x;
    row[1] = pose.root_translation.y;
    row[2] = pose.root_translation.z;
    const bool need_current = has_positions(layout.kind);
    CurrentPose current;
    if (need_current) current = local_to_current(skeleton, pose);
    for (std::size_t k = 0; k < layout.joints(); ++k) {
        const std::size_t j = layout.joint[k];
        double* block = row.data() + layout.block(k);
        const Quaternion& local = pose.rotations[j];
        switch (layout.kind) {
            case ReprKind::Quaternions:
            case ReprKind::QuaternionsPositions: {
                const auto a = local.to_array();
                std::copy(a.begin(), a.end(), block);
                break;
            }
            case ReprKind::Ortho6d:
            case ReprKind::Ortho6dPositions: {
                const auto a = quat_to_ortho6d(local);
                std::copy(a.begin(), a.end(), block);
                break;
            }
            case ReprKind::DualQuat: {
                const auto a = current.joints[j].to_array();
                std::copy(a.begin(), a.end(), block);
                break;
            }
            case ReprKind::Positions: break;
        }
        if (need_current && layout.kind != ReprKind::DualQuat) {
            const Vec3 p = dq_translation(current.joints[j]);
            double* pos = block + layout.position_in_block();
            pos[0] = p.x;
            pos[1] = p.y;
            pos[2] = p.z;
        }
    }
}

LocalPose decode_frame(const Skeleton& skeleton, const FeatureLayout& layout, std::span<const double> row) {
    LocalPose pose = identity_pose(skeleton);
    pose.root_translation = {row[0], row[1], row[2]};
    if (layout.kind == ReprKind::DualQuat) {
        CurrentPose current;
        current.root_translation = pose.root_translation;
        current.joints.resize(skeleton.size());
        for (std::size_t k = 0; k < layout.joints(); ++k) {
            current.joints[layout.joint[k]] = dq_normalize(DualQuaternion::from_array(row.data() + layout.block(k)));
        }
        // End sites are not encoded; rebuild them from the parent and the bone.
        for (std::size_t j = 1; j < skeleton.size(); ++j) {
            if (skeleton.joint(j).is_end_site) {
                current.joints[j] = current.joints[*skeleton.joint(j).parent] *
                                    dq_from_rotation_translation(Quaternion::identity(), skeleton.joint(j).offset);
            }
        }
        RecoveredLocal local = current_to_local(skeleton, current);
        for (std::size_t j = 0; j < skeleton.size(); ++j) {
            if (skeleton.joint(j).is_end_site) local.pose.rotations[j] = Quaternion::identity();
        }
        return std::move(local.pose);
    }
    for (std::size_t k = 0; k < layout.joints(); ++k) {
        const double* block = row.data() + layout.block(k);
        Quaternion q;
        switch (layout.kind) {
            case ReprKind::Quaternions:
            case ReprKind::QuaternionsPositions:
                q = quat_canonical(quat_normalize({block[0], block[1], block[2], block[3]}));
                break;
            case ReprKind::Ortho6d:
            case ReprKind::Ortho6dPositions:
                q = matrix_to_quat(ortho6d_to_matrix(std::span<const double, 6>(block, 6)));
                break;
            default: break;
        }
        pose.rotations[layout.joint[k]] = q;
    }
    return pose;
}

}  // namespace

EncodedClip encode(std::shared_ptr<const Skeleton> skeleton, const std::vector<LocalPose>& poses, ReprKind kind,
                   double frame_time, Exec exec) {
    if (!skeleton) throw Error(ErrorCode::NotApplicable, "encode needs a skeleton");
    if (poses.empty()) throw Error(ErrorCode::TooFewFrames, "encode needs at least one pose");
    EncodedClip clip;
    clip.kind = kind;
    clip.skeleton = skeleton;
    clip.frame_time = frame_time;
    clip.frame_count = poses.size();
    const FeatureLayout layout = FeatureLayout::make(*skeleton, kind);
    clip.features.assign(poses.size() * layout.width, 0.0);
    for (const LocalPose& p : poses) {
        if (p.rotations.size() != skeleton->size()) {
            throw Error(ErrorCode::ShapeMismatch, "pose joint count differs from skeleton");
        }
    }
    detail::for_each_index(poses.size(), exec,
                           [&](std::size_t f) { encode_frame(*skeleton, layout, poses[f], clip.frame(f)); });

    const std::size_t sign_dim = kind == ReprKind::DualQuat ? 8 : (has_quaternion_blocks(kind) ? 4 : 0);
    if (sign_dim > 0) {
        detail::for_each_index(layout.joints(), exec, [&](std::size_t k) {
            correct_strided(clip.features.data() + layout.block(k), clip.frame_count, layout.width, sign_dim);
        });
    }
    return clip;
}

std::vector<LocalPose> decode(const EncodedClip& clip, Exec exec) {
    if (clip.kind == ReprKind::Positions) {
        throw Error(ErrorCode::NotInvertible, "joint positions do not determine joint rotations");
    }
    if (clip.standardized()) return decode(destandardize(clip, exec), exec);
    const FeatureLayout layout = FeatureLayout::make(*clip.skeleton, clip.kind);
    if (clip.features.size() != clip.frame_count * layout.width) {
        throw Error(ErrorCode::ShapeMismatch, "feature matrix size does not match its layout");
    }
    std::vector<LocalPose> poses(clip.frame_count);
    detail::for_each_index(clip.frame_count, exec,
                           [&](std::size_t f) { poses[f] = decode_frame(*clip.skeleton, layout, clip.frame(f)); });
    return poses;
}

// ---------------------------------------------------------------------------
// standardization

NormalizationStats fit_stats(const EncodedClip& clip, Exec exec) {
    if (clip.frame_count < 2) throw Error(ErrorCode::TooFewFrames, "statistics need at least two frames");
    const std::size_t width = clip.width();
    NormalizationStats stats{std::vector<double>(width), std::vector<double>(width)};
    const double n = static_cast<double>(clip.frame_count);
    detail::for_each_index(width, exec, [&](std::size_t c) {
        double sum = 0.0;
        for (std::size_t f = 0; f < clip.frame_count; ++f) sum += clip.features[f * width + c];
        const double mean = sum / n;
        double sq = 0.0;
        for (std::size_t f = 0; f < clip.frame_count; ++f) {
            const double d = clip.features[f * width + c] - mean;
            sq += d * d;
        }
        stats.mean[c] = mean;
        stats.std[c] = std::max(std::sqrt(sq / n), kStdFloor);
    });
    return stats;
}

EncodedClip standardize(const EncodedClip& clip, const NormalizationStats& stats, Exec exec) {
    const std::size_t width = clip.width();
    if (stats.mean.size() != width || stats.std.size() != width) {
        throw Error(ErrorCode::ShapeMismatch, "statistics width " + std::to_string(stats.mean.size()) +
                                                  " does not match feature width " + std::to_string(width));
    }
    if (clip.standardized()) throw Error(ErrorCode::NotApplicable, "clip is already standardized");
    for (double s : stats.std) {
        if (!(s > 0.0)) throw Error(ErrorCode::ShapeMismatch, "standard deviations must be positive");
    }
    EncodedClip out = clip;
    out.stats = stats;
    detail::for_each_index(clip.frame_count, exec, [&](std::size_t f) {
        auto row = out.frame(f);
        for (std::size_t c = 0; c < width; ++c) row[c] = (row[c] - stats.mean[c]) / stats.std[c];
    });
    return out;
}

EncodedClip destandardize(const EncodedClip& clip, Exec exec) {
    if (!clip.standardized()) throw Error(ErrorCode::NotApplicable, "clip is not standardized");
    const NormalizationStats& stats = *clip.stats;
    const std::size_t width = clip.width();
    if (stats.mean.size() != width || stats.std.size() != width) {
        throw Error(ErrorCode::ShapeMismatch, "statistics width does not match feature width");
    }
    EncodedClip out = clip;
    out.stats.reset();
    detail::for_each_index(clip.frame_count, exec, [&](std::size_t f) {
        auto row = out.frame(f);
        for (std::size_t c = 0; c < width; ++c) row[c] = row[c] * stats.std[c] + stats.mean[c];
    });
    return out;
}

}  // namespace dqm
