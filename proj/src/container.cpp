#include "dqmotion/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

#include "dqmotion/error.hpp"

namespace dqm {

namespace {

constexpr char kMagic[4] = {'D', 'Q', 'M', 'C'};
constexpr std::size_t kHeaderSize = 56;

class Writer {
public:
    void bytes(const void* data, std::size_t n) { out_.append(static_cast<const char*>(data), n); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    std::string_view bytes(std::size_t n) {
        need(n);
        const auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw Error(ErrorCode::FormatError, "container is truncated");
    }
    std::string_view in_;
    std::size_t pos_ = 0;
};

std::uint32_t kind_tag(ReprKind kind) { return static_cast<std::uint32_t>(kind); }

}  // namespace

std::string write_container(const EncodedClip& clip) {
    const std::string hierarchy = bvh_write_hierarchy(*clip.skeleton);
    Writer w;
    w.bytes(kMagic, 4);
    w.u32(kContainerVersion);
    w.u32(kind_tag(clip.kind));
    w.u32(static_cast<std::uint32_t>(clip.joint_count()));
    w.u32(static_cast<std::uint32_t>(repr_dimension(clip.kind)));
    w.u32(clip.stats ? 1u : 0u);
    w.u64(clip.frame_count);
    w.f64(clip.frame_time);
    w.u64(clip.skeleton->digest());
    w.u64(hierarchy.size());
    w.bytes(hierarchy.data(), hierarchy.size());
    for (double v : clip.features) w.f64(v);
    if (clip.stats) {
        for (double v : clip.stats->mean) w.f64(v);
        for (double v : clip.stats->std) w.f64(v);
    }
    return w.take();
}

EncodedClip read_container(std::string_view bytes) {
    Reader r(bytes);
    if (std::memcmp(r.bytes(4).data(), kMagic, 4) != 0) throw Error(ErrorCode::FormatError, "bad magic bytes");
    const std::uint32_t version = r.u32();
    if (version != kContainerVersion) {
        throw Error(ErrorCode::FormatError, "unsupported container version " + std::to_string(version));
    }
    const std::uint32_t tag = r.u32();
    if (tag >= kAllReprKinds.size()) throw Error(ErrorCode::FormatError, "unknown representation tag");
    const std::uint32_t joints = r.u32();
    const std::uint32_t dimension = r.u32();
    const std::uint32_t flags = r.u32();
    if (flags > 1u) throw Error(ErrorCode::FormatError, "unknown flag bits");
    const std::uint64_t frames = r.u64();
    const double frame_time = r.f64();
    const std::uint64_t digest = r.u64();
    const std::uint64_t text_size = r.u64();
    if (text_size > r.remaining()) throw Error(ErrorCode::FormatError, "container is truncated");

    EncodedClip clip;
    clip.kind = kAllReprKinds[tag];
    if (dimension != repr_dimension(clip.kind)) throw Error(ErrorCode::FormatError, "dimension does not match tag");
    try {
        clip.skeleton = std::make_shared<const Skeleton>(bvh_parse_hierarchy(r.bytes(text_size)));
    } catch (const Error& e) {
        throw Error(ErrorCode::FormatError, std::string("embedded skeleton: ") + e.what());
    }
    if (clip.skeleton->digest() != digest) throw Error(ErrorCode::FormatError, "skeleton digest mismatch");
    if (clip.joint_count() != joints) throw Error(ErrorCode::FormatError, "joint count does not match skeleton");
    if (frames == 0) throw Error(ErrorCode::FormatError, "container holds no frames");
    if (!(frame_time > 0.0) || !std::isfinite(frame_time)) throw Error(ErrorCode::FormatError, "bad frame time");
    clip.frame_time = frame_time;
    clip.frame_count = frames;

    const std::uint64_t width = clip.width();
    const std::uint64_t expected = 8 * width * (frames + ((flags & 1u) ? 2 : 0));
    if (frames > r.remaining() / 8 || r.remaining() != expected) {
        throw Error(ErrorCode::FormatError, "payload size does not match header");
    }
    auto read_finite = [&r]() {
        const double v = r.f64();
        if (!std::isfinite(v)) throw Error(ErrorCode::FormatError, "non-finite value in payload");
        return v;
    };
    clip.features.resize(frames * width);
    for (double& v : clip.features) v = read_finite();
    if (flags & 1u) {
        NormalizationStats stats{std::vector<double>(width), std::vector<double>(width)};
        for (double& v : stats.mean) v = read_finite();
        for (double& v : stats.std) {
            v = read_finite();
            if (!(v > 0.0)) throw Error(ErrorCode::FormatError, "non-positive standard deviation");
        }
        clip.stats = std::move(stats);
    }
    return clip;
}

void write_container_file(const std::filesystem::path& path, const EncodedClip& clip) {
    write_file_atomic(path, write_container(clip));
}

EncodedClip read_container_file(const std::filesystem::path& path) { return read_container(read_file(path)); }

std::string container_json(const EncodedClip& clip) {
    nlohmann::json j;
    j["format"] = "dqmotion-encoded-clip";
    j["version"] = kContainerVersion;
    j["kind"] = std::string(to_string(clip.kind));
    j["joints"] = clip.joint_count();
    j["dimension"] = repr_dimension(clip.kind);
    j["width"] = clip.width();
    j["frames"] = clip.frame_count;
    j["frame_time"] = clip.frame_time;
    j["skeleton_digest"] = fmt::format("{:016x}", clip.skeleton->digest());
    auto& names = j["joint_names"] = nlohmann::json::array();
    for (std::size_t k : clip.skeleton->encoded_joints()) names.push_back(clip.skeleton->joint(k).name);
    j["standardized"] = clip.standardized();
    auto& rows = j["features"] = nlohmann::json::array();
    for (std::size_t f = 0; f < clip.frame_count; ++f) {
        const auto row = clip.frame(f);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    if (clip.stats) j["stats"] = {{"mean", clip.stats->mean}, {"std", clip.stats->std}};
    return j.dump(2);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot move output into place at " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace dqm
