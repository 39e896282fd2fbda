// Serial reference vs OpenMP kernels on a tiled walk clip.
//   ./bench_kernels --benchmark_filter=Encode

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "dqmotion/bvh.hpp"
#include "dqmotion/encoding.hpp"
#include "dqmotion/kinematics.hpp"
#include "dqmotion/losses.hpp"
#include "dqmotion/metrics.hpp"

namespace {

using namespace dqm;

struct Corpus {
    std::shared_ptr<const Skeleton> skeleton;
    std::vector<LocalPose> poses;
    double frame_time = 0.0;
};

// The fixture repeated until it reaches `frames`.
const Corpus& corpus(std::size_t frames) {
    static std::map<std::size_t, Corpus> cache;
    auto [it, inserted] = cache.try_emplace(frames);
    if (inserted) {
        const MotionClip clip = bvh_read_file(DQM_BENCH_CLIP);
        const auto base = clip_to_local(clip, Exec::Serial);
        it->second.skeleton = std::make_shared<const Skeleton>(clip.skeleton);
        it->second.frame_time = clip.frame_time;
        for (std::size_t f = 0; f < frames; ++f) it->second.poses.push_back(base[f % base.size()]);
    }
    return it->second;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& state) {
    state.SetLabel(state.range(1) ? "parallel" : "serial");
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LocalToCurrent(benchmark::State& state) {
    const Corpus& c = corpus(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(local_to_current(*c.skeleton, c.poses, exec_of(state)));
    label(state);
}

void BM_Encode(benchmark::State& state) {
    const Corpus& c = corpus(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(encode(c.skeleton, c.poses, ReprKind::DualQuat, c.frame_time, exec_of(state)));
    }
    label(state);
}

void BM_Decode(benchmark::State& state) {
    const Corpus& c = corpus(static_cast<std::size_t>(state.range(0)));
    const EncodedClip clip = encode(c.skeleton, c.poses, ReprKind::DualQuat, c.frame_time);
    for (auto _ : state) benchmark::DoNotOptimize(decode(clip, exec_of(state)));
    label(state);
}

void BM_FitStats(benchmark::State& state) {
    const Corpus& c = corpus(static_cast<std::size_t>(state.range(0)));
    const EncodedClip clip = encode(c.skeleton, c.poses, ReprKind::DualQuat, c.frame_time);
    for (auto _ : state) benchmark::DoNotOptimize(fit_stats(clip, exec_of(state)));
    label(state);
}

void BM_LossTotal(benchmark::State& state) {
    const Corpus& c = corpus(static_cast<std::size_t>(state.range(0)));
    const EncodedClip truth = encode(c.skeleton, c.poses, ReprKind::DualQuat, c.frame_time);
    std::vector<LocalPose> shifted(c.poses.begin() + 1, c.poses.end());
    shifted.push_back(c.poses.front());
    const EncodedClip pred = encode(c.skeleton, shifted, ReprKind::DualQuat, c.frame_time);
    for (auto _ : state) benchmark::DoNotOptimize(loss_total(pred, truth, {}, RotationSpace::Current, exec_of(state)));
    label(state);
}

void BM_Npss(benchmark::State& state) {
    const Corpus& c = corpus(static_cast<std::size_t>(state.range(0)));
    const PositionSequence truth = joint_positions(*c.skeleton, c.poses);
    PositionSequence pred(truth.rbegin(), truth.rend());
    for (auto _ : state) benchmark::DoNotOptimize(metric_npss(pred, truth, exec_of(state)));
    label(state);
}

void sizes(benchmark::internal::Benchmark* b) {
    for (long frames : {240L, 4800L}) {
        for (long parallel : {0L, 1L}) b->Args({frames, parallel});
    }
    b->ArgNames({"frames", "parallel"})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_LocalToCurrent)->Apply(sizes);
BENCHMARK(BM_Encode)->Apply(sizes);
BENCHMARK(BM_Decode)->Apply(sizes);
BENCHMARK(BM_FitStats)->Apply(sizes);
BENCHMARK(BM_LossTotal)->Apply(sizes);
BENCHMARK(BM_Npss)->Apply(sizes);

BENCHMARK_MAIN();
