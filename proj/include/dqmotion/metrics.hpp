#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dqmotion/kinematics.hpp"

namespace dqm {

// frames x joints, root-relative joint positions.
using PositionSequence = std::vector<std::vector<Vec3>>;

// Matrix forward kinematics per frame, restricted to encoded joints. The root
// translation never enters.
PositionSequence joint_positions(const Skeleton& skeleton, const std::vector<LocalPose>& poses,
                                 Exec exec = Exec::Parallel);

// Mean over frames and joints of |p - p~|. LengthMismatch on differing
// frame or joint counts, TooFewFrames when empty.
double metric_euclidean(const PositionSequence& pred, const PositionSequence& truth);

// Power-spectrum similarity over all position coordinates. Each coordinate's
// full DFT power spectrum is normalized to unit mass (all mass at DC when the
// signal has no power), compared by the L1 distance of cumulative sums, and
// the per-coordinate distances are averaged with the truth's total power as
// weight (uniformly when the truth carries no power at all).
double metric_npss(const PositionSequence& pred, const PositionSequence& truth, Exec exec = Exec::Parallel);

// Same, on raw signals laid out feature-major: series[feature][frame].
double metric_npss_series(const std::vector<std::vector<double>>& pred, const std::vector<std::vector<double>>& truth,
                          Exec exec = Exec::Parallel);

// Mean of |p[t+1] - 2 p[t] + p[t-1]| over joints and interior frames, in
// frame-step units. TooFewFrames when F < 3.
double metric_acceleration(const PositionSequence& seq);

struct MetricReport {
    double euclidean = 0.0;
    double npss = 0.0;
    double acceleration_pred = 0.0;
    double acceleration_truth = 0.0;
    double acceleration_error = 0.0;
    double frame_time = 0.0;
    std::size_t frames = 0;
    std::size_t joints = 0;

    std::string to_json() const;
    static MetricReport from_json(const std::string& text);  // FormatError
    friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

MetricReport metric_report(const PositionSequence& pred, const PositionSequence& truth, double frame_time = 0.0,
                           Exec exec = Exec::Parallel);
MetricReport metric_report(const Skeleton& skeleton, const std::vector<LocalPose>& pred,
                           const std::vector<LocalPose>& truth, double frame_time = 0.0, Exec exec = Exec::Parallel);

// Sliding-window evaluation: windows start at i * stride for i < seeds while
// the window of `horizon` frames still fits. horizon 0 means the full length.
struct WindowedMetrics {
    std::size_t horizon = 0;
    std::size_t stride = 0;
    std::size_t seeds = 0;
    std::vector<std::size_t> starts;
    MetricReport mean;  // component-wise mean over windows
    std::vector<MetricReport> windows;

    std::string to_json() const;
};

// TooFewFrames when no window fits; LengthMismatch on differing lengths.
WindowedMetrics metric_windows(const PositionSequence& pred, const PositionSequence& truth, std::size_t horizon,
                               std::size_t seeds, std::size_t stride, double frame_time = 0.0,
                               Exec exec = Exec::Parallel);

}  // namespace dqm
