#include "dqmotion/metrics.hpp"

#include <cmath>
#include <complex>
#include <memory>

#include <fftw3.h>

#include <json.hpp>

#include "dqmotion/error.hpp"
#include "parallel.hpp"

namespace dqm {

namespace {

void check_pair(const PositionSequence& pred, const PositionSequence& truth) {
    if (pred.size() != truth.size()) {
        throw Error(ErrorCode::LengthMismatch, "sequences hold " + std::to_string(pred.size()) + " and " +
                                                   std::to_string(truth.size()) + " frames");
    }
    for (std::size_t f = 0; f < pred.size(); ++f) {
        if (pred[f].size() != truth[f].size() || pred[f].size() != pred.front().size()) {
            throw Error(ErrorCode::LengthMismatch, "joint counts differ at frame " + std::to_string(f));
        }
    }
}

std::vector<std::vector<double>> coordinate_series(const PositionSequence& seq) {
    const std::size_t frames = seq.size();
    const std::size_t joints = frames ? seq.front().size() : 0;
    std::vector<std::vector<double>> series(joints * 3, std::vector<double>(frames));
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t j = 0; j < joints; ++j) {
            for (int a = 0; a < 3; ++a) series[j * 3 + a][f] = seq[f][j][a];
        }
    }
    return series;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

// Cumulative normalized power spectrum and total power of one real signal.
double cumulative_spectrum(fftw_plan plan, std::vector<double>& in, std::vector<std::complex<double>>& half,
                           std::vector<double>& cumulative) {
    const std::size_t n = in.size();
    fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(half.data()));
    std::vector<double> power(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::complex<double> c = k <= n / 2 ? half[k] : std::conj(half[n - k]);
        power[k] = std::norm(c);
    }
    double total = 0.0;
    for (double p : power) total += p;
    double running = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        running += total > 0.0 ? power[k] / total : (k == 0 ? 1.0 : 0.0);
        cumulative[k] = running;
    }
    return total;
}

}  // namespace

PositionSequence joint_positions(const Skeleton& skeleton, const std::vector<LocalPose>& poses, Exec exec) {
    PositionSequence out(poses.size());
    const auto& encoded = skeleton.encoded_joints();
    detail::for_each_index(poses.size(), exec, [&](std::size_t f) {
        const auto frames = matrix_fk(skeleton, poses[f]);
        out[f].resize(encoded.size());
        for (std::size_t k = 0; k < encoded.size(); ++k) out[f][k] = frames[encoded[k]].position;
    });
    return out;
}

double metric_euclidean(const PositionSequence& pred, const PositionSequence& truth) {
    check_pair(pred, truth);
    if (pred.empty() || pred.front().empty()) throw Error(ErrorCode::TooFewFrames, "euclidean error needs a frame");
    double sum = 0.0;
    for (std::size_t f = 0; f < pred.size(); ++f) {
        double frame = 0.0;
        for (std::size_t j = 0; j < pred[f].size(); ++j) frame += norm(pred[f][j] - truth[f][j]);
        sum += frame / static_cast<double>(pred[f].size());
    }
    return sum / static_cast<double>(pred.size());
}

double metric_npss_series(const std::vector<std::vector<double>>& pred, const std::vector<std::vector<double>>& truth,
                          Exec exec) {
    if (pred.size() != truth.size()) throw Error(ErrorCode::LengthMismatch, "feature counts differ");
    if (pred.empty()) throw Error(ErrorCode::TooFewFrames, "no features");
    const std::size_t n = pred.front().size();
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i].size() != n || truth[i].size() != n) throw Error(ErrorCode::LengthMismatch, "series lengths differ");
    }
    if (n < 2) throw Error(ErrorCode::TooFewFrames, "power spectrum similarity needs at least 2 frames");

    // Planning is not thread safe; the plan itself is reused with new arrays.
    std::vector<double> probe_in(n);
    std::vector<std::complex<double>> probe_out(n / 2 + 1);
    std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
#pragma omp critical(dqm_fftw_planner)
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), probe_in.data(),
                                    reinterpret_cast<fftw_complex*>(probe_out.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED));
    if (!plan) throw Error(ErrorCode::NotApplicable, "FFT planning failed");

    const std::size_t features = pred.size();
    std::vector<double> distance(features);
    std::vector<double> weight(features);
    detail::for_each_index(features, exec, [&](std::size_t i) {
        std::vector<double> in(n);
        std::vector<std::complex<double>> half(n / 2 + 1);
        std::vector<double> cum_pred(n);
        std::vector<double> cum_truth(n);
        in = pred[i];
        cumulative_spectrum(plan.get(), in, half, cum_pred);
        in = truth[i];
        weight[i] = cumulative_spectrum(plan.get(), in, half, cum_truth);
        double d = 0.0;
        for (std::size_t k = 0; k < n; ++k) d += std::abs(cum_pred[k] - cum_truth[k]);
        distance[i] = d;
    });

    double total_weight = 0.0;
    for (double w : weight) total_weight += w;
    double acc = 0.0;
    for (std::size_t i = 0; i < features; ++i) {
        acc += total_weight > 0.0 ? weight[i] * distance[i] : distance[i];
    }
    return total_weight > 0.0 ? acc / total_weight : acc / static_cast<double>(features);
}

double metric_npss(const PositionSequence& pred, const PositionSequence& truth, Exec exec) {
    check_pair(pred, truth);
    if (pred.size() < 2) throw Error(ErrorCode::TooFewFrames, "power spectrum similarity needs at least 2 frames");
    return metric_npss_series(coordinate_series(pred), coordinate_series(truth), exec);
}

double metric_acceleration(const PositionSequence& seq) {
    if (seq.size() < 3) throw Error(ErrorCode::TooFewFrames, "acceleration needs at least 3 frames");
    const std::size_t joints = seq.front().size();
    if (joints == 0) throw Error(ErrorCode::TooFewFrames, "acceleration needs a joint");
    double sum = 0.0;
    for (std::size_t t = 1; t + 1 < seq.size(); ++t) {
        if (seq[t - 1].size() != joints || seq[t].size() != joints || seq[t + 1].size() != joints) {
            throw Error(ErrorCode::LengthMismatch, "joint counts differ at frame " + std::to_string(t));
        }
        double frame = 0.0;
        for (std::size_t j = 0; j < joints; ++j) {
            frame += norm(seq[t + 1][j] - 2.0 * seq[t][j] + seq[t - 1][j]);
        }
        sum += frame / static_cast<double>(joints);
    }
    return sum / static_cast<double>(seq.size() - 2);
}

MetricReport metric_report(const PositionSequence& pred, const PositionSequence& truth, double frame_time,
                           Exec exec) {
    MetricReport r;
    r.euclidean = metric_euclidean(pred, truth);
    r.npss = metric_npss(pred, truth, exec);
    r.acceleration_pred = metric_acceleration(pred);
    r.acceleration_truth = metric_acceleration(truth);
    r.acceleration_error = std::abs(r.acceleration_pred - r.acceleration_truth);
    r.frame_time = frame_time;
    r.frames = pred.size();
    r.joints = pred.front().size();
    return r;
}

MetricReport metric_report(const Skeleton& skeleton, const std::vector<LocalPose>& pred,
                           const std::vector<LocalPose>& truth, double frame_time, Exec exec) {
    if (pred.size() != truth.size()) throw Error(ErrorCode::LengthMismatch, "sequences differ in length");
    return metric_report(joint_positions(skeleton, pred, exec), joint_positions(skeleton, truth, exec), frame_time,
                         exec);
}

namespace {

nlohmann::json report_json(const MetricReport& r) {
    return {{"euclidean", r.euclidean},
            {"npss", r.npss},
            {"acceleration_pred", r.acceleration_pred},
            {"acceleration_truth", r.acceleration_truth},
            {"acceleration_error", r.acceleration_error},
            {"frame_time", r.frame_time},
            {"frames", r.frames},
            {"joints", r.joints},
            {"acceleration_units", "length/frame^2"}};
}

}  // namespace

std::string MetricReport::to_json() const {
    nlohmann::json j = report_json(*this);
    j["schema_version"] = 1;
    return j.dump(2);
}

MetricReport MetricReport::from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        MetricReport r;
        r.euclidean = j.at("euclidean").get<double>();
        r.npss = j.at("npss").get<double>();
        r.acceleration_pred = j.at("acceleration_pred").get<double>();
        r.acceleration_truth = j.at("acceleration_truth").get<double>();
        r.acceleration_error = j.at("acceleration_error").get<double>();
        r.frame_time = j.at("frame_time").get<double>();
        r.frames = j.at("frames").get<std::size_t>();
        r.joints = j.at("joints").get<std::size_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::FormatError, std::string("metric report: ") + e.what());
    }
}

WindowedMetrics metric_windows(const PositionSequence& pred, const PositionSequence& truth, std::size_t horizon,
                               std::size_t seeds, std::size_t stride, double frame_time, Exec exec) {
    check_pair(pred, truth);
    const std::size_t frames = pred.size();
    WindowedMetrics out;
    out.horizon = horizon == 0 ? frames : horizon;
    out.stride = stride;
    out.seeds = seeds;
    for (std::size_t i = 0; i < seeds; ++i) {
        const std::size_t start = i * stride;
        if (start + out.horizon > frames) break;
        out.starts.push_back(start);
        if (stride == 0) break;
    }
    if (out.starts.empty()) {
        throw Error(ErrorCode::TooFewFrames, "no window of " + std::to_string(out.horizon) + " frames fits in " +
                                                 std::to_string(frames));
    }
    out.windows.resize(out.starts.size());
    for (std::size_t w = 0; w < out.starts.size(); ++w) {
        const auto begin = static_cast<std::ptrdiff_t>(out.starts[w]);
        const auto end = begin + static_cast<std::ptrdiff_t>(out.horizon);
        const PositionSequence p(pred.begin() + begin, pred.begin() + end);
        const PositionSequence t(truth.begin() + begin, truth.begin() + end);
        out.windows[w] = metric_report(p, t, frame_time, exec);
    }
    MetricReport& m = out.mean;
    const double n = static_cast<double>(out.windows.size());
    for (const auto& r : out.windows) {
        m.euclidean += r.euclidean / n;
        m.npss += r.npss / n;
        m.acceleration_pred += r.acceleration_pred / n;
        m.acceleration_truth += r.acceleration_truth / n;
        m.acceleration_error += r.acceleration_error / n;
    }
    if (out.windows.size() == 1) m = out.windows.front();
    m.frame_time = frame_time;
    m.frames = out.horizon;
    m.joints = pred.front().size();
    return out;
}

std::string WindowedMetrics::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["horizon"] = horizon;
    j["stride"] = stride;
    j["seeds"] = seeds;
    j["window_count"] = windows.size();
    j["starts"] = starts;
    j["mean"] = report_json(mean);
    return j.dump(2);
}

}  // namespace dqm
