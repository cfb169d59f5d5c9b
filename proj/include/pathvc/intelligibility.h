// Copyright (c) 2026 pathvc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PATHVC_INTELLIGIBILITY_H_
#define PATHVC_INTELLIGIBILITY_H_

// STOI, ESTOI and their pathological-speech variants, which score a
// pathological utterance against a DTW-aligned healthy reference built from
// control speakers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathvc/align.h"
#include "pathvc/error.h"
#include "pathvc/signal.h"

namespace pathvc {

enum class Metric { kStoi, kEstoi, kPStoi, kPEstoi };

inline const char* MetricName(Metric m) {
  switch (m) {
    case Metric::kStoi: return "STOI";
    case Metric::kEstoi: return "ESTOI";
    case Metric::kPStoi: return "P-STOI";
    case Metric::kPEstoi: return "P-ESTOI";
  }
  return "?";
}

struct IntelligibilityScore {
  double value = 0.0;
  Metric metric = Metric::kEstoi;
  std::string utterance_id;
  std::string speaker_id;
};

struct SpeakerSeverityScore {
  std::string speaker_id;
  std::string stage;
  double value = 0.0;
  int utterance_count = 0;
};

/// Healthy reference for one sentence, on the timeline of the pivot control.
template <typename Scalar>
struct ReferenceModel {
  std::string sentence_id;
  BandSpectrogram<Scalar> bands;
};

namespace internal {

template <typename Scalar>
Scalar Eps() {
  return std::numeric_limits<Scalar>::epsilon();
}

// In-place: subtract the mean of each column, then scale each column to unit
// norm.
template <typename Derived>
void NormalizeColumns(Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    auto col = m.col(c);
    col.array() -= col.mean();
    col /= col.norm() + Eps<Scalar>();
  }
}

template <typename Derived>
void NormalizeRows(Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    row.array() -= row.mean();
    row /= row.norm() + Eps<Scalar>();
  }
}

}  // namespace internal

/// STOI intermediate measure for one segment (frames x bands): degraded band
/// envelopes are scaled to the reference energy, optionally clipped at the
/// given signal-to-distortion bound, and correlated band by band. Returns the
/// mean correlation over bands.
template <typename DerivedX, typename DerivedY>
double StoiSegment(const Eigen::MatrixBase<DerivedX>& reference,
                   const Eigen::MatrixBase<DerivedY>& degraded,
                   double clip_bound_db, bool clip = true) {
  using Scalar = typename DerivedX::Scalar;
  const Scalar eps = internal::Eps<Scalar>();
  const Scalar clip_gain =
      Scalar(1) + static_cast<Scalar>(std::pow(10.0, -clip_bound_db / 20.0));
  double sum = 0.0;
  for (Eigen::Index b = 0; b < reference.cols(); ++b) {
    Vector<Scalar> x = reference.col(b);
    Vector<Scalar> y = degraded.col(b);
    y *= x.norm() / (y.norm() + eps);
    if (clip) y = y.cwiseMin(x * clip_gain);
    x.array() -= x.mean();
    y.array() -= y.mean();
    x /= x.norm() + eps;
    y /= y.norm() + eps;
    sum += static_cast<double>(x.dot(y));
  }
  return sum / static_cast<double>(reference.cols());
}

/// ESTOI intermediate measure for one segment (frames x bands): each band
/// envelope is mean/variance normalised over time, then each frame's
/// spectrum is normalised over bands; the result is the mean over frames of
/// the spectral inner products.
template <typename DerivedX, typename DerivedY>
double EstoiSegment(const Eigen::MatrixBase<DerivedX>& reference,
                    const Eigen::MatrixBase<DerivedY>& degraded) {
  using Scalar = typename DerivedX::Scalar;
  Matrix<Scalar> x = reference;
  Matrix<Scalar> y = degraded;
  internal::NormalizeColumns(x);
  internal::NormalizeColumns(y);
  internal::NormalizeRows(x);
  internal::NormalizeRows(y);
  return static_cast<double>(x.cwiseProduct(y).sum()) /
         static_cast<double>(x.rows());
}

/// Averages a segment measure over all sliding N-frame segments.
template <typename Scalar, typename SegmentFn>
double AverageOverSegments(const Matrix<Scalar>& reference,
                           const Matrix<Scalar>& degraded,
                           const FrontEndConfig& cfg, SegmentFn&& fn) {
  if (reference.rows() != degraded.rows() ||
      reference.cols() != degraded.cols())
    throw Error(ErrorCode::kDimensionMismatch, "band spectrogram shapes differ");
  const Eigen::Index n = cfg.segment_frames;
  const Eigen::Index frames = reference.rows();
  if (frames < n)
    throw Error(ErrorCode::kTooShort, std::to_string(frames) +
                                          " frames, need " + std::to_string(n));
  double sum = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index end = n; end <= frames; ++end, ++count)
    sum += fn(reference.middleRows(end - n, n), degraded.middleRows(end - n, n));
  return sum / static_cast<double>(count);
}

template <typename Scalar>
double StoiFromBands(const BandSpectrogram<Scalar>& reference,
                     const BandSpectrogram<Scalar>& degraded,
                     const FrontEndConfig& cfg) {
  return AverageOverSegments<Scalar>(
      reference.energies, degraded.energies, cfg,
      [&](const auto& x, const auto& y) {
        return StoiSegment(x, y, cfg.clip_bound_db, true);
      });
}

template <typename Scalar>
double EstoiFromBands(const BandSpectrogram<Scalar>& reference,
                      const BandSpectrogram<Scalar>& degraded,
                      const FrontEndConfig& cfg) {
  return AverageOverSegments<Scalar>(
      reference.energies, degraded.energies, cfg,
      [](const auto& x, const auto& y) { return EstoiSegment(x, y); });
}

namespace internal {

template <typename Scalar>
std::pair<BandSpectrogram<Scalar>, BandSpectrogram<Scalar>> PairedFrontEnd(
    const AudioBuffer<Scalar>& reference, const AudioBuffer<Scalar>& degraded,
    const FrontEndConfig& cfg) {
  if (reference.sample_rate() != degraded.sample_rate())
    throw Error(ErrorCode::kInvalidArgument, "sample rates differ");
  const auto x = Resample(reference, cfg.analysis_rate);
  const auto y = Resample(degraded, cfg.analysis_rate);
  const auto [xs, ys] = RemoveSilentFrames(x, y, cfg);
  return {BandDecompose(xs, cfg), BandDecompose(ys, cfg)};
}

}  // namespace internal

/// Classic STOI between time-aligned clean and degraded signals.
template <typename Scalar>
IntelligibilityScore Stoi(const AudioBuffer<Scalar>& reference,
                          const AudioBuffer<Scalar>& degraded,
                          const FrontEndConfig& cfg = {}) {
  const auto [x, y] = internal::PairedFrontEnd(reference, degraded, cfg);
  return {StoiFromBands(x, y, cfg), Metric::kStoi, {}, {}};
}

/// Extended STOI (no clipping, row and column normalisation).
template <typename Scalar>
IntelligibilityScore Estoi(const AudioBuffer<Scalar>& reference,
                           const AudioBuffer<Scalar>& degraded,
                           const FrontEndConfig& cfg = {}) {
  const auto [x, y] = internal::PairedFrontEnd(reference, degraded, cfg);
  return {EstoiFromBands(x, y, cfg), Metric::kEstoi, {}, {}};
}

/// Single-utterance front end used when no time-aligned partner exists:
/// resample, self-referenced silence removal, band decomposition.
template <typename Scalar>
BandSpectrogram<Scalar> UtteranceBands(const AudioBuffer<Scalar>& audio,
                                       const FrontEndConfig& cfg) {
  const auto x = Resample(audio, cfg.analysis_rate);
  const auto trimmed = RemoveSilentFrames(x, x, cfg).first;
  return BandDecompose(trimmed, cfg);
}

/// Warps `source` onto the timeline of `target` using DTW on log-band
/// features.
template <typename Scalar>
BandSpectrogram<Scalar> AlignBands(const BandSpectrogram<Scalar>& source,
                                   const BandSpectrogram<Scalar>& target) {
  const AlignmentPath path = Dtw(DtwFeatures(source), DtwFeatures(target));
  return WarpToReference(source, path, target.frames());
}

/// Builds a sentence reference from control utterances. The control with the
/// median duration (lower median for even counts) is the pivot; the others
/// are aligned to it and the band spectrograms are averaged frame by frame.
template <typename Scalar>
ReferenceModel<Scalar> BuildReference(
    const std::vector<AudioBuffer<Scalar>>& controls,
    const FrontEndConfig& cfg = {}, std::string sentence_id = {}) {
  if (controls.empty())
    throw Error(ErrorCode::kEmptyControlSet,
                "no control utterances for sentence '" + sentence_id + "'");
  std::vector<std::size_t> order(controls.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return controls[a].duration() < controls[b].duration();
  });
  const std::size_t pivot = order[(order.size() - 1) / 2];

  ReferenceModel<Scalar> model;
  model.sentence_id = std::move(sentence_id);
  model.bands = UtteranceBands(controls[pivot], cfg);
  Matrix<Scalar> sum = model.bands.energies;
  for (std::size_t k = 0; k < controls.size(); ++k) {
    if (k == pivot) continue;
    sum += AlignBands(UtteranceBands(controls[k], cfg), model.bands).energies;
  }
  model.bands.energies = sum / static_cast<Scalar>(controls.size());
  return model;
}

/// Pathological utterance versus a healthy reference. The utterance is
/// aligned and warped to the reference timeline; P-ESTOI then applies the
/// ESTOI body, P-STOI the clipped STOI body.
template <typename Scalar>
IntelligibilityScore PathologicalScore(const AudioBuffer<Scalar>& patho,
                                       const ReferenceModel<Scalar>& reference,
                                       Metric metric,
                                       const FrontEndConfig& cfg = {}) {
  if (reference.bands.frames() < cfg.segment_frames)
    throw Error(ErrorCode::kTooShort, "reference shorter than one segment");
  const auto warped = AlignBands(UtteranceBands(patho, cfg), reference.bands);
  IntelligibilityScore score;
  score.metric = metric;
  if (metric == Metric::kPEstoi)
    score.value = EstoiFromBands(reference.bands, warped, cfg);
  else if (metric == Metric::kPStoi)
    score.value = StoiFromBands(reference.bands, warped, cfg);
  else
    throw Error(ErrorCode::kInvalidArgument,
                "pathological scoring supports P-STOI and P-ESTOI only");
  if (!std::isfinite(score.value))
    throw Error(ErrorCode::kNumericFailure, "non-finite intelligibility score");
  return score;
}

template <typename Scalar>
IntelligibilityScore PEstoiUtterance(const AudioBuffer<Scalar>& patho,
                                     const ReferenceModel<Scalar>& reference,
                                     const FrontEndConfig& cfg = {}) {
  return PathologicalScore(patho, reference, Metric::kPEstoi, cfg);
}

template <typename Scalar>
IntelligibilityScore PStoiUtterance(const AudioBuffer<Scalar>& patho,
                                    const ReferenceModel<Scalar>& reference,
                                    const FrontEndConfig& cfg = {}) {
  return PathologicalScore(patho, reference, Metric::kPStoi, cfg);
}

/// Unweighted mean of one speaker/stage's utterance scores.
SpeakerSeverityScore PEstoiSpeaker(
    const std::vector<IntelligibilityScore>& scores, const std::string& stage);

}  // namespace pathvc

#endif  // PATHVC_INTELLIGIBILITY_H_
