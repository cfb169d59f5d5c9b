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

#ifndef PATHVC_SIGNAL_H_
#define PATHVC_SIGNAL_H_

// Audio container and the one-third-octave spectral front end shared by the
// STOI family of metrics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "pathvc/error.h"

namespace pathvc {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Mono PCM signal. Samples are nominally in [-1, 1].
template <typename Scalar>
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(Vector<Scalar> samples, int sample_rate)
      : samples_(std::move(samples)), sample_rate_(sample_rate) {
    if (sample_rate_ <= 0)
      throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
    if (!samples_.allFinite())
      throw Error(ErrorCode::kInvalidArgument, "audio samples must be finite");
  }

  const Vector<Scalar>& samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  Eigen::Index size() const { return samples_.size(); }
  double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  Vector<Scalar> samples_;
  int sample_rate_ = 16000;
};

using AudioBufferd = AudioBuffer<double>;

/// Canonical STOI/ESTOI analysis constants.
struct FrontEndConfig {
  int analysis_rate = 10000;
  int fft_size = 512;
  int window_samples = 256;
  int hop_samples = 128;
  int num_bands = 15;
  double lowest_band_center = 150.0;
  double silence_dynamic_range_db = 40.0;
  int segment_frames = 30;
  double clip_bound_db = -15.0;

  void Validate() const {
    if (analysis_rate <= 0 || fft_size < window_samples || window_samples <= 0)
      throw Error(ErrorCode::kInvalidArgument, "bad front-end sizes");
    if (2 * hop_samples != window_samples)
      throw Error(ErrorCode::kInvalidArgument,
                  "hop must be half the analysis window");
    if (num_bands < 1 || segment_frames < 1)
      throw Error(ErrorCode::kInvalidArgument, "bad band/segment count");
    if (!(clip_bound_db < 0.0))
      throw Error(ErrorCode::kInvalidArgument, "clip bound must be negative");
  }
};

template <typename Scalar>
struct MagnitudeSpectrogram {
  Matrix<Scalar> values;  // frames x (fft_size / 2 + 1)
  int window_samples = 0;
  int hop_samples = 0;

  Eigen::Index frames() const { return values.rows(); }
  Eigen::Index bins() const { return values.cols(); }
};

template <typename Scalar>
struct BandSpectrogram {
  Matrix<Scalar> energies;  // frames x bands
  std::vector<double> band_centers;
  std::vector<double> band_low;
  std::vector<double> band_high;

  Eigen::Index frames() const { return energies.rows(); }
  Eigen::Index bands() const { return energies.cols(); }
};

// Read a RIFF/WAVE file holding 16-bit mono PCM.
AudioBufferd LoadWav(const std::string& path);
// Write 16-bit mono PCM; samples are clipped to [-1, 1 - 2^-15].
void WriteWav(const std::string& path, const AudioBufferd& audio);

namespace internal {

/// Periodic Hann; overlap-adds to exactly one at 50% hop.
template <typename Scalar>
Vector<Scalar> HannWindow(int length) {
  Vector<Scalar> w(length);
  for (int n = 0; n < length; ++n)
    w(n) = Scalar(0.5) -
           Scalar(0.5) * std::cos(Scalar(2 * M_PI) * n / Scalar(length));
  return w;
}

inline double Sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(M_PI * x) / (M_PI * x);
}

inline Eigen::Index FrameCount(Eigen::Index length, int window, int hop) {
  if (length < window) return 0;
  return (length - window) / hop + 1;
}

}  // namespace internal

/// Rational-ratio windowed-sinc resampler (Kaiser window, 64 taps per
/// output phase). Output length is ceil(n * target / source).
template <typename Scalar>
AudioBuffer<Scalar> Resample(const AudioBuffer<Scalar>& audio,
                             int target_rate) {
  if (target_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "target rate must be positive");
  const int source_rate = audio.sample_rate();
  if (source_rate == target_rate) return audio;

  constexpr int kTaps = 64;
  constexpr int kHalf = kTaps / 2;
  constexpr double kBeta = 10.0;
  constexpr double kRolloff = 0.95;

  const long g = std::gcd(source_rate, target_rate);
  const long up = target_rate / g;
  const long down = source_rate / g;
  const double cutoff =
      kRolloff * std::min(1.0, static_cast<double>(up) / down);
  const double i0_beta = std::cyl_bessel_i(0.0, kBeta);

  // One row of weights per fractional phase p/up.
  Matrix<double> table(up, kTaps);
  for (long p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / up;
    for (int t = 0; t < kTaps; ++t) {
      const double tau = (t - kHalf + 1) - frac;
      const double u = tau / kHalf;
      const double win =
          std::abs(u) >= 1.0
              ? 0.0
              : std::cyl_bessel_i(0.0, kBeta * std::sqrt(1.0 - u * u)) /
                    i0_beta;
      table(p, t) = cutoff * internal::Sinc(cutoff * tau) * win;
    }
    table.row(p) /= table.row(p).sum();
  }

  const Vector<Scalar>& x = audio.samples();
  const Eigen::Index n_in = x.size();
  const Eigen::Index n_out = (n_in * up + down - 1) / down;
  Vector<Scalar> y(n_out);
  for (Eigen::Index k = 0; k < n_out; ++k) {
    const long long num = static_cast<long long>(k) * down;
    const Eigen::Index base = num / up;
    const long phase = num % up;
    double acc = 0.0;
    for (int t = 0; t < kTaps; ++t) {
      const Eigen::Index idx = base + t - kHalf + 1;
      if (idx < 0 || idx >= n_in) continue;
      acc += table(phase, t) * static_cast<double>(x(idx));
    }
    y(k) = static_cast<Scalar>(acc);
  }
  return AudioBuffer<Scalar>(std::move(y), target_rate);
}

/// Energy-based frame removal driven by the reference signal. Frames whose
/// windowed reference energy lies more than the configured dynamic range
/// below the loudest frame are dropped from both signals, and the survivors
/// are overlap-added. Both inputs are truncated to the shorter length.
template <typename Scalar>
std::pair<AudioBuffer<Scalar>, AudioBuffer<Scalar>> RemoveSilentFrames(
    const AudioBuffer<Scalar>& reference, const AudioBuffer<Scalar>& degraded,
    const FrontEndConfig& cfg) {
  cfg.Validate();
  if (reference.sample_rate() != degraded.sample_rate())
    throw Error(ErrorCode::kInvalidArgument, "sample rates differ");
  const int win = cfg.window_samples;
  const int hop = cfg.hop_samples;
  const Eigen::Index len = std::min(reference.size(), degraded.size());
  const Eigen::Index frames = internal::FrameCount(len, win, hop);
  if (frames == 0)
    throw Error(ErrorCode::kTooShort, "signal shorter than one frame");

  const Vector<Scalar> w = internal::HannWindow<Scalar>(win);
  std::vector<double> norms(frames);
  for (Eigen::Index f = 0; f < frames; ++f) {
    norms[f] = static_cast<double>(
        reference.samples().segment(f * hop, win).cwiseProduct(w).norm());
  }
  const double max_norm = *std::max_element(norms.begin(), norms.end());
  if (max_norm == 0.0)
    throw Error(ErrorCode::kAllSilent, "reference is digitally silent");

  const double eps = std::numeric_limits<double>::epsilon();
  const double max_db = 20.0 * std::log10(max_norm + eps);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index f = 0; f < frames; ++f) {
    const double db = 20.0 * std::log10(norms[f] + eps);
    if (max_db - cfg.silence_dynamic_range_db - db < 0.0) kept.push_back(f);
  }
  if (kept.empty())
    throw Error(ErrorCode::kAllSilent, "all reference frames are silent");

  const Eigen::Index out_len =
      static_cast<Eigen::Index>(kept.size() - 1) * hop + win;
  Vector<Scalar> ref_out = Vector<Scalar>::Zero(out_len);
  Vector<Scalar> deg_out = Vector<Scalar>::Zero(out_len);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Eigen::Index src = kept[k] * hop;
    const Eigen::Index dst = static_cast<Eigen::Index>(k) * hop;
    ref_out.segment(dst, win) +=
        reference.samples().segment(src, win).cwiseProduct(w);
    deg_out.segment(dst, win) +=
        degraded.samples().segment(src, win).cwiseProduct(w);
  }
  return {AudioBuffer<Scalar>(std::move(ref_out), reference.sample_rate()),
          AudioBuffer<Scalar>(std::move(deg_out), degraded.sample_rate())};
}

/// Short-time magnitude spectrum; trailing partial frames are dropped.
template <typename Scalar>
MagnitudeSpectrogram<Scalar> Stft(const AudioBuffer<Scalar>& audio,
                                  const FrontEndConfig& cfg) {
  cfg.Validate();
  const int win = cfg.window_samples;
  const int hop = cfg.hop_samples;
  const int nfft = cfg.fft_size;
  const int bins = nfft / 2 + 1;
  const Eigen::Index frames = internal::FrameCount(audio.size(), win, hop);

  MagnitudeSpectrogram<Scalar> spec;
  spec.window_samples = win;
  spec.hop_samples = hop;
  spec.values.resize(frames, bins);

  const Vector<Scalar> w = internal::HannWindow<Scalar>(win);
  Eigen::FFT<Scalar> fft;
  std::vector<Scalar> frame(nfft, Scalar(0));
  std::vector<std::complex<Scalar>> out;
  for (Eigen::Index f = 0; f < frames; ++f) {
    for (int n = 0; n < win; ++n)
      frame[n] = audio.samples()(f * hop + n) * w(n);
    fft.fwd(out, frame);
    for (int b = 0; b < bins; ++b) spec.values(f, b) = std::abs(out[b]);
  }
  return spec;
}

/// One-third-octave band matrix (bands x bins) with the bin ranges that the
/// reference STOI implementation assigns to each band.
template <typename Scalar>
struct ThirdOctaveBands {
  Matrix<Scalar> membership;
  std::vector<double> centers, low, high;
};

template <typename Scalar>
ThirdOctaveBands<Scalar> MakeThirdOctaveBands(const FrontEndConfig& cfg) {
  const int bins = cfg.fft_size / 2 + 1;
  ThirdOctaveBands<Scalar> tob;
  tob.membership = Matrix<Scalar>::Zero(cfg.num_bands, bins);
  auto nearest_bin = [&](double hz) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * cfg.analysis_rate / cfg.fft_size;
      const double d = (f - hz) * (f - hz);
      if (d < best_d) {
        best_d = d;
        best = b;
      }
    }
    return best;
  };
  for (int k = 0; k < cfg.num_bands; ++k) {
    const double center = cfg.lowest_band_center * std::pow(2.0, k / 3.0);
    const double lo =
        cfg.lowest_band_center * std::pow(2.0, (2.0 * k - 1.0) / 6.0);
    const double hi =
        cfg.lowest_band_center * std::pow(2.0, (2.0 * k + 1.0) / 6.0);
    tob.centers.push_back(center);
    tob.low.push_back(lo);
    tob.high.push_back(hi);
    const int first = nearest_bin(lo);
    const int last = nearest_bin(hi);
    for (int b = first; b < last; ++b) tob.membership(k, b) = Scalar(1);
  }
  return tob;
}

/// Per-frame one-third-octave band amplitudes: sqrt of summed squared STFT
/// magnitudes over each band's bins. Audio must already be at the analysis
/// rate.
template <typename Scalar>
BandSpectrogram<Scalar> BandDecompose(const AudioBuffer<Scalar>& audio,
                                      const FrontEndConfig& cfg) {
  cfg.Validate();
  if (audio.sample_rate() != cfg.analysis_rate)
    throw Error(ErrorCode::kInvalidArgument,
                "band decomposition expects audio at " +
                    std::to_string(cfg.analysis_rate) + " Hz");
  const MagnitudeSpectrogram<Scalar> spec = Stft(audio, cfg);
  if (spec.frames() < cfg.segment_frames)
    throw Error(ErrorCode::kTooShort,
                std::to_string(spec.frames()) + " frames, need " +
                    std::to_string(cfg.segment_frames));
  const ThirdOctaveBands<Scalar> tob = MakeThirdOctaveBands<Scalar>(cfg);
  BandSpectrogram<Scalar> bands;
  bands.energies =
      (spec.values.array().square().matrix() * tob.membership.transpose())
          .array()
          .sqrt()
          .matrix();
  bands.band_centers = tob.centers;
  bands.band_low = tob.low;
  bands.band_high = tob.high;
  return bands;
}

}  // namespace pathvc

#endif  // PATHVC_SIGNAL_H_
