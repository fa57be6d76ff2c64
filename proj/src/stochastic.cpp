#include "udw/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "udw/fft.hpp"
#include "udw/rng.hpp"

namespace udw {
namespace {

constexpr double kPsdTolerance = 1e-12;

// Stream ids carved out of the master seed.
constexpr std::uint64_t kStreamFieldA = 0;
constexpr std::uint64_t kStreamFieldB = 1;
constexpr std::uint64_t kStreamSum = 2;
constexpr std::uint64_t kStreamDifference = 3;

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void require_pow2(std::size_t n, const char* what) {
  if (!is_pow2(n)) {
    throw std::invalid_argument(std::string(what) +
                                " must be a power of two (>= 2)");
  }
}

std::vector<double> hann_window(std::size_t len) {
  std::vector<double> w(len);
  for (std::size_t j = 0; j < len; ++j) {
    w[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * j / len);
  }
  return w;
}

// Ascending-frequency reordering of a natural-order length-n spectrum.
template <typename T>
std::vector<T> fft_shift(const std::vector<T>& natural) {
  const std::size_t n = natural.size();
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = natural[(i + n / 2) % n];
  return out;
}

std::vector<double> ascending_frequencies(std::size_t n, double fs) {
  std::vector<double> f(n);
  const double df = fs / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = (static_cast<double>(i) - static_cast<double>(n / 2)) * df;
  }
  return f;
}

struct WelchFrame {
  std::size_t n_segments = 0;
  std::size_t hop = 0;
  double window_power = 0.0;  // sum of squared window samples
  std::vector<double> window;
};

WelchFrame make_frame(std::size_t n, std::size_t segment_len) {
  require_pow2(segment_len, "welch: segment_len");
  if (segment_len > n) {
    throw std::invalid_argument("welch: segment_len exceeds record length");
  }
  WelchFrame frame;
  frame.hop = segment_len / 2;
  frame.n_segments = (n - segment_len) / frame.hop + 1;
  frame.window = hann_window(segment_len);
  for (double w : frame.window) frame.window_power += w * w;
  return frame;
}

}  // namespace

PairSpectrumFn field_pair_spectrum(double delta_over_cs) {
  return [delta_over_cs](double f) {
    return PairSpectrum{response_diag(f), response_offdiag(f, delta_over_cs)};
  };
}

std::vector<double> fft_frequency_grid(std::size_t n, double sample_rate) {
  std::vector<double> f(n);
  const double df = sample_rate / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto signed_k = (k < n / 2) ? static_cast<double>(k)
                                      : static_cast<double>(k) -
                                            static_cast<double>(n);
    f[k] = signed_k * df;
  }
  return f;
}

TimeSeriesPair synthesize_field_pair(const PairSpectrumFn& spectrum,
                                     std::size_t n_samples, double sample_rate,
                                     std::uint64_t seed) {
  require_pow2(n_samples, "synthesize_field_pair: n_samples");
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("synthesize_field_pair: sample_rate must be > 0");
  }

  const std::vector<double> freqs = fft_frequency_grid(n_samples, sample_rate);
  const GaussianStream za(seed, kStreamFieldA);
  const GaussianStream zb(seed, kStreamFieldB);
  const double amp = std::sqrt(static_cast<double>(n_samples) * sample_rate);

  TimeSeriesPair out;
  out.sample_rate = sample_rate;
  out.seed = seed;
  out.first.resize(n_samples);
  out.second.resize(n_samples);

  for (std::size_t k = 0; k < n_samples; ++k) {
    const PairSpectrum m = spectrum(freqs[k]);
    const double low_eigenvalue = m.diag - std::abs(m.offdiag);
    if (m.diag < -kPsdTolerance || low_eigenvalue < -kPsdTolerance) {
      throw std::domain_error(
          "synthesize_field_pair: spectral matrix has a negative eigenvalue at "
          "f = " +
          std::to_string(freqs[k]));
    }
    const double d = std::max(m.diag, 0.0);
    double l11 = 0.0, l21 = 0.0, l22 = 0.0;
    if (d > 0.0) {
      l11 = std::sqrt(d);
      l21 = m.offdiag / l11;
      l22 = std::sqrt(std::max(d - l21 * l21, 0.0));
    }
    const std::complex<double> z1 = za.complex_normal(k);
    const std::complex<double> z2 = zb.complex_normal(k);
    out.first[k] = amp * l11 * z1;
    out.second[k] = amp * (l21 * z1 + l22 * z2);
  }
  fft_inverse(out.first);
  fft_inverse(out.second);
  return out;
}

TimeSeries synthesize_record(const std::function<double(double)>& target_psd,
                             std::size_t n_samples, double sample_rate,
                             std::uint64_t seed, std::uint64_t stream) {
  require_pow2(n_samples, "synthesize_record: n_samples");
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("synthesize_record: sample_rate must be > 0");
  }
  const std::vector<double> freqs = fft_frequency_grid(n_samples, sample_rate);
  const GaussianStream z(seed, stream);
  const double amp = std::sqrt(static_cast<double>(n_samples) * sample_rate);

  TimeSeries out;
  out.sample_rate = sample_rate;
  out.seed = seed;
  out.samples.resize(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double s = target_psd(freqs[k]);
    if (s < -kPsdTolerance) {
      throw std::domain_error("synthesize_record: negative target density at f = " +
                              std::to_string(freqs[k]));
    }
    out.samples[k] = amp * std::sqrt(std::max(s, 0.0)) * z.complex_normal(k);
  }
  fft_inverse(out.samples);
  return out;
}

TimeSeries synthesize_photocurrent(Branch branch, const DetectionModel& model,
                                   std::size_t n_samples, double sample_rate,
                                   std::uint64_t seed) {
  const std::uint64_t stream =
      (branch == Branch::sum) ? kStreamSum : kStreamDifference;
  auto target = [branch, &model](double f) { return model.psd(branch, f); };
  return synthesize_record(target, n_samples, sample_rate, seed, stream);
}

PsdEstimate welch_psd(std::span<const std::complex<double>> record,
                      double sample_rate, std::size_t segment_len) {
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("welch_psd: sample_rate must be > 0");
  }
  const WelchFrame frame = make_frame(record.size(), segment_len);

  std::vector<double> accum(segment_len, 0.0);
  std::vector<std::complex<double>> buf(segment_len);
  for (std::size_t s = 0; s < frame.n_segments; ++s) {
    const std::size_t off = s * frame.hop;
    for (std::size_t j = 0; j < segment_len; ++j) {
      buf[j] = frame.window[j] * record[off + j];
    }
    fft_forward(buf);
    for (std::size_t k = 0; k < segment_len; ++k) accum[k] += std::norm(buf[k]);
  }

  const double scale =
      1.0 / (static_cast<double>(frame.n_segments) * sample_rate *
             frame.window_power);
  for (double& v : accum) v *= scale;

  PsdEstimate est;
  est.sample_rate = sample_rate;
  est.n_segments = frame.n_segments;
  est.frequency = ascending_frequencies(segment_len, sample_rate);
  est.value = fft_shift(accum);
  est.std_error.resize(segment_len);
  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(frame.n_segments));
  for (std::size_t k = 0; k < segment_len; ++k) {
    est.std_error[k] = est.value[k] * inv_sqrt_k;
  }
  return est;
}

CrossSpectrumEstimate welch_cross_psd(std::span<const std::complex<double>> a,
                                      std::span<const std::complex<double>> b,
                                      double sample_rate,
                                      std::size_t segment_len) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("welch_cross_psd: records differ in length");
  }
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("welch_cross_psd: sample_rate must be > 0");
  }
  const WelchFrame frame = make_frame(a.size(), segment_len);

  std::vector<std::complex<double>> cross(segment_len, 0.0);
  std::vector<double> paa(segment_len, 0.0), pbb(segment_len, 0.0);
  std::vector<std::complex<double>> fa(segment_len), fb(segment_len);
  for (std::size_t s = 0; s < frame.n_segments; ++s) {
    const std::size_t off = s * frame.hop;
    for (std::size_t j = 0; j < segment_len; ++j) {
      fa[j] = frame.window[j] * a[off + j];
      fb[j] = frame.window[j] * b[off + j];
    }
    fft_forward(fa);
    fft_forward(fb);
    for (std::size_t k = 0; k < segment_len; ++k) {
      cross[k] += fa[k] * std::conj(fb[k]);
      paa[k] += std::norm(fa[k]);
      pbb[k] += std::norm(fb[k]);
    }
  }

  const double scale =
      1.0 / (static_cast<double>(frame.n_segments) * sample_rate *
             frame.window_power);
  CrossSpectrumEstimate est;
  est.sample_rate = sample_rate;
  est.n_segments = frame.n_segments;
  est.frequency = ascending_frequencies(segment_len, sample_rate);
  std::vector<std::complex<double>> value(segment_len);
  std::vector<double> se(segment_len);
  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(frame.n_segments));
  for (std::size_t k = 0; k < segment_len; ++k) {
    value[k] = cross[k] * scale;
    se[k] = std::sqrt(paa[k] * scale * pbb[k] * scale) * inv_sqrt_k;
  }
  est.value = fft_shift(value);
  est.std_error = fft_shift(se);
  return est;
}

std::vector<double> welch_expected_psd(
    const std::function<double(double)>& target_psd, std::size_t n_samples,
    double sample_rate, std::size_t segment_len) {
  require_pow2(n_samples, "welch_expected_psd: n_samples");
  const WelchFrame frame = make_frame(n_samples, segment_len);
  const std::size_t n = n_samples;
  const std::size_t len = segment_len;
  const std::size_t ratio = n / len;

  // Hann DFT through the Dirichlet kernel: W(t) = sum_j w_j e^{2 pi i j t}
  // with w_j = 1/2 - (1/4) e^{2 pi i j/L} - (1/4) e^{-2 pi i j/L}.
  const auto dirichlet = [len](double t) -> std::complex<double> {
    const double frac = t - std::round(t);
    if (std::abs(frac) < 1e-13) return {static_cast<double>(len), 0.0};
    const double num = std::sin(std::numbers::pi * len * t);
    const double den = std::sin(std::numbers::pi * t);
    return std::polar(num / den, std::numbers::pi * (len - 1.0) * t);
  };
  const auto hann_kernel_sq = [&](double t) {
    const std::complex<double> w = 0.5 * dirichlet(t) -
                                   0.25 * dirichlet(t - 1.0 / len) -
                                   0.25 * dirichlet(t + 1.0 / len);
    return std::norm(w);
  };

  // The kernel is truncated at 8 output bins per side, which discards about
  // 1e-6 of the sidelobe mass: five orders below the Monte-Carlo standard
  // errors this expectation feeds.  Clamped so the circular sum never covers
  // a bin twice.
  const std::ptrdiff_t reach =
      std::min(static_cast<std::ptrdiff_t>(8 * ratio),
               static_cast<std::ptrdiff_t>((n - 1) / 2));
  std::vector<double> kernel(2 * reach + 1);
  for (std::ptrdiff_t m = -reach; m <= reach; ++m) {
    kernel[m + reach] = hann_kernel_sq(static_cast<double>(m) / n);
  }

  const std::vector<double> freqs = fft_frequency_grid(n, sample_rate);
  std::vector<double> s_f(n);
  for (std::size_t f = 0; f < n; ++f) s_f[f] = target_psd(freqs[f]);

  std::vector<double> natural(len, 0.0);
  const double scale = 1.0 / (frame.window_power * static_cast<double>(n));
  for (std::size_t k = 0; k < len; ++k) {
    const std::ptrdiff_t center = static_cast<std::ptrdiff_t>(k * ratio);
    double acc = 0.0;
    for (std::ptrdiff_t m = -reach; m <= reach; ++m) {
      const std::size_t f =
          static_cast<std::size_t>((center + m + static_cast<std::ptrdiff_t>(n)) %
                                   static_cast<std::ptrdiff_t>(n));
      acc += s_f[f] * kernel[m + reach];
    }
    natural[k] = acc * scale;
  }
  return fft_shift(natural);
}

WitnessEstimate monte_carlo_witness(const DetectionModel& model,
                                    std::size_t n_samples, double sample_rate,
                                    std::size_t segment_len,
                                    std::uint64_t seed) {
  const TimeSeries sum_rec =
      synthesize_photocurrent(Branch::sum, model, n_samples, sample_rate, seed);
  const TimeSeries diff_rec = synthesize_photocurrent(
      Branch::difference, model, n_samples, sample_rate, seed);
  const PsdEstimate sum_est = welch_psd(sum_rec.samples, sample_rate, segment_len);
  const PsdEstimate diff_est =
      welch_psd(diff_rec.samples, sample_rate, segment_len);

  auto sum_target = [&model](double f) { return model.psd(Branch::sum, f); };
  auto diff_target = [&model](double f) {
    return model.psd(Branch::difference, f);
  };
  const std::vector<double> sum_expected =
      welch_expected_psd(sum_target, n_samples, sample_rate, segment_len);
  const std::vector<double> diff_expected =
      welch_expected_psd(diff_target, n_samples, sample_rate, segment_len);

  WitnessEstimate est;
  est.sample_rate = sample_rate;
  est.n_segments = sum_est.n_segments;
  est.frequency = sum_est.frequency;
  const std::size_t len = segment_len;
  est.value.resize(len);
  est.std_error.resize(len);
  est.analytic.resize(len);
  est.expected.resize(len);
  // Adjacent half-overlapped Hann segments have periodogram correlation
  // (1/6)^2; the averaged estimate variance is inflated accordingly.
  const double segments = static_cast<double>(sum_est.n_segments);
  const double overlap_inflation =
      1.0 + 2.0 * (1.0 / 36.0) * (segments - 1.0) / segments;
  const double inv_sqrt_k = std::sqrt(overlap_inflation / segments);
  for (std::size_t k = 0; k < len; ++k) {
    est.value[k] = sum_est.value[k] - diff_est.value[k];
    est.std_error[k] =
        std::hypot(sum_expected[k], diff_expected[k]) * inv_sqrt_k;
    est.analytic[k] = model.witness(est.frequency[k]);
    est.expected[k] = sum_expected[k] - diff_expected[k];
  }
  return est;
}

}  // namespace udw
