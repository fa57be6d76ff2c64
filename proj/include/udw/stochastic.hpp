#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "udw/detection.hpp"

namespace udw {

// 2x2 cross-spectral matrix [[diag, offdiag], [offdiag, diag]] at one
// frequency.  Positive semidefinite iff diag >= |offdiag|.
struct PairSpectrum {
  double diag = 0.0;
  double offdiag = 0.0;
};
using PairSpectrumFn = std::function<PairSpectrum(double)>;

// Spectral matrix of the two field records at separation delta/c_s, built
// from the diagonal and off-diagonal response functions.
PairSpectrumFn field_pair_spectrum(double delta_over_cs);

// Signed FFT frequency grid in natural (wrap-around) order.
std::vector<double> fft_frequency_grid(std::size_t n, double sample_rate);

struct TimeSeries {
  double sample_rate = 1.0;
  std::uint64_t seed = 0;
  std::vector<std::complex<double>> samples;
};

struct TimeSeriesPair {
  double sample_rate = 1.0;
  std::uint64_t seed = 0;
  std::vector<std::complex<double>> first;
  std::vector<std::complex<double>> second;
};

// Frequency-domain synthesis of a correlated complex Gaussian record pair:
// per bin, a 2-vector of independent complex normals is colored by the
// Cholesky factor of the target matrix and inverse-transformed.  n_samples
// must be a power of two.  Throws if any bin matrix has an eigenvalue below
// -1e-12 (an invalid response model).
TimeSeriesPair synthesize_field_pair(const PairSpectrumFn& spectrum,
                                     std::size_t n_samples, double sample_rate,
                                     std::uint64_t seed);

// Single-record synthesis against a scalar target density.  The record is
// complex baseband, so asymmetric (signed-frequency) spectra are exact.
TimeSeries synthesize_record(const std::function<double(double)>& target_psd,
                             std::size_t n_samples, double sample_rate,
                             std::uint64_t seed, std::uint64_t stream);

// Heterodyne photocurrent record for one beamsplitter branch, target
// (mu^2/2)(F_branch + N) including the sgn(nu) asymmetry.
TimeSeries synthesize_photocurrent(Branch branch, const DetectionModel& model,
                                   std::size_t n_samples, double sample_rate,
                                   std::uint64_t seed);

// Welch estimate: Hann window, 50% overlap, density normalization (a white
// unit-variance record reads 1/sample_rate).  Frequencies ascending.
struct PsdEstimate {
  double sample_rate = 1.0;
  std::size_t n_segments = 0;
  std::vector<double> frequency;
  std::vector<double> value;
  std::vector<double> std_error;  // value / sqrt(n_segments)
};
PsdEstimate welch_psd(std::span<const std::complex<double>> record,
                      double sample_rate, std::size_t segment_len);

struct CrossSpectrumEstimate {
  double sample_rate = 1.0;
  std::size_t n_segments = 0;
  std::vector<double> frequency;
  std::vector<std::complex<double>> value;
  std::vector<double> std_error;
};
CrossSpectrumEstimate welch_cross_psd(std::span<const std::complex<double>> a,
                                      std::span<const std::complex<double>> b,
                                      double sample_rate,
                                      std::size_t segment_len);

// Exact expectation of welch_psd applied to a record of n_samples points
// synthesized from target_psd: the analytic spectrum seen through the Hann
// resolution kernel.  Removes the smoothing bias from Monte-Carlo z-scores
// near spectral steps.  Ascending frequency order, aligned with welch_psd.
std::vector<double> welch_expected_psd(
    const std::function<double(double)>& target_psd, std::size_t n_samples,
    double sample_rate, std::size_t segment_len);

// Sum-branch minus difference-branch PSD estimate from two records with
// independent noise streams but identical model constants.  `analytic` is
// the closed-form witness mu^2 Theta(-nu) J0; `expected` is the same signal
// seen through the estimator resolution (use it for z-scores); std_error is
// the combined standard error of the two branch estimates, including the
// variance inflation from half-overlapped Hann segments.
struct WitnessEstimate {
  double sample_rate = 1.0;
  std::size_t n_segments = 0;
  std::vector<double> frequency;
  std::vector<double> value;
  std::vector<double> std_error;
  std::vector<double> analytic;
  std::vector<double> expected;
};
WitnessEstimate monte_carlo_witness(const DetectionModel& model,
                                    std::size_t n_samples, double sample_rate,
                                    std::size_t segment_len,
                                    std::uint64_t seed);

}  // namespace udw
