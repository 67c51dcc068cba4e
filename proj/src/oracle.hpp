/*
 Copyright 2026 The ofdm-pn Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef OFDMPN_ORACLE_HPP
#define OFDMPN_ORACLE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "analytic.hpp"
#include "model.hpp"

namespace ofdmpn {

/// Linear-combination coefficients of the received phase error:
///   theta_k = sum_{r,m} c(r,m) * dpsi_r(m*T/N)
/// with c(r,m) = Re((a_r/a_k) * exp(j*2*pi*(r-k)*m/N)) / N.  All channels
/// are included; the pilot's coefficients multiply a zero-variance sample.
struct PhaseErrorWeights {
    int n = 0;
    int received_channel = -1;
    std::vector<double> coeff;  // coeff[r * n + m]
    double at(int r, int m) const { return coeff[static_cast<size_t>(r) * n + m]; }
};

PhaseErrorWeights phase_error_weights(const SymbolFrame& frame, int received_channel,
                                      const SystemConfig& config);

/// Exact Gaussian covariance of the differential Wiener samples
/// dpsi_r(m*T/N) = psi(m*T/N) - psi(m*T/N + d_r*tau).  Symmetric positive
/// semidefinite; the diagonal reproduces per_channel_sigma2.
struct CovarianceModel {
    int n = 0;
    double scale = 0.0;           // 2*pi*tx_linewidth, rad^2 per second
    std::vector<double> entries;  // (n*n) x (n*n), index p = r * n + m
    double at(int p, int q) const {
        return entries[static_cast<size_t>(p) * n * n + q];
    }
    double trace() const;
};

CovarianceModel build_covariance(const SystemConfig& config);

/// Variance of the linearized phase error as the quadratic form c^T Sigma c.
/// Positive semidefiniteness of Sigma is asserted (Cholesky with a
/// 1e-10 * trace shift) before evaluating.
VarianceResult exact_variance(const SymbolFrame& frame, int received_channel,
                              const SystemConfig& config);

/// One laser phase-noise realization per trial, sampled on `times`
/// (sorted ascending).  Increments are independent Gaussians with variance
/// 2*pi*tx_linewidth*gap; the first grid point is the phase origin.
/// Identical (seed, trial count) always reproduces the same paths.
struct WienerPaths {
    std::vector<double> times;
    std::int64_t trials = 0;
    std::vector<double> values;  // trials x times
    double at(std::int64_t trial, size_t point) const {
        return values[static_cast<size_t>(trial) * times.size() + point];
    }
};

WienerPaths sample_wiener_paths(const SystemConfig& config, std::span<const double> times,
                                std::int64_t trials, std::uint64_t seed);

enum class McMode { Linearized, Exponential };

struct McEstimate {
    double variance = 0.0;
    double std_err = 0.0;  // approx variance * sqrt(2/(trials-1))
    std::int64_t trials = 0;
    McMode mode = McMode::Linearized;
    std::uint64_t seed = 0;
};

/// Monte Carlo estimate of the received phase-error variance.  Linearized
/// mode evaluates the weight combination directly; exponential mode
/// demodulates with the full exp(j*dpsi) factors and takes the phase of
/// the recovered symbol.  Deterministic per seed and independent of the
/// worker count.
McEstimate mc_variance(const SymbolFrame& frame, int received_channel,
                       const SystemConfig& config, std::int64_t trials,
                       std::uint64_t seed, McMode mode);

}  // namespace ofdmpn

#endif
