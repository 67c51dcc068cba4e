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

#ifndef OFDMPN_ANALYTIC_HPP
#define OFDMPN_ANALYTIC_HPP

#include "model.hpp"

namespace ofdmpn {

enum class Regime {
    FullTimeCorrelation,
    NoTimeCorrelation,
    PartialCorrelation,
    QpskEepn,
    Oracle,
    MonteCarlo,
};

/// Phase-noise variance on one received channel.  `normalized` is the
/// variance divided by the intrinsic unit 2*pi*tx_linewidth*tau; for the
/// OFDM regimes it depends only on the frame, k and N, never on the
/// physics, so it stays meaningful even at tau = 0.
struct VarianceResult {
    double value = 0.0;       // rad^2
    double normalized = 0.0;
    Regime regime = Regime::NoTimeCorrelation;
    int received_channel = -1;
};

/// CPE+ICI variance assuming the differential phase-noise samples are
/// fully correlated across time bins (strong-dispersion limit).
VarianceResult variance_full_corr(const SymbolFrame& frame, int received_channel,
                                  const SystemConfig& config);

/// CPE+ICI variance with time samples uncorrelated and all channel
/// locations fully correlated (weak-dispersion limit).  O(N^2).
VarianceResult variance_no_corr(const SymbolFrame& frame, int received_channel,
                                const SystemConfig& config);

enum class RhoMode {
    FromConfig,  // sqrt(min/max) of the per-channel variances
    ForcedUnit,  // rho == 1 for every pair; must reproduce variance_no_corr
};

/// Exact form with the partial correlation between channel locations
/// carried explicitly.  O(N^3).
VarianceResult variance_partial(const SymbolFrame& frame, int received_channel,
                                const SystemConfig& config,
                                RhoMode rho_mode = RhoMode::FromConfig);

VarianceResult variance_for(Regime regime, const SymbolFrame& frame,
                            int received_channel, const SystemConfig& config);

/// Correlation coefficient of the residual phase noise of channels s and r.
/// 1 on the diagonal and for equal variances; 0 when exactly one variance
/// vanishes; 1 when both vanish (either convention is inert downstream).
double rho(int s, int r, const SystemConfig& config);

/// Single-carrier QPSK with electronic dispersion compensation: intrinsic
/// Tx+LO beat noise plus the equalization-enhanced LO term.
struct QpskEepnResult {
    double variance = 0.0;            // rad^2
    double intrinsic_variance = 0.0;  // 2*pi*(tx+lo)*Ts
    double eepn_variance = 0.0;       // pi*lambda^2*D*L*lo/(2*c*Ts)
    double eepn_linewidth_hz = 0.0;   // eepn_variance / (2*pi*Ts)
    double symbol_period_s = 0.0;
    VarianceResult as_variance(const SystemConfig& config) const;
};

QpskEepnResult qpsk_eepn_variance(const SystemConfig& config, double symbol_period_s);

/// BER floor of a QPSK decision: erfc(pi / (4*sqrt(2)*sigma)) / 2.
/// Zero at sigma2 = 0, strictly increasing.
double ber_floor(double sigma2);

/// Phase-noise variance at which the BER floor reaches `ber_target`.
double sigma2_for_ber_floor(double ber_target);

struct MaxDistanceResult {
    bool unlimited = false;
    double length_km = 0.0;  // +inf when unlimited
};

/// Longest fiber for which a system with variance
/// normalized_variance * 2*pi*tx_linewidth*tau(L) keeps its BER floor at
/// ber_target.  Exact: the variance is linear in L.
MaxDistanceResult solve_max_distance(const SystemConfig& config,
                                     double normalized_variance, double ber_target);

}  // namespace ofdmpn

#endif
