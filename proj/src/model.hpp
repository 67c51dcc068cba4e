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

#ifndef OFDMPN_MODEL_HPP
#define OFDMPN_MODEL_HPP

#include <array>
#include <complex>
#include <vector>

namespace ofdmpn {

using cplx = std::complex<double>;

struct FiberParams {
    double dispersion_ps_nm_km = 0.0;
    double wavelength_m = 0.0;
    double length_km = 0.0;
};

struct LaserParams {
    double tx_linewidth_hz = 0.0;
    double lo_linewidth_hz = 0.0;
};

/// OFDM grid plus laser and fiber parameters.  The channel count includes
/// the center pilot slot; channel spacing is derived as 1/T so the grid is
/// always orthogonal.  Immutable value type, safe to share across threads.
class SystemConfig {
public:
    SystemConfig(int n_channels, double symbol_period_s,
                 FiberParams fiber, LaserParams lasers);

    int n_channels() const { return n_channels_; }
    double symbol_period_s() const { return symbol_period_s_; }
    const FiberParams& fiber() const { return fiber_; }
    const LaserParams& lasers() const { return lasers_; }

    double channel_spacing_hz() const { return 1.0 / symbol_period_s_; }
    int pilot_index() const { return (n_channels_ - 1) / 2; }

    SystemConfig with_n_channels(int n) const;
    SystemConfig with_length_km(double km) const;

    static constexpr double speed_of_light_m_s = 3.0e8;

private:
    int n_channels_;
    double symbol_period_s_;
    FiberParams fiber_;
    LaserParams lasers_;
};

/// Dispersion-induced group delay between adjacent channels.
struct WalkOff {
    double tau_s = 0.0;
};

WalkOff walkoff(const SystemConfig& config);

/// Signed delay of channel r relative to the pilot, in walk-off steps:
/// (N-1)/2 - r.  Positive below the pilot, negative above.
int channel_delay_steps(int channel, const SystemConfig& config);

/// Variance of the residual differential phase noise on channel r:
/// 2*pi*tx_linewidth*|delay steps|*tau, in rad^2.
double per_channel_sigma2(int channel, const SystemConfig& config);

/// {1, j, -1, -j}; closed under multiplication and conjugation.
std::array<cplx, 4> qpsk_alphabet();

/// One OFDM constellation frame: N unit-modulus symbols with the pilot
/// slot pinned to exactly 1.
class SymbolFrame {
public:
    static SymbolFrame all_same(int n_channels, cplx data_symbol);
    static SymbolFrame from_symbols(std::vector<cplx> symbols);
    /// Digits 0..3 select j^digit from the QPSK alphabet; the pilot slot
    /// digit must be 0.
    static SymbolFrame from_qpsk_digits(const std::vector<int>& digits);

    int size() const { return static_cast<int>(symbols_.size()); }
    int pilot_index() const { return (size() - 1) / 2; }
    cplx at(int channel) const { return symbols_.at(static_cast<size_t>(channel)); }
    const std::vector<cplx>& symbols() const { return symbols_; }

    /// Channel-order reversal; maps received channel k to N-1-k.
    SymbolFrame reversed() const;

private:
    explicit SymbolFrame(std::vector<cplx> symbols) : symbols_(std::move(symbols)) {}
    std::vector<cplx> symbols_;
};

}  // namespace ofdmpn

#endif
