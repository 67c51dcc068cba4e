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

#include "model.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ofdmpn {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_channel(int channel, int n) {
    if (channel < 0 || channel >= n) {
        throw std::out_of_range("channel index " + std::to_string(channel) +
                                " outside [0, " + std::to_string(n) + ")");
    }
}

}  // namespace

SystemConfig::SystemConfig(int n_channels, double symbol_period_s,
                           FiberParams fiber, LaserParams lasers)
    : n_channels_(n_channels),
      symbol_period_s_(symbol_period_s),
      fiber_(fiber),
      lasers_(lasers) {
    if (n_channels < 3 || n_channels % 2 == 0) {
        throw std::invalid_argument("n_channels must be odd and >= 3");
    }
    if (!(symbol_period_s > 0.0)) {
        throw std::invalid_argument("symbol_period_s must be positive");
    }
    if (!(fiber_.wavelength_m > 0.0)) {
        throw std::invalid_argument("wavelength_m must be positive");
    }
    if (fiber_.length_km < 0.0) {
        throw std::invalid_argument("fiber_length_km must be nonnegative");
    }
    if (lasers_.tx_linewidth_hz < 0.0 || lasers_.lo_linewidth_hz < 0.0) {
        throw std::invalid_argument("laser linewidths must be nonnegative");
    }
    if (!std::isfinite(fiber_.dispersion_ps_nm_km)) {
        throw std::invalid_argument("dispersion_ps_nm_km must be finite");
    }
}

SystemConfig SystemConfig::with_n_channels(int n) const {
    return SystemConfig(n, symbol_period_s_, fiber_, lasers_);
}

SystemConfig SystemConfig::with_length_km(double km) const {
    FiberParams f = fiber_;
    f.length_km = km;
    return SystemConfig(n_channels_, symbol_period_s_, f, lasers_);
}

WalkOff walkoff(const SystemConfig& config) {
    // ps/(nm km) -> s/m^2, km -> m; everything else is already SI.
    const double d_si = config.fiber().dispersion_ps_nm_km * 1.0e-6;
    const double length_m = config.fiber().length_km * 1.0e3;
    const double lambda = config.fiber().wavelength_m;
    const double tau = d_si * length_m * lambda * lambda *
                       config.channel_spacing_hz() / SystemConfig::speed_of_light_m_s;
    return WalkOff{tau};
}

int channel_delay_steps(int channel, const SystemConfig& config) {
    check_channel(channel, config.n_channels());
    return config.pilot_index() - channel;
}

double per_channel_sigma2(int channel, const SystemConfig& config) {
    const int d = channel_delay_steps(channel, config);
    // |d * tau|: anomalous dispersion flips the delay sign, not the spread.
    return 2.0 * kPi * config.lasers().tx_linewidth_hz * std::abs(d) *
           std::abs(walkoff(config).tau_s);
}

std::array<cplx, 4> qpsk_alphabet() {
    return {cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(-1.0, 0.0), cplx(0.0, -1.0)};
}

SymbolFrame SymbolFrame::all_same(int n_channels, cplx data_symbol) {
    if (n_channels < 3 || n_channels % 2 == 0) {
        throw std::invalid_argument("frame size must be odd and >= 3");
    }
    std::vector<cplx> symbols(static_cast<size_t>(n_channels), data_symbol);
    symbols[static_cast<size_t>((n_channels - 1) / 2)] = cplx(1.0, 0.0);
    return from_symbols(std::move(symbols));
}

SymbolFrame SymbolFrame::from_symbols(std::vector<cplx> symbols) {
    const int n = static_cast<int>(symbols.size());
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("frame size must be odd and >= 3");
    }
    const int pilot = (n - 1) / 2;
    if (symbols[static_cast<size_t>(pilot)] != cplx(1.0, 0.0)) {
        throw std::invalid_argument("pilot slot symbol must be exactly 1");
    }
    for (int r = 0; r < n; ++r) {
        const double mag = std::abs(symbols[static_cast<size_t>(r)]);
        if (std::abs(mag - 1.0) > 1.0e-9) {
            throw std::invalid_argument("frame symbol " + std::to_string(r) +
                                        " is not unit modulus");
        }
    }
    return SymbolFrame(std::move(symbols));
}

SymbolFrame SymbolFrame::from_qpsk_digits(const std::vector<int>& digits) {
    const int n = static_cast<int>(digits.size());
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("frame size must be odd and >= 3");
    }
    const auto alphabet = qpsk_alphabet();
    const int pilot = (n - 1) / 2;
    std::vector<cplx> symbols(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) {
        const int d = digits[static_cast<size_t>(r)];
        if (d < 0 || d > 3) {
            throw std::invalid_argument("QPSK digit must be in 0..3");
        }
        if (r == pilot && d != 0) {
            throw std::invalid_argument("pilot slot digit must be 0");
        }
        symbols[static_cast<size_t>(r)] = alphabet[static_cast<size_t>(d)];
    }
    return SymbolFrame(std::move(symbols));
}

SymbolFrame SymbolFrame::reversed() const {
    std::vector<cplx> rev(symbols_.rbegin(), symbols_.rend());
    return SymbolFrame(std::move(rev));
}

}  // namespace ofdmpn
