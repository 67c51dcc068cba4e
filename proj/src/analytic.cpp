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

#include "analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ofdmpn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double intrinsic_unit(const SystemConfig& config) {
    return 2.0 * kPi * config.lasers().tx_linewidth_hz * std::abs(walkoff(config).tau_s);
}

void check_received_channel(const SymbolFrame& frame, int k, const SystemConfig& config) {
    if (frame.size() != config.n_channels()) {
        throw std::invalid_argument("frame size does not match n_channels");
    }
    if (k < 0 || k >= config.n_channels()) {
        throw std::out_of_range("received channel " + std::to_string(k) +
                                " outside [0, " + std::to_string(config.n_channels()) + ")");
    }
    if (k == config.pilot_index()) {
        throw std::invalid_argument("received channel is the pilot slot");
    }
}

// Per-channel terms of the CPE+ICI sum at fixed received channel k:
//   term(r, m) = sqrt(|d_r|) * Re((a_r / a_k) * exp(j*2*pi*(r-k)*m / N)).
// The angle index (r-k)*m is reduced mod N in integer arithmetic so the
// trig tables are exact for every bin.
class TermTable {
public:
    TermTable(const SymbolFrame& frame, int k, const SystemConfig& config)
        : n_(config.n_channels()), k_(k) {
        cos_.resize(static_cast<size_t>(n_));
        sin_.resize(static_cast<size_t>(n_));
        for (int q = 0; q < n_; ++q) {
            const double angle = 2.0 * kPi * q / n_;
            cos_[static_cast<size_t>(q)] = std::cos(angle);
            sin_[static_cast<size_t>(q)] = std::sin(angle);
        }
        weight_.resize(static_cast<size_t>(n_));
        ratio_re_.resize(static_cast<size_t>(n_));
        ratio_im_.resize(static_cast<size_t>(n_));
        const cplx ak_conj = std::conj(frame.at(k));
        for (int r = 0; r < n_; ++r) {
            weight_[static_cast<size_t>(r)] =
                std::sqrt(static_cast<double>(std::abs(channel_delay_steps(r, config))));
            const cplx ratio = frame.at(r) * ak_conj;
            ratio_re_[static_cast<size_t>(r)] = ratio.real();
            ratio_im_[static_cast<size_t>(r)] = ratio.imag();
        }
    }

    int size() const { return n_; }

    double term(int r, int m) const {
        long long q = (static_cast<long long>(r - k_) * m) % n_;
        if (q < 0) q += n_;
        const size_t iq = static_cast<size_t>(q);
        const size_t ir = static_cast<size_t>(r);
        return weight_[ir] * (ratio_re_[ir] * cos_[iq] - ratio_im_[ir] * sin_[iq]);
    }

private:
    int n_;
    int k_;
    std::vector<double> cos_, sin_, weight_, ratio_re_, ratio_im_;
};

VarianceResult make_result(double normalized, Regime regime, int k,
                           const SystemConfig& config) {
    VarianceResult out;
    out.normalized = normalized;
    out.value = normalized * intrinsic_unit(config);
    out.regime = regime;
    out.received_channel = k;
    return out;
}

}  // namespace

VarianceResult variance_full_corr(const SymbolFrame& frame, int k,
                                  const SystemConfig& config) {
    check_received_channel(frame, k, config);
    const TermTable t(frame, k, config);
    const int n = t.size();
    double total = 0.0;
    for (int m = 0; m < n; ++m) {
        for (int r = 0; r < n; ++r) total += t.term(r, m);
    }
    return make_result(total * total / (static_cast<double>(n) * n),
                       Regime::FullTimeCorrelation, k, config);
}

VarianceResult variance_no_corr(const SymbolFrame& frame, int k,
                                const SystemConfig& config) {
    check_received_channel(frame, k, config);
    const TermTable t(frame, k, config);
    const int n = t.size();
    double total = 0.0;
    for (int m = 0; m < n; ++m) {
        double bracket = 0.0;
        for (int r = 0; r < n; ++r) bracket += t.term(r, m);
        total += bracket * bracket;
    }
    return make_result(total / (static_cast<double>(n) * n),
                       Regime::NoTimeCorrelation, k, config);
}

VarianceResult variance_partial(const SymbolFrame& frame, int k,
                                const SystemConfig& config, RhoMode rho_mode) {
    check_received_channel(frame, k, config);
    const TermTable t(frame, k, config);
    const int n = t.size();

    std::vector<double> rho_mat(static_cast<size_t>(n) * n, 1.0);
    if (rho_mode == RhoMode::FromConfig) {
        for (int r = 0; r < n; ++r) {
            for (int s = 0; s < n; ++s) {
                rho_mat[static_cast<size_t>(r) * n + s] = rho(r, s, config);
            }
        }
    }

    std::vector<double> v(static_cast<size_t>(n));
    double total = 0.0;
    for (int m = 0; m < n; ++m) {
        for (int r = 0; r < n; ++r) v[static_cast<size_t>(r)] = t.term(r, m);
        // Inner sum kept in s-order so rho == 1 reproduces the no-corr
        // bracket arithmetic almost exactly.
        for (int r = 0; r < n; ++r) {
            const double* row = &rho_mat[static_cast<size_t>(r) * n];
            double inner = 0.0;
            for (int s = 0; s < n; ++s) inner += row[s] * v[static_cast<size_t>(s)];
            total += v[static_cast<size_t>(r)] * inner;
        }
    }
    return make_result(total / (static_cast<double>(n) * n),
                       Regime::PartialCorrelation, k, config);
}

VarianceResult variance_for(Regime regime, const SymbolFrame& frame, int k,
                            const SystemConfig& config) {
    switch (regime) {
        case Regime::FullTimeCorrelation:
            return variance_full_corr(frame, k, config);
        case Regime::NoTimeCorrelation:
            return variance_no_corr(frame, k, config);
        case Regime::PartialCorrelation:
            return variance_partial(frame, k, config);
        default:
            throw std::invalid_argument("regime is not a closed-form variance regime");
    }
}

double rho(int s, int r, const SystemConfig& config) {
    if (s == r) return 1.0;
    const double vs = per_channel_sigma2(s, config);
    const double vr = per_channel_sigma2(r, config);
    if (vs == 0.0 && vr == 0.0) return 1.0;
    if (vs == 0.0 || vr == 0.0) return 0.0;
    return std::sqrt(std::min(vs, vr) / std::max(vs, vr));
}

VarianceResult QpskEepnResult::as_variance(const SystemConfig& config) const {
    VarianceResult out;
    out.value = variance;
    const double unit =
        2.0 * kPi * config.lasers().tx_linewidth_hz * std::abs(walkoff(config).tau_s);
    out.normalized = unit > 0.0 ? variance / unit
                                : std::numeric_limits<double>::quiet_NaN();
    out.regime = Regime::QpskEepn;
    out.received_channel = -1;
    return out;
}

QpskEepnResult qpsk_eepn_variance(const SystemConfig& config, double symbol_period_s) {
    if (!(symbol_period_s > 0.0)) {
        throw std::invalid_argument("QPSK symbol period must be positive");
    }
    const LaserParams& lasers = config.lasers();
    const double d_si = config.fiber().dispersion_ps_nm_km * 1.0e-6;
    const double length_m = config.fiber().length_km * 1.0e3;
    const double lambda = config.fiber().wavelength_m;
    const double c = SystemConfig::speed_of_light_m_s;

    QpskEepnResult out;
    out.symbol_period_s = symbol_period_s;
    out.intrinsic_variance =
        2.0 * kPi * (lasers.tx_linewidth_hz + lasers.lo_linewidth_hz) * symbol_period_s;
    out.eepn_variance = kPi * lambda * lambda / (2.0 * c) * std::abs(d_si * length_m) *
                        lasers.lo_linewidth_hz / symbol_period_s;
    out.variance = out.intrinsic_variance + out.eepn_variance;
    out.eepn_linewidth_hz = out.eepn_variance / (2.0 * kPi * symbol_period_s);
    return out;
}

double ber_floor(double sigma2) {
    if (sigma2 < 0.0) {
        throw std::invalid_argument("phase-noise variance must be nonnegative");
    }
    if (sigma2 == 0.0) return 0.0;
    return 0.5 * std::erfc(kPi / (4.0 * std::sqrt(2.0) * std::sqrt(sigma2)));
}

namespace {

// Inverse of erfc on (0, 2), by bisection refined with Newton steps.
double erfc_inv(double y) {
    if (!(y > 0.0 && y < 2.0)) {
        throw std::invalid_argument("erfc_inv argument outside (0, 2)");
    }
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid) > y) lo = mid; else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double f = std::erfc(x) - y;
        const double df = -2.0 / std::sqrt(kPi) * std::exp(-x * x);
        x -= f / df;
    }
    return x;
}

}  // namespace

double sigma2_for_ber_floor(double ber_target) {
    if (!(ber_target > 0.0 && ber_target < 0.5)) {
        throw std::invalid_argument("BER target must lie in (0, 0.5)");
    }
    const double x = erfc_inv(2.0 * ber_target);
    const double sigma = kPi / (4.0 * std::sqrt(2.0) * x);
    return sigma * sigma;
}

MaxDistanceResult solve_max_distance(const SystemConfig& config,
                                     double normalized_variance, double ber_target) {
    if (!(normalized_variance > 0.0)) {
        throw std::invalid_argument("normalized variance must be positive");
    }
    const double sigma2_target = sigma2_for_ber_floor(ber_target);
    const double tau_per_km = std::abs(walkoff(config.with_length_km(1.0)).tau_s);
    const double slope = normalized_variance * 2.0 * kPi *
                         config.lasers().tx_linewidth_hz * tau_per_km;
    if (slope <= 0.0) {
        return MaxDistanceResult{true, std::numeric_limits<double>::infinity()};
    }
    return MaxDistanceResult{false, sigma2_target / slope};
}

}  // namespace ofdmpn
