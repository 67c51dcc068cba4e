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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "rng.hpp"

namespace ofdmpn {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_received_channel(const SymbolFrame& frame, int k, const SystemConfig& config) {
    if (frame.size() != config.n_channels()) {
        throw std::invalid_argument("frame size does not match n_channels");
    }
    if (k < 0 || k >= config.n_channels()) {
        throw std::out_of_range("received channel out of range");
    }
    if (k == config.pilot_index()) {
        throw std::invalid_argument("received channel is the pilot slot");
    }
}

// Sampling layout shared by the covariance assembly and the Monte Carlo
// paths: base times m*T/N plus the dispersion-shifted time of every
// (channel, bin) pair, merged into one sorted grid.
struct SampleGrid {
    int n = 0;
    double tau = 0.0;
    std::vector<double> times;       // sorted, exact-duplicate free
    std::vector<size_t> base_index;  // m -> grid point
    std::vector<size_t> shift_index; // r * n + m -> grid point
};

SampleGrid build_grid(const SystemConfig& config) {
    SampleGrid grid;
    grid.n = config.n_channels();
    grid.tau = walkoff(config).tau_s;
    const int n = grid.n;
    const double bin = config.symbol_period_s() / n;

    std::vector<double> all;
    all.reserve(static_cast<size_t>(n) * (n + 1));
    for (int m = 0; m < n; ++m) all.push_back(m * bin);
    for (int r = 0; r < n; ++r) {
        const double shift = channel_delay_steps(r, config) * grid.tau;
        for (int m = 0; m < n; ++m) all.push_back(m * bin + shift);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    auto locate = [&all](double t) {
        const auto it = std::lower_bound(all.begin(), all.end(), t);
        return static_cast<size_t>(it - all.begin());
    };
    grid.base_index.resize(static_cast<size_t>(n));
    grid.shift_index.resize(static_cast<size_t>(n) * n);
    for (int m = 0; m < n; ++m) grid.base_index[static_cast<size_t>(m)] = locate(m * bin);
    for (int r = 0; r < n; ++r) {
        const double shift = channel_delay_steps(r, config) * grid.tau;
        for (int m = 0; m < n; ++m) {
            grid.shift_index[static_cast<size_t>(r) * n + m] = locate(m * bin + shift);
        }
    }
    grid.times = std::move(all);
    return grid;
}

// Covariance of two Wiener increments is the length of the overlap of
// their time intervals.  Each dpsi_r(t) spans [t, t + d_r*tau] (sorted);
// its sign is -sgn(d_r*tau), so the pair sign is sgn(d_r)*sgn(d_s).
double interval_overlap(double a_lo, double a_hi, double b_lo, double b_hi) {
    const double lo = std::max(a_lo, b_lo);
    const double hi = std::min(a_hi, b_hi);
    return hi > lo ? hi - lo : 0.0;
}

// Cholesky of A + shift*I; returns false on a negative pivot.
bool cholesky_in_place(std::vector<double>& a, size_t m, double shift) {
    for (size_t i = 0; i < m; ++i) a[i * m + i] += shift;
    for (size_t j = 0; j < m; ++j) {
        double diag = a[j * m + j];
        for (size_t p = 0; p < j; ++p) diag -= a[j * m + p] * a[j * m + p];
        if (diag < 0.0) return false;
        const double root = std::sqrt(diag);
        a[j * m + j] = root;
        for (size_t i = j + 1; i < m; ++i) {
            double v = a[i * m + j];
            for (size_t p = 0; p < j; ++p) v -= a[i * m + p] * a[j * m + p];
            a[i * m + j] = root > 0.0 ? v / root : 0.0;
        }
    }
    return true;
}

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Mean and unbiased variance of the per-trial phase errors, reduced in
// trial order regardless of how the workers were partitioned.
McEstimate estimate_from_samples(const std::vector<double>& samples, McMode mode,
                                 std::uint64_t seed) {
    const std::int64_t trials = static_cast<std::int64_t>(samples.size());
    CompensatedSum sum;
    for (double v : samples) sum.add(v);
    const double mean = sum.value() / static_cast<double>(trials);
    CompensatedSum sq;
    for (double v : samples) sq.add((v - mean) * (v - mean));
    const double variance = sq.value() / static_cast<double>(trials - 1);

    McEstimate est;
    est.variance = variance;
    est.std_err = variance * std::sqrt(2.0 / static_cast<double>(trials - 1));
    est.trials = trials;
    est.mode = mode;
    est.seed = seed;
    return est;
}

}  // namespace

PhaseErrorWeights phase_error_weights(const SymbolFrame& frame, int k,
                                      const SystemConfig& config) {
    check_received_channel(frame, k, config);
    const int n = config.n_channels();
    PhaseErrorWeights w;
    w.n = n;
    w.received_channel = k;
    w.coeff.resize(static_cast<size_t>(n) * n);
    const cplx ak_conj = std::conj(frame.at(k));
    for (int r = 0; r < n; ++r) {
        const cplx ratio = frame.at(r) * ak_conj;
        for (int m = 0; m < n; ++m) {
            long long q = (static_cast<long long>(r - k) * m) % n;
            if (q < 0) q += n;
            const double angle = 2.0 * kPi * static_cast<double>(q) / n;
            w.coeff[static_cast<size_t>(r) * n + m] =
                (ratio.real() * std::cos(angle) - ratio.imag() * std::sin(angle)) / n;
        }
    }
    return w;
}

double CovarianceModel::trace() const {
    double t = 0.0;
    const size_t m = static_cast<size_t>(n) * n;
    for (size_t i = 0; i < m; ++i) t += entries[i * m + i];
    return t;
}

CovarianceModel build_covariance(const SystemConfig& config) {
    const int n = config.n_channels();
    const double tau = walkoff(config).tau_s;
    const double bin = config.symbol_period_s() / n;

    CovarianceModel cov;
    cov.n = n;
    cov.scale = 2.0 * kPi * config.lasers().tx_linewidth_hz;
    const size_t m = static_cast<size_t>(n) * n;
    cov.entries.assign(m * m, 0.0);

    std::vector<double> lo(m), hi(m);
    std::vector<int> sign(m);
    for (int r = 0; r < n; ++r) {
        const double shift = channel_delay_steps(r, config) * tau;
        for (int mm = 0; mm < n; ++mm) {
            const size_t p = static_cast<size_t>(r) * n + mm;
            const double t = mm * bin;
            lo[p] = std::min(t, t + shift);
            hi[p] = std::max(t, t + shift);
            sign[p] = (shift > 0.0) - (shift < 0.0);
        }
    }
    for (size_t p = 0; p < m; ++p) {
        for (size_t q = p; q < m; ++q) {
            const double overlap = interval_overlap(lo[p], hi[p], lo[q], hi[q]);
            const double v = sign[p] * sign[q] * cov.scale * overlap;
            cov.entries[p * m + q] = v;
            cov.entries[q * m + p] = v;
        }
    }
    return cov;
}

VarianceResult exact_variance(const SymbolFrame& frame, int k, const SystemConfig& config) {
    const PhaseErrorWeights w = phase_error_weights(frame, k, config);
    const CovarianceModel cov = build_covariance(config);
    const size_t m = static_cast<size_t>(cov.n) * cov.n;

    const double trace = cov.trace();
    if (trace > 0.0) {
        std::vector<double> chol = cov.entries;
        if (!cholesky_in_place(chol, m, 1.0e-10 * trace)) {
            throw std::logic_error("covariance model is not positive semidefinite");
        }
    }

    double value = 0.0;
    for (size_t p = 0; p < m; ++p) {
        if (w.coeff[p] == 0.0) continue;
        double row = 0.0;
        for (size_t q = 0; q < m; ++q) row += cov.entries[p * m + q] * w.coeff[q];
        value += w.coeff[p] * row;
    }
    if (value < 0.0) value = 0.0;  // rounding of a PSD quadratic form

    VarianceResult out;
    out.value = value;
    const double unit =
        2.0 * kPi * config.lasers().tx_linewidth_hz * std::abs(walkoff(config).tau_s);
    out.normalized = unit > 0.0 ? value / unit : 0.0;
    out.regime = Regime::Oracle;
    out.received_channel = k;
    return out;
}

WienerPaths sample_wiener_paths(const SystemConfig& config, std::span<const double> times,
                                std::int64_t trials, std::uint64_t seed) {
    if (times.empty()) {
        throw std::invalid_argument("time grid is empty");
    }
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    for (size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] >= times[i - 1])) {
            throw std::invalid_argument("time grid must be sorted ascending");
        }
    }
    const double scale = 2.0 * kPi * config.lasers().tx_linewidth_hz;

    WienerPaths paths;
    paths.times.assign(times.begin(), times.end());
    paths.trials = trials;
    paths.values.assign(static_cast<size_t>(trials) * times.size(), 0.0);

    const size_t points = times.size();
    parallel_chunks(trials, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t trial = begin; trial < end; ++trial) {
            NormalSampler gauss(stream_engine(seed, static_cast<std::uint64_t>(trial)));
            double psi = 0.0;
            double* row = &paths.values[static_cast<size_t>(trial) * points];
            row[0] = 0.0;
            for (size_t i = 1; i < points; ++i) {
                const double gap = paths.times[i] - paths.times[i - 1];
                psi += gauss.next() * std::sqrt(scale * gap);
                row[i] = psi;
            }
        }
    });
    return paths;
}

McEstimate mc_variance(const SymbolFrame& frame, int k, const SystemConfig& config,
                       std::int64_t trials, std::uint64_t seed, McMode mode) {
    check_received_channel(frame, k, config);
    if (trials < 2) {
        throw std::invalid_argument("trials must be >= 2");
    }
    if (trials > 100000000) {
        throw std::invalid_argument("trials capped at 1e8");
    }
    const SampleGrid grid = build_grid(config);
    const int n = grid.n;
    const double scale = 2.0 * kPi * config.lasers().tx_linewidth_hz;
    const PhaseErrorWeights w = phase_error_weights(frame, k, config);

    // Phase table for the exponential-mode demodulation.
    std::vector<cplx> omega(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) {
        const double angle = 2.0 * kPi * q / n;
        omega[static_cast<size_t>(q)] = cplx(std::cos(angle), std::sin(angle));
    }
    const int pilot = config.pilot_index();
    const size_t points = grid.times.size();

    std::vector<double> samples(static_cast<size_t>(trials));
    parallel_chunks(trials, [&](std::int64_t begin, std::int64_t end) {
        std::vector<double> psi(points);
        for (std::int64_t trial = begin; trial < end; ++trial) {
            NormalSampler gauss(stream_engine(seed, static_cast<std::uint64_t>(trial)));
            psi[0] = 0.0;
            for (size_t i = 1; i < points; ++i) {
                const double gap = grid.times[i] - grid.times[i - 1];
                psi[i] = psi[i - 1] + gauss.next() * std::sqrt(scale * gap);
            }
            double sample = 0.0;
            if (mode == McMode::Linearized) {
                for (int r = 0; r < n; ++r) {
                    if (r == pilot) continue;  // zero-variance sample
                    for (int m = 0; m < n; ++m) {
                        const double dpsi =
                            psi[grid.base_index[static_cast<size_t>(m)]] -
                            psi[grid.shift_index[static_cast<size_t>(r) * n + m]];
                        sample += w.at(r, m) * dpsi;
                    }
                }
            } else {
                cplx received(0.0, 0.0);
                for (int m = 0; m < n; ++m) {
                    const double psi_base = psi[grid.base_index[static_cast<size_t>(m)]];
                    for (int r = 0; r < n; ++r) {
                        const double dpsi =
                            psi_base - psi[grid.shift_index[static_cast<size_t>(r) * n + m]];
                        long long q = (static_cast<long long>(r - k) * m) % n;
                        if (q < 0) q += n;
                        received += frame.at(r) * cplx(std::cos(dpsi), std::sin(dpsi)) *
                                    omega[static_cast<size_t>(q)];
                    }
                }
                received /= static_cast<double>(n);
                sample = std::arg(received * std::conj(frame.at(k)));
            }
            samples[static_cast<size_t>(trial)] = sample;
        }
    });
    return estimate_from_samples(samples, mode, seed);
}

}  // namespace ofdmpn
