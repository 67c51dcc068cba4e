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

#include "search.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace ofdmpn {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One received channel's evaluation tables.  term(r, e, m) is the CPE+ICI
// summand for channel r carrying QPSK symbol j^e relative to the received
// symbol: sqrt(|d_r|) * Re(j^e * exp(j*2*pi*(r-k)*m/N)).  Values depend
// only on the digit pattern, never on evaluation history, so reduced and
// audit sweeps produce bit-identical numbers.
class SweepTables {
public:
    SweepTables(int n, int k, const SystemConfig& config) : n_(n), k_(k) {
        std::vector<double> cos_tab(static_cast<size_t>(n)), sin_tab(static_cast<size_t>(n));
        for (int q = 0; q < n; ++q) {
            const double angle = 2.0 * kPi * q / n;
            cos_tab[static_cast<size_t>(q)] = std::cos(angle);
            sin_tab[static_cast<size_t>(q)] = std::sin(angle);
        }
        const SystemConfig cfg_n = config.with_n_channels(n);
        term_.assign(static_cast<size_t>(n) * 4 * n, 0.0);
        for (int r = 0; r < n; ++r) {
            const double weight =
                std::sqrt(static_cast<double>(std::abs(channel_delay_steps(r, cfg_n))));
            for (int m = 0; m < n; ++m) {
                long long q = (static_cast<long long>(r - k) * m) % n;
                if (q < 0) q += n;
                const double c = weight * cos_tab[static_cast<size_t>(q)];
                const double s = weight * sin_tab[static_cast<size_t>(q)];
                at(r, 0, m) = c;   // Re(1 * w)
                at(r, 1, m) = -s;  // Re(j * w)
                at(r, 2, m) = -c;
                at(r, 3, m) = s;
            }
        }
    }

    double term(int r, int e, int m) const {
        return term_[(static_cast<size_t>(r) * 4 + e) * n_ + m];
    }

private:
    double& at(int r, int e, int m) {
        return term_[(static_cast<size_t>(r) * 4 + e) * n_ + m];
    }
    int n_;
    int k_;
    std::vector<double> term_;
};

struct KResult {
    double worst = -1.0;
    std::vector<int> worst_digits;
    std::vector<std::int64_t> histogram;
    std::int64_t frames = 0;
};

// Normalized variance of the digit pattern currently held in `exponent`
// (exponent[r] = digit_r - digit_k mod 4; pilot entry is 0 and its table
// row is all zeros anyway).
double evaluate_case(const SweepTables& tables, const std::vector<int>& exponent,
                     int n, Regime regime, const std::vector<double>* rho_mat) {
    double acc = 0.0;
    if (regime == Regime::PartialCorrelation) {
        std::vector<double> v(static_cast<size_t>(n));
        for (int m = 0; m < n; ++m) {
            for (int r = 0; r < n; ++r) {
                v[static_cast<size_t>(r)] = tables.term(r, exponent[static_cast<size_t>(r)], m);
            }
            for (int r = 0; r < n; ++r) {
                const double* row = &(*rho_mat)[static_cast<size_t>(r) * n];
                double inner = 0.0;
                for (int s = 0; s < n; ++s) inner += row[s] * v[static_cast<size_t>(s)];
                acc += v[static_cast<size_t>(r)] * inner;
            }
        }
    } else {
        double running = 0.0;
        for (int m = 0; m < n; ++m) {
            double bracket = 0.0;
            for (int r = 0; r < n; ++r) {
                bracket += tables.term(r, exponent[static_cast<size_t>(r)], m);
            }
            if (regime == Regime::NoTimeCorrelation) {
                acc += bracket * bracket;
            } else {
                running += bracket;
            }
        }
        if (regime == Regime::FullTimeCorrelation) acc = running * running;
    }
    return acc / (static_cast<double>(n) * n);
}

// Enumerates every digit assignment of `slots` (odometer, last slot
// fastest, i.e. lexicographic order over the digit string).
KResult sweep_one_k(int n, int k, const SystemConfig& config, Regime regime,
                    bool audit, double bin_width,
                    const std::vector<double>* rho_mat) {
    const SweepTables tables(n, k, config);
    const int pilot = (n - 1) / 2;

    std::vector<int> slots;  // enumerated positions
    for (int r = 0; r < n; ++r) {
        if (r == pilot) continue;
        if (!audit && r == k) continue;  // representative: digit_k = 0
        slots.push_back(r);
    }

    std::vector<int> digits(static_cast<size_t>(n), 0);
    std::vector<int> exponent(static_cast<size_t>(n), 0);

    KResult out;
    out.histogram.assign(kHistogramBins, 0);
    out.worst_digits.assign(static_cast<size_t>(n), 0);

    bool done = false;
    while (!done) {
        const int dk = digits[static_cast<size_t>(k)];
        for (int r = 0; r < n; ++r) {
            exponent[static_cast<size_t>(r)] = (digits[static_cast<size_t>(r)] - dk) & 3;
        }
        const double value = evaluate_case(tables, exponent, n, regime, rho_mat);
        ++out.frames;

        int bin = static_cast<int>(value / bin_width);
        if (bin >= kHistogramBins) bin = kHistogramBins - 1;
        if (bin < 0) bin = 0;
        ++out.histogram[static_cast<size_t>(bin)];

        if (value > out.worst) {
            out.worst = value;
            out.worst_digits = digits;
        }

        done = true;
        for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
            int& d = digits[static_cast<size_t>(*it)];
            if (++d < 4) {
                done = false;
                break;
            }
            d = 0;
        }
    }
    return out;
}

}  // namespace

VarianceResult heuristic_worst_case(int n_channels, const SystemConfig& config,
                                    Regime regime) {
    const SystemConfig cfg = config.with_n_channels(n_channels);
    const SymbolFrame frame = SymbolFrame::all_same(n_channels, cplx(1.0, 0.0));
    return variance_for(regime, frame, 0, cfg);
}

SweepOutcome exhaustive_sweep(int n_channels, const SystemConfig& config,
                              Regime regime, bool audit) {
    if (n_channels != 5 && n_channels != 7 && n_channels != 9 && n_channels != 11) {
        throw std::invalid_argument(
            "exhaustive sweep supports N in {5, 7, 9, 11}; N = " +
            std::to_string(n_channels) + " would require (N-1)*4^(N-1) = " +
            std::to_string(n_channels - 1) + "*4^" + std::to_string(n_channels - 1) +
            " case evaluations");
    }
    if (regime != Regime::FullTimeCorrelation && regime != Regime::NoTimeCorrelation &&
        regime != Regime::PartialCorrelation) {
        throw std::invalid_argument("regime is not a closed-form variance regime");
    }
    const int n = n_channels;
    const SystemConfig cfg = config.with_n_channels(n);
    const int pilot = (n - 1) / 2;

    std::vector<double> rho_mat;
    if (regime == Regime::PartialCorrelation) {
        rho_mat.resize(static_cast<size_t>(n) * n);
        for (int r = 0; r < n; ++r) {
            for (int s = 0; s < n; ++s) {
                rho_mat[static_cast<size_t>(r) * n + s] = rho(r, s, cfg);
            }
        }
    }

    SweepOutcome out;
    out.audit = audit;
    out.regime = regime;
    out.bin_width = (n / 2.0) / kHistogramBins;
    out.histogram.assign(kHistogramBins, 0);
    out.worst_normalized = -1.0;

    std::vector<int> k_values;
    for (int k = 0; k < n; ++k) {
        if (k != pilot) k_values.push_back(k);
    }
    std::vector<KResult> results(k_values.size());
    parallel_chunks(static_cast<std::int64_t>(k_values.size()),
                    [&](std::int64_t begin, std::int64_t end) {
                        for (std::int64_t i = begin; i < end; ++i) {
                            results[static_cast<size_t>(i)] = sweep_one_k(
                                n, k_values[static_cast<size_t>(i)], cfg, regime, audit,
                                out.bin_width, rho_mat.empty() ? nullptr : &rho_mat);
                        }
                    });

    const std::int64_t multiplier = audit ? 1 : 4;
    for (size_t i = 0; i < results.size(); ++i) {
        const KResult& kr = results[i];
        out.frames_evaluated += kr.frames;
        out.cases_evaluated += kr.frames * multiplier;
        for (int b = 0; b < kHistogramBins; ++b) {
            out.histogram[static_cast<size_t>(b)] +=
                kr.histogram[static_cast<size_t>(b)] * multiplier;
        }
        // Merged in ascending k so ties resolve to the smallest k and the
        // first frame found, independent of the worker partition.
        if (kr.worst > out.worst_normalized) {
            out.worst_normalized = kr.worst;
            out.worst_k = k_values[i];
            out.worst_digits = kr.worst_digits;
        }
    }
    return out;
}

std::vector<NSweepRow> channel_count_sweep(std::span<const int> n_list,
                                         const SystemConfig& config) {
    std::vector<NSweepRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        NSweepRow row;
        row.n = n;
        row.norm_no_corr =
            heuristic_worst_case(n, config, Regime::NoTimeCorrelation).normalized;
        row.norm_partial =
            heuristic_worst_case(n, config, Regime::PartialCorrelation).normalized;
        row.norm_full_corr =
            heuristic_worst_case(n, config, Regime::FullTimeCorrelation).normalized;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ofdmpn
