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

#ifndef OFDMPN_SEARCH_HPP
#define OFDMPN_SEARCH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "analytic.hpp"
#include "model.hpp"

namespace ofdmpn {

inline constexpr int kHistogramBins = 100;

/// Result of an exhaustive constellation sweep.  The histogram spans
/// [0, N/2) in normalized-variance units; counts always sum to
/// cases_evaluated.  With symmetry reduction enabled, each evaluated frame
/// stands for its 4-element global-rotation orbit, so cases_evaluated is
/// 4 * frames_evaluated while the values are bit-identical to a full run.
struct SweepOutcome {
    std::vector<int> worst_digits;  // full frame, pilot digit 0
    int worst_k = 0;
    double worst_normalized = 0.0;
    std::vector<std::int64_t> histogram;
    double bin_width = 0.0;
    std::int64_t cases_evaluated = 0;
    std::int64_t frames_evaluated = 0;
    bool audit = false;
    Regime regime = Regime::NoTimeCorrelation;
};

/// All data symbols equal, received channel 0: the design worst case.
VarianceResult heuristic_worst_case(int n_channels, const SystemConfig& config,
                                    Regime regime);

/// Every QPSK frame at every received channel.  Only N in {5, 7, 9, 11}
/// is accepted; beyond that the (N-1)*4^(N-1) case count is infeasible.
/// audit = true disables the rotation-symmetry reduction.
SweepOutcome exhaustive_sweep(int n_channels, const SystemConfig& config,
                              Regime regime, bool audit = false);

struct NSweepRow {
    int n = 0;
    double norm_no_corr = 0.0;
    double norm_partial = 0.0;
    double norm_full_corr = 0.0;
};

/// Worst-case normalized variance per regime as a function of N.
std::vector<NSweepRow> channel_count_sweep(std::span<const int> n_list,
                                         const SystemConfig& config);

}  // namespace ofdmpn

#endif
