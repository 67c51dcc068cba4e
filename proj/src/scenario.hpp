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

#ifndef OFDMPN_SCENARIO_HPP
#define OFDMPN_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "model.hpp"

namespace ofdmpn {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parsed run configuration: the physical system plus sweep controls.
/// Produced from the line-oriented `key = value` format (# comments);
/// every physical quantity is converted to SI exactly once, here.
struct ScenarioConfig {
    SystemConfig config;
    std::vector<double> distances_km;  // nonnegative, ascending
    std::vector<int> n_list;           // empty = command default
    std::int64_t trials = 20000;
    std::uint64_t seed = 1;
    Regime regime = Regime::NoTimeCorrelation;
    double qpsk_symbol_period_s = 0.0;  // 0 = capacity matched, T/N

    double qpsk_ts() const {
        return qpsk_symbol_period_s > 0.0
                   ? qpsk_symbol_period_s
                   : config.symbol_period_s() / config.n_channels();
    }
};

ScenarioConfig default_scenario();
ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig parse_scenario_file(const std::string& path);

const char* regime_name(Regime regime);
Regime regime_from_name(const std::string& name);

/// 12 significant digits, '.' decimal separator, locale independent.
std::string format_number(double v);

/// Header: L_km,sigma2_ofdm_nocorr,sigma2_ofdm_partial,sigma2_ofdm_fullcorr,
///         sigma2_qpsk,ber_ofdm_nocorr,ber_ofdm_partial,ber_ofdm_fullcorr,ber_qpsk
std::string sweep_distance_csv(const ScenarioConfig& scenario);

/// Header: N,norm_nocorr,norm_partial,norm_fullcorr
std::string sweep_n_csv(const ScenarioConfig& scenario);

/// Header: N,bin_lo,bin_hi,count; one '#' summary line per N.
std::string histogram_csv(const ScenarioConfig& scenario, bool audit);

struct ValidateReport {
    bool ok = false;
    std::string text;
    std::string csv;
    std::string failure;  // set when ok is false
};

/// Closed forms vs exact covariance oracle vs Monte Carlo on a small grid.
/// ok is false when the oracle and linearized Monte Carlo disagree beyond
/// three standard errors anywhere; analytic-vs-oracle ratios are reported
/// but never asserted.
ValidateReport validate_report(const ScenarioConfig& scenario);

std::string max_distance_report(const ScenarioConfig& scenario, double ber_target);

}  // namespace ofdmpn

#endif
