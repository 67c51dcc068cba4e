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

#include "ofdmpn.h"

#include <cstring>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "scenario.hpp"
#include "search.hpp"

struct ofdmpn_config {
    ofdmpn::SystemConfig value;
};

struct ofdmpn_frame {
    ofdmpn::SymbolFrame value;
};

struct ofdmpn_scenario {
    ofdmpn::ScenarioConfig value;
    // Borrowed view handed out by ofdmpn_scenario_config; rebuilt after
    // every setter so it always mirrors `value.config`.
    ofdmpn_config view;
};

namespace {

thread_local std::string g_last_error;

ofdmpn_status fail(ofdmpn_status status, const char* message) {
    g_last_error = message;
    return status;
}

// Runs `fn`, mapping C++ exceptions onto status codes.
template <typename Fn>
ofdmpn_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        return OFDMPN_OK;
    } catch (const ofdmpn::ParseError& e) {
        return fail(OFDMPN_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(OFDMPN_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(OFDMPN_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(OFDMPN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(OFDMPN_ERR_INTERNAL, e.what());
    }
}

ofdmpn_status require(bool ok, const char* message) {
    return ok ? OFDMPN_OK : fail(OFDMPN_ERR_INVALID_ARGUMENT, message);
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ofdmpn_variance_result to_c(const ofdmpn::VarianceResult& r) {
    ofdmpn_variance_result out;
    out.value = r.value;
    out.normalized = r.normalized;
    out.received_channel = r.received_channel;
    switch (r.regime) {
        case ofdmpn::Regime::FullTimeCorrelation: out.regime = OFDMPN_REGIME_FULL_CORR; break;
        case ofdmpn::Regime::NoTimeCorrelation: out.regime = OFDMPN_REGIME_NO_CORR; break;
        case ofdmpn::Regime::PartialCorrelation: out.regime = OFDMPN_REGIME_PARTIAL; break;
        default: out.regime = -1; break;
    }
    return out;
}

ofdmpn::Regime from_c(ofdmpn_regime regime) {
    switch (regime) {
        case OFDMPN_REGIME_FULL_CORR: return ofdmpn::Regime::FullTimeCorrelation;
        case OFDMPN_REGIME_NO_CORR: return ofdmpn::Regime::NoTimeCorrelation;
        case OFDMPN_REGIME_PARTIAL: return ofdmpn::Regime::PartialCorrelation;
    }
    throw std::invalid_argument("invalid regime value");
}

ofdmpn_scenario* wrap_scenario(ofdmpn::ScenarioConfig scn) {
    ofdmpn_config view{scn.config};
    return new ofdmpn_scenario{std::move(scn), std::move(view)};
}

// Applies a rebuild of the embedded SystemConfig with one field replaced.
template <typename Fn>
ofdmpn_status update_config(ofdmpn_scenario* scn, Fn&& make) {
    if (ofdmpn_status s = require(scn != nullptr, "null scenario")) return s;
    return guarded([&] {
        scn->value.config = make(scn->value.config);
        scn->view.value = scn->value.config;
    });
}

}  // namespace

extern "C" {

const char* ofdmpn_version(void) { return "0.1.0"; }

const char* ofdmpn_last_error_message(void) { return g_last_error.c_str(); }

void ofdmpn_string_free(char* s) { delete[] s; }

ofdmpn_status ofdmpn_config_create(int n_channels, double symbol_period_s,
                                   double tx_linewidth_hz, double lo_linewidth_hz,
                                   double dispersion_ps_nm_km, double wavelength_m,
                                   double fiber_length_km, ofdmpn_config** out) {
    if (ofdmpn_status s = require(out != nullptr, "out pointer is null")) return s;
    *out = nullptr;
    return guarded([&] {
        ofdmpn::FiberParams fiber{dispersion_ps_nm_km, wavelength_m, fiber_length_km};
        ofdmpn::LaserParams lasers{tx_linewidth_hz, lo_linewidth_hz};
        *out = new ofdmpn_config{
            ofdmpn::SystemConfig(n_channels, symbol_period_s, fiber, lasers)};
    });
}

void ofdmpn_config_destroy(ofdmpn_config* cfg) { delete cfg; }

ofdmpn_status ofdmpn_config_pilot_index(const ofdmpn_config* cfg, int* out) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    *out = cfg->value.pilot_index();
    return OFDMPN_OK;
}

ofdmpn_status ofdmpn_config_channel_spacing_hz(const ofdmpn_config* cfg, double* out) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    *out = cfg->value.channel_spacing_hz();
    return OFDMPN_OK;
}

ofdmpn_status ofdmpn_config_walkoff_s(const ofdmpn_config* cfg, double* out) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    *out = ofdmpn::walkoff(cfg->value).tau_s;
    return OFDMPN_OK;
}

ofdmpn_status ofdmpn_config_delay_steps(const ofdmpn_config* cfg, int channel, int* out) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    return guarded([&] { *out = ofdmpn::channel_delay_steps(channel, cfg->value); });
}

ofdmpn_status ofdmpn_config_channel_sigma2(const ofdmpn_config* cfg, int channel,
                                           double* out) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    return guarded([&] { *out = ofdmpn::per_channel_sigma2(channel, cfg->value); });
}

ofdmpn_status ofdmpn_frame_create_all_same(const ofdmpn_config* cfg, int qpsk_digit,
                                           ofdmpn_frame** out) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        if (qpsk_digit < 0 || qpsk_digit > 3) {
            throw std::invalid_argument("QPSK digit must be in 0..3");
        }
        *out = new ofdmpn_frame{ofdmpn::SymbolFrame::all_same(
            cfg->value.n_channels(),
            ofdmpn::qpsk_alphabet()[static_cast<size_t>(qpsk_digit)])};
    });
}

ofdmpn_status ofdmpn_frame_create_qpsk(const ofdmpn_config* cfg, const int* digits,
                                       int count, ofdmpn_frame** out) {
    if (ofdmpn_status s = require(cfg && digits && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        if (count != cfg->value.n_channels()) {
            throw std::invalid_argument("digit count does not match n_channels");
        }
        std::vector<int> v(digits, digits + count);
        *out = new ofdmpn_frame{ofdmpn::SymbolFrame::from_qpsk_digits(v)};
    });
}

ofdmpn_status ofdmpn_frame_create_complex(const ofdmpn_config* cfg, const double* re,
                                          const double* im, int count,
                                          ofdmpn_frame** out) {
    if (ofdmpn_status s = require(cfg && re && im && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] {
        if (count != cfg->value.n_channels()) {
            throw std::invalid_argument("symbol count does not match n_channels");
        }
        std::vector<ofdmpn::cplx> symbols(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) {
            symbols[static_cast<size_t>(i)] = ofdmpn::cplx(re[i], im[i]);
        }
        *out = new ofdmpn_frame{ofdmpn::SymbolFrame::from_symbols(std::move(symbols))};
    });
}

void ofdmpn_frame_destroy(ofdmpn_frame* frame) { delete frame; }

ofdmpn_status ofdmpn_frame_symbol(const ofdmpn_frame* frame, int channel, double* re,
                                  double* im) {
    if (ofdmpn_status s = require(frame && re && im, "null argument")) return s;
    return guarded([&] {
        if (channel < 0 || channel >= frame->value.size()) {
            throw std::out_of_range("channel index out of range");
        }
        const ofdmpn::cplx v = frame->value.at(channel);
        *re = v.real();
        *im = v.imag();
    });
}

ofdmpn_status ofdmpn_variance(const ofdmpn_config* cfg, const ofdmpn_frame* frame,
                              int received_channel, ofdmpn_regime regime,
                              ofdmpn_variance_result* out) {
    if (ofdmpn_status s = require(cfg && frame && out, "null argument")) return s;
    return guarded([&] {
        *out = to_c(ofdmpn::variance_for(from_c(regime), frame->value, received_channel,
                                         cfg->value));
    });
}

ofdmpn_status ofdmpn_rho(const ofdmpn_config* cfg, int s, int r, double* out) {
    if (ofdmpn_status st = require(cfg && out, "null argument")) return st;
    return guarded([&] {
        if (s < 0 || s >= cfg->value.n_channels() || r < 0 || r >= cfg->value.n_channels()) {
            throw std::out_of_range("channel index out of range");
        }
        *out = ofdmpn::rho(s, r, cfg->value);
    });
}

ofdmpn_status ofdmpn_qpsk_eepn(const ofdmpn_config* cfg, double symbol_period_s,
                               ofdmpn_eepn_result* out) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    return guarded([&] {
        const ofdmpn::QpskEepnResult r =
            ofdmpn::qpsk_eepn_variance(cfg->value, symbol_period_s);
        out->variance = r.variance;
        out->intrinsic_variance = r.intrinsic_variance;
        out->eepn_variance = r.eepn_variance;
        out->eepn_linewidth_hz = r.eepn_linewidth_hz;
    });
}

ofdmpn_status ofdmpn_ber_floor(double sigma2, double* out) {
    if (ofdmpn_status s = require(out != nullptr, "out pointer is null")) return s;
    return guarded([&] { *out = ofdmpn::ber_floor(sigma2); });
}

ofdmpn_status ofdmpn_max_distance(const ofdmpn_config* cfg, double normalized_variance,
                                  double ber_target, int* unlimited, double* length_km) {
    if (ofdmpn_status s = require(cfg && unlimited && length_km, "null argument")) return s;
    return guarded([&] {
        const ofdmpn::MaxDistanceResult r =
            ofdmpn::solve_max_distance(cfg->value, normalized_variance, ber_target);
        *unlimited = r.unlimited ? 1 : 0;
        *length_km = r.length_km;
    });
}

ofdmpn_status ofdmpn_oracle_variance(const ofdmpn_config* cfg, const ofdmpn_frame* frame,
                                     int received_channel, ofdmpn_variance_result* out) {
    if (ofdmpn_status s = require(cfg && frame && out, "null argument")) return s;
    return guarded([&] {
        *out = to_c(ofdmpn::exact_variance(frame->value, received_channel, cfg->value));
    });
}

ofdmpn_status ofdmpn_mc_variance(const ofdmpn_config* cfg, const ofdmpn_frame* frame,
                                 int received_channel, int64_t trials, uint64_t seed,
                                 ofdmpn_mc_mode mode, ofdmpn_mc_estimate* out) {
    if (ofdmpn_status s = require(cfg && frame && out, "null argument")) return s;
    return guarded([&] {
        const ofdmpn::McMode mc_mode = mode == OFDMPN_MC_EXPONENTIAL
                                           ? ofdmpn::McMode::Exponential
                                           : ofdmpn::McMode::Linearized;
        const ofdmpn::McEstimate est = ofdmpn::mc_variance(
            frame->value, received_channel, cfg->value, trials, seed, mc_mode);
        out->variance = est.variance;
        out->std_err = est.std_err;
        out->trials = est.trials;
        out->mode = est.mode == ofdmpn::McMode::Exponential ? OFDMPN_MC_EXPONENTIAL
                                                            : OFDMPN_MC_LINEARIZED;
        out->seed = est.seed;
    });
}

ofdmpn_status ofdmpn_heuristic_worst_case(const ofdmpn_config* cfg, int n_channels,
                                          ofdmpn_regime regime,
                                          ofdmpn_variance_result* out) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    return guarded([&] {
        *out = to_c(ofdmpn::heuristic_worst_case(n_channels, cfg->value, from_c(regime)));
    });
}

ofdmpn_status ofdmpn_exhaustive_sweep(const ofdmpn_config* cfg, int n_channels,
                                      ofdmpn_regime regime, int audit,
                                      ofdmpn_sweep_outcome* out, int64_t* histogram,
                                      int* worst_frame_digits) {
    if (ofdmpn_status s = require(cfg && out, "null argument")) return s;
    return guarded([&] {
        const ofdmpn::SweepOutcome sweep =
            ofdmpn::exhaustive_sweep(n_channels, cfg->value, from_c(regime), audit != 0);
        out->worst_normalized = sweep.worst_normalized;
        out->worst_k = sweep.worst_k;
        out->cases_evaluated = sweep.cases_evaluated;
        out->frames_evaluated = sweep.frames_evaluated;
        out->bin_width = sweep.bin_width;
        out->audit = sweep.audit ? 1 : 0;
        if (histogram != nullptr) {
            for (int b = 0; b < OFDMPN_HISTOGRAM_BINS; ++b) {
                histogram[b] = sweep.histogram[static_cast<size_t>(b)];
            }
        }
        if (worst_frame_digits != nullptr) {
            for (int r = 0; r < n_channels; ++r) {
                worst_frame_digits[r] = sweep.worst_digits[static_cast<size_t>(r)];
            }
        }
    });
}

/* ---- scenarios --------------------------------------------------------- */

ofdmpn_status ofdmpn_scenario_create_default(ofdmpn_scenario** out) {
    if (ofdmpn_status s = require(out != nullptr, "out pointer is null")) return s;
    *out = nullptr;
    return guarded([&] { *out = wrap_scenario(ofdmpn::default_scenario()); });
}

ofdmpn_status ofdmpn_scenario_parse_text(const char* text, ofdmpn_scenario** out) {
    if (ofdmpn_status s = require(text && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] { *out = wrap_scenario(ofdmpn::parse_scenario_text(text)); });
}

ofdmpn_status ofdmpn_scenario_parse_file(const char* path, ofdmpn_scenario** out) {
    if (ofdmpn_status s = require(path && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] { *out = wrap_scenario(ofdmpn::parse_scenario_file(path)); });
}

void ofdmpn_scenario_destroy(ofdmpn_scenario* scn) { delete scn; }

ofdmpn_status ofdmpn_scenario_config(const ofdmpn_scenario* scn, const ofdmpn_config** out) {
    if (ofdmpn_status s = require(scn && out, "null argument")) return s;
    *out = &scn->view;
    return OFDMPN_OK;
}

ofdmpn_status ofdmpn_scenario_regime(const ofdmpn_scenario* scn, int* out) {
    if (ofdmpn_status s = require(scn && out, "null argument")) return s;
    switch (scn->value.regime) {
        case ofdmpn::Regime::FullTimeCorrelation: *out = OFDMPN_REGIME_FULL_CORR; break;
        case ofdmpn::Regime::PartialCorrelation: *out = OFDMPN_REGIME_PARTIAL; break;
        default: *out = OFDMPN_REGIME_NO_CORR; break;
    }
    return OFDMPN_OK;
}

ofdmpn_status ofdmpn_scenario_set_n_channels(ofdmpn_scenario* scn, int v) {
    return update_config(scn, [v](const ofdmpn::SystemConfig& c) {
        return c.with_n_channels(v);
    });
}

ofdmpn_status ofdmpn_scenario_set_symbol_period_s(ofdmpn_scenario* scn, double v) {
    return update_config(scn, [v](const ofdmpn::SystemConfig& c) {
        return ofdmpn::SystemConfig(c.n_channels(), v, c.fiber(), c.lasers());
    });
}

ofdmpn_status ofdmpn_scenario_set_tx_linewidth_hz(ofdmpn_scenario* scn, double v) {
    return update_config(scn, [v](const ofdmpn::SystemConfig& c) {
        ofdmpn::LaserParams lasers = c.lasers();
        lasers.tx_linewidth_hz = v;
        return ofdmpn::SystemConfig(c.n_channels(), c.symbol_period_s(), c.fiber(), lasers);
    });
}

ofdmpn_status ofdmpn_scenario_set_lo_linewidth_hz(ofdmpn_scenario* scn, double v) {
    return update_config(scn, [v](const ofdmpn::SystemConfig& c) {
        ofdmpn::LaserParams lasers = c.lasers();
        lasers.lo_linewidth_hz = v;
        return ofdmpn::SystemConfig(c.n_channels(), c.symbol_period_s(), c.fiber(), lasers);
    });
}

ofdmpn_status ofdmpn_scenario_set_dispersion_ps_nm_km(ofdmpn_scenario* scn, double v) {
    return update_config(scn, [v](const ofdmpn::SystemConfig& c) {
        ofdmpn::FiberParams fiber = c.fiber();
        fiber.dispersion_ps_nm_km = v;
        return ofdmpn::SystemConfig(c.n_channels(), c.symbol_period_s(), fiber, c.lasers());
    });
}

ofdmpn_status ofdmpn_scenario_set_wavelength_m(ofdmpn_scenario* scn, double v) {
    return update_config(scn, [v](const ofdmpn::SystemConfig& c) {
        ofdmpn::FiberParams fiber = c.fiber();
        fiber.wavelength_m = v;
        return ofdmpn::SystemConfig(c.n_channels(), c.symbol_period_s(), fiber, c.lasers());
    });
}

ofdmpn_status ofdmpn_scenario_set_fiber_length_km(ofdmpn_scenario* scn, double v) {
    return update_config(scn, [v](const ofdmpn::SystemConfig& c) {
        return c.with_length_km(v);
    });
}

ofdmpn_status ofdmpn_scenario_set_distances_km(ofdmpn_scenario* scn, const double* values,
                                               int count) {
    if (ofdmpn_status s = require(scn && values && count > 0, "null or empty list")) return s;
    return guarded([&] {
        std::vector<double> d(values, values + count);
        for (size_t i = 0; i < d.size(); ++i) {
            if (d[i] < 0.0) throw std::invalid_argument("distances must be nonnegative");
            if (i > 0 && d[i] < d[i - 1]) {
                throw std::invalid_argument("distances must be ascending");
            }
        }
        scn->value.distances_km = std::move(d);
    });
}

ofdmpn_status ofdmpn_scenario_set_n_list(ofdmpn_scenario* scn, const int* values,
                                         int count) {
    if (ofdmpn_status s = require(scn && values && count > 0, "null or empty list")) return s;
    return guarded([&] {
        std::vector<int> n(values, values + count);
        for (int v : n) {
            if (v < 3 || v % 2 == 0) {
                throw std::invalid_argument("n_list entries must be odd and >= 3");
            }
        }
        scn->value.n_list = std::move(n);
    });
}

ofdmpn_status ofdmpn_scenario_set_trials(ofdmpn_scenario* scn, int64_t v) {
    if (ofdmpn_status s = require(scn != nullptr, "null scenario")) return s;
    return guarded([&] {
        if (v < 2) throw std::invalid_argument("trials must be >= 2");
        scn->value.trials = v;
    });
}

ofdmpn_status ofdmpn_scenario_set_seed(ofdmpn_scenario* scn, uint64_t v) {
    if (ofdmpn_status s = require(scn != nullptr, "null scenario")) return s;
    scn->value.seed = v;
    return OFDMPN_OK;
}

ofdmpn_status ofdmpn_scenario_set_regime(ofdmpn_scenario* scn, const char* name) {
    if (ofdmpn_status s = require(scn && name, "null argument")) return s;
    return guarded([&] { scn->value.regime = ofdmpn::regime_from_name(name); });
}

ofdmpn_status ofdmpn_scenario_set_qpsk_symbol_period_s(ofdmpn_scenario* scn, double v) {
    if (ofdmpn_status s = require(scn != nullptr, "null scenario")) return s;
    return guarded([&] {
        if (!(v > 0.0)) throw std::invalid_argument("qpsk_symbol_period_s must be positive");
        scn->value.qpsk_symbol_period_s = v;
    });
}

ofdmpn_status ofdmpn_scenario_sweep_distance_csv(const ofdmpn_scenario* scn, char** out) {
    if (ofdmpn_status s = require(scn && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] { *out = copy_string(ofdmpn::sweep_distance_csv(scn->value)); });
}

ofdmpn_status ofdmpn_scenario_sweep_n_csv(const ofdmpn_scenario* scn, char** out) {
    if (ofdmpn_status s = require(scn && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] { *out = copy_string(ofdmpn::sweep_n_csv(scn->value)); });
}

ofdmpn_status ofdmpn_scenario_histogram_csv(const ofdmpn_scenario* scn, int audit,
                                            char** out) {
    if (ofdmpn_status s = require(scn && out, "null argument")) return s;
    *out = nullptr;
    return guarded([&] { *out = copy_string(ofdmpn::histogram_csv(scn->value, audit != 0)); });
}

ofdmpn_status ofdmpn_scenario_validate(const ofdmpn_scenario* scn, char** text, char** csv) {
    if (ofdmpn_status s = require(scn != nullptr, "null scenario")) return s;
    if (text != nullptr) *text = nullptr;
    if (csv != nullptr) *csv = nullptr;
    ofdmpn::ValidateReport report;
    const ofdmpn_status status = guarded([&] { report = ofdmpn::validate_report(scn->value); });
    if (status != OFDMPN_OK) return status;
    if (text != nullptr) *text = copy_string(report.text);
    if (csv != nullptr) *csv = copy_string(report.csv);
    if (!report.ok) {
        return fail(OFDMPN_ERR_INTERNAL, report.failure.c_str());
    }
    return OFDMPN_OK;
}

ofdmpn_status ofdmpn_scenario_max_distance_text(const ofdmpn_scenario* scn,
                                                double ber_target, char** out) {
    if (ofdmpn_status s = require(scn && out, "null argument")) return s;
    *out = nullptr;
    return guarded(
        [&] { *out = copy_string(ofdmpn::max_distance_report(scn->value, ber_target)); });
}

}  // extern "C"
