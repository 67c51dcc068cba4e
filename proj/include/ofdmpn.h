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

/* ofdmpn.h - C API of the ofdm-pn library.
 *
 * Predicts the dispersion-induced phase-noise penalty of coherent optical
 * OFDM systems that use an RF pilot tone for phase-noise cancellation:
 * closed-form CPE+ICI variance under three correlation regimes, an exact
 * Gaussian covariance oracle plus Monte Carlo simulation of the underlying
 * Wiener laser phase noise, the EEPN-limited single-carrier QPSK
 * comparison, BER-floor mapping, worst-case constellation search, and
 * scenario sweeps emitted as CSV.
 *
 * All handles are opaque.  Every fallible function returns an
 * ofdmpn_status; on failure a human-readable message is available from
 * ofdmpn_last_error_message() (thread local).  Strings returned through
 * char** out-parameters are heap allocated and must be released with
 * ofdmpn_string_free().
 */

#ifndef OFDMPN_H
#define OFDMPN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define OFDMPN_API __declspec(dllexport)
#else
#  define OFDMPN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ofdmpn_config ofdmpn_config;     /* OFDM grid + lasers + fiber */
typedef struct ofdmpn_frame ofdmpn_frame;       /* one constellation frame    */
typedef struct ofdmpn_scenario ofdmpn_scenario; /* parsed run configuration   */

typedef enum ofdmpn_status {
    OFDMPN_OK = 0,
    OFDMPN_ERR_INVALID_ARGUMENT = 1,
    OFDMPN_ERR_PARSE = 2,
    OFDMPN_ERR_UNSUPPORTED = 3,
    OFDMPN_ERR_IO = 4,
    OFDMPN_ERR_INTERNAL = 5
} ofdmpn_status;

/* Correlation model for the phase-noise samples entering the CPE+ICI sum. */
typedef enum ofdmpn_regime {
    OFDMPN_REGIME_FULL_CORR = 0, /* samples fully correlated in time  */
    OFDMPN_REGIME_NO_CORR = 1,   /* uncorrelated in time              */
    OFDMPN_REGIME_PARTIAL = 2    /* exact partial channel correlation */
} ofdmpn_regime;

typedef enum ofdmpn_mc_mode {
    OFDMPN_MC_LINEARIZED = 0,  /* first-order phase error             */
    OFDMPN_MC_EXPONENTIAL = 1  /* full exp(j*phase) demodulation      */
} ofdmpn_mc_mode;

typedef struct ofdmpn_variance_result {
    double value;          /* rad^2 */
    double normalized;     /* value / (2*pi*tx_linewidth*tau) */
    int regime;            /* ofdmpn_regime, or -1 for oracle */
    int received_channel;
} ofdmpn_variance_result;

typedef struct ofdmpn_eepn_result {
    double variance;           /* rad^2, intrinsic + EEPN */
    double intrinsic_variance; /* 2*pi*(tx+lo linewidth)*Ts */
    double eepn_variance;      /* dispersion-enhanced LO term */
    double eepn_linewidth_hz;  /* equivalent linewidth of the EEPN term */
} ofdmpn_eepn_result;

typedef struct ofdmpn_mc_estimate {
    double variance;  /* rad^2 */
    double std_err;   /* one standard error of the variance estimate */
    int64_t trials;
    int mode;         /* ofdmpn_mc_mode */
    uint64_t seed;
} ofdmpn_mc_estimate;

#define OFDMPN_HISTOGRAM_BINS 100

typedef struct ofdmpn_sweep_outcome {
    double worst_normalized;
    int worst_k;
    int64_t cases_evaluated;   /* constellation cases covered (incl. symmetry multiplicity) */
    int64_t frames_evaluated;  /* frames actually computed */
    double bin_width;          /* histogram spans [0, n/2) in normalized units */
    int audit;                 /* 1 if symmetry reduction was disabled */
} ofdmpn_sweep_outcome;

OFDMPN_API const char* ofdmpn_version(void);

/* Message describing the most recent failure on the calling thread. */
OFDMPN_API const char* ofdmpn_last_error_message(void);

OFDMPN_API void ofdmpn_string_free(char* s);

/* ---- system configuration -------------------------------------------- */

/* n_channels counts every grid slot including the center pilot; it must be
 * odd and >= 3.  Channel spacing is derived as 1/symbol_period_s. */
OFDMPN_API ofdmpn_status ofdmpn_config_create(int n_channels,
                                              double symbol_period_s,
                                              double tx_linewidth_hz,
                                              double lo_linewidth_hz,
                                              double dispersion_ps_nm_km,
                                              double wavelength_m,
                                              double fiber_length_km,
                                              ofdmpn_config** out);
OFDMPN_API void ofdmpn_config_destroy(ofdmpn_config* cfg);

OFDMPN_API ofdmpn_status ofdmpn_config_pilot_index(const ofdmpn_config* cfg, int* out);
OFDMPN_API ofdmpn_status ofdmpn_config_channel_spacing_hz(const ofdmpn_config* cfg, double* out);

/* Dispersion walk-off delay between adjacent channels, in seconds. */
OFDMPN_API ofdmpn_status ofdmpn_config_walkoff_s(const ofdmpn_config* cfg, double* out);

/* Signed delay of channel r in walk-off steps: (n-1)/2 - r. */
OFDMPN_API ofdmpn_status ofdmpn_config_delay_steps(const ofdmpn_config* cfg, int channel, int* out);

/* Variance of the residual differential phase noise on channel r, rad^2. */
OFDMPN_API ofdmpn_status ofdmpn_config_channel_sigma2(const ofdmpn_config* cfg, int channel, double* out);

/* ---- constellation frames --------------------------------------------- */

/* QPSK symbols are encoded as digits 0..3 meaning j^digit, i.e.
 * {1, j, -1, -j}.  The pilot slot is pinned to 1 (digit 0). */
OFDMPN_API ofdmpn_status ofdmpn_frame_create_all_same(const ofdmpn_config* cfg,
                                                      int qpsk_digit,
                                                      ofdmpn_frame** out);
OFDMPN_API ofdmpn_status ofdmpn_frame_create_qpsk(const ofdmpn_config* cfg,
                                                  const int* digits, int count,
                                                  ofdmpn_frame** out);
/* Arbitrary unit-modulus symbols; slot (n-1)/2 must be exactly 1+0j. */
OFDMPN_API ofdmpn_status ofdmpn_frame_create_complex(const ofdmpn_config* cfg,
                                                     const double* re, const double* im,
                                                     int count, ofdmpn_frame** out);
OFDMPN_API void ofdmpn_frame_destroy(ofdmpn_frame* frame);
OFDMPN_API ofdmpn_status ofdmpn_frame_symbol(const ofdmpn_frame* frame, int channel,
                                             double* re, double* im);

/* ---- closed-form variance, EEPN, BER floor ---------------------------- */

/* CPE+ICI phase-noise variance seen by received channel k (k must not be
 * the pilot slot) under the requested correlation regime. */
OFDMPN_API ofdmpn_status ofdmpn_variance(const ofdmpn_config* cfg,
                                         const ofdmpn_frame* frame,
                                         int received_channel,
                                         ofdmpn_regime regime,
                                         ofdmpn_variance_result* out);

/* Correlation coefficient between the residual phase noise of channels s
 * and r: sqrt(min(sigma_s^2, sigma_r^2) / max(sigma_s^2, sigma_r^2)). */
OFDMPN_API ofdmpn_status ofdmpn_rho(const ofdmpn_config* cfg, int s, int r, double* out);

/* Phase-noise variance of a single-carrier QPSK system with electronic
 * dispersion compensation (intrinsic beat linewidth + EEPN). */
OFDMPN_API ofdmpn_status ofdmpn_qpsk_eepn(const ofdmpn_config* cfg,
                                          double symbol_period_s,
                                          ofdmpn_eepn_result* out);

/* BER floor of a QPSK decision at phase-noise variance sigma2 (rad^2). */
OFDMPN_API ofdmpn_status ofdmpn_ber_floor(double sigma2, double* out);

/* Largest fiber length whose BER floor stays at ber_target, for a system
 * whose variance is normalized_variance * 2*pi*tx_linewidth*tau(L).
 * Sets *unlimited to 1 (and *length_km to INFINITY) when the variance does
 * not grow with distance. */
OFDMPN_API ofdmpn_status ofdmpn_max_distance(const ofdmpn_config* cfg,
                                             double normalized_variance,
                                             double ber_target,
                                             int* unlimited, double* length_km);

/* ---- oracle: exact covariance + Monte Carlo --------------------------- */

/* Exact variance of the linearized phase error, from the Gaussian
 * covariance of the differential Wiener samples. */
OFDMPN_API ofdmpn_status ofdmpn_oracle_variance(const ofdmpn_config* cfg,
                                                const ofdmpn_frame* frame,
                                                int received_channel,
                                                ofdmpn_variance_result* out);

/* Monte Carlo over sampled Wiener paths; deterministic for a given seed
 * and trial count, independent of worker count. */
OFDMPN_API ofdmpn_status ofdmpn_mc_variance(const ofdmpn_config* cfg,
                                            const ofdmpn_frame* frame,
                                            int received_channel,
                                            int64_t trials, uint64_t seed,
                                            ofdmpn_mc_mode mode,
                                            ofdmpn_mc_estimate* out);

/* ---- worst-case search ------------------------------------------------ */

/* All-data-symbols-equal frame received on channel 0: the design worst case. */
OFDMPN_API ofdmpn_status ofdmpn_heuristic_worst_case(const ofdmpn_config* cfg,
                                                     int n_channels,
                                                     ofdmpn_regime regime,
                                                     ofdmpn_variance_result* out);

/* Exhaustive sweep over every QPSK frame and received channel.  Only
 * n_channels in {5,7,9,11} are accepted; the case count (n-1)*4^(n-1)
 * explodes beyond that.  histogram must hold OFDMPN_HISTOGRAM_BINS
 * entries (may be NULL).  worst_frame_digits must hold n_channels entries
 * (may be NULL). */
OFDMPN_API ofdmpn_status ofdmpn_exhaustive_sweep(const ofdmpn_config* cfg,
                                                 int n_channels,
                                                 ofdmpn_regime regime,
                                                 int audit,
                                                 ofdmpn_sweep_outcome* out,
                                                 int64_t* histogram,
                                                 int* worst_frame_digits);

/* ---- scenarios (config files, CSV sweeps, validation) ----------------- */

OFDMPN_API ofdmpn_status ofdmpn_scenario_create_default(ofdmpn_scenario** out);
OFDMPN_API ofdmpn_status ofdmpn_scenario_parse_text(const char* text, ofdmpn_scenario** out);
OFDMPN_API ofdmpn_status ofdmpn_scenario_parse_file(const char* path, ofdmpn_scenario** out);
OFDMPN_API void ofdmpn_scenario_destroy(ofdmpn_scenario* scn);

/* Borrowed view of the scenario's physical configuration; valid while the
 * scenario lives.  Do not destroy. */
OFDMPN_API ofdmpn_status ofdmpn_scenario_config(const ofdmpn_scenario* scn,
                                                const ofdmpn_config** out);

/* The scenario's selected correlation regime (ofdmpn_regime). */
OFDMPN_API ofdmpn_status ofdmpn_scenario_regime(const ofdmpn_scenario* scn, int* out);

/* Field overrides (CLI flags take precedence over file keys). */
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_n_channels(ofdmpn_scenario* scn, int v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_symbol_period_s(ofdmpn_scenario* scn, double v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_tx_linewidth_hz(ofdmpn_scenario* scn, double v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_lo_linewidth_hz(ofdmpn_scenario* scn, double v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_dispersion_ps_nm_km(ofdmpn_scenario* scn, double v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_wavelength_m(ofdmpn_scenario* scn, double v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_fiber_length_km(ofdmpn_scenario* scn, double v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_distances_km(ofdmpn_scenario* scn,
                                                          const double* values, int count);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_n_list(ofdmpn_scenario* scn,
                                                    const int* values, int count);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_trials(ofdmpn_scenario* scn, int64_t v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_seed(ofdmpn_scenario* scn, uint64_t v);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_regime(ofdmpn_scenario* scn, const char* name);
OFDMPN_API ofdmpn_status ofdmpn_scenario_set_qpsk_symbol_period_s(ofdmpn_scenario* scn, double v);

/* Variance and BER floor versus distance, one row per configured distance.
 * Columns: L_km,sigma2_ofdm_nocorr,sigma2_ofdm_partial,sigma2_ofdm_fullcorr,
 * sigma2_qpsk,ber_ofdm_nocorr,ber_ofdm_partial,ber_ofdm_fullcorr,ber_qpsk */
OFDMPN_API ofdmpn_status ofdmpn_scenario_sweep_distance_csv(const ofdmpn_scenario* scn, char** out);

/* Worst-case normalized variance versus channel count.
 * Columns: N,norm_nocorr,norm_partial,norm_fullcorr */
OFDMPN_API ofdmpn_status ofdmpn_scenario_sweep_n_csv(const ofdmpn_scenario* scn, char** out);

/* Exhaustive-sweep histograms for every configured N.
 * Columns: N,bin_lo,bin_hi,count plus one '#' summary line per N. */
OFDMPN_API ofdmpn_status ofdmpn_scenario_histogram_csv(const ofdmpn_scenario* scn,
                                                       int audit, char** out);

/* Cross-checks the closed forms against the exact covariance oracle and
 * Monte Carlo.  Fails (OFDMPN_ERR_INTERNAL) if the oracle and Monte Carlo
 * disagree beyond three standard errors anywhere on the grid.  text and
 * csv may each be NULL if not wanted. */
OFDMPN_API ofdmpn_status ofdmpn_scenario_validate(const ofdmpn_scenario* scn,
                                                  char** text, char** csv);

/* Maximum-reach table per system variant at the given BER-floor target. */
OFDMPN_API ofdmpn_status ofdmpn_scenario_max_distance_text(const ofdmpn_scenario* scn,
                                                           double ber_target, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OFDMPN_H */
