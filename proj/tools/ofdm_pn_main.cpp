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

// ofdm-pn: phase-noise penalty calculator for pilot-tone CO-OFDM links.
// Thin shell over the libofdmpn C API; every number is computed in the
// library so CLI output matches library output bit for bit.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ofdmpn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

struct ScenarioDeleter {
    void operator()(ofdmpn_scenario* p) const { ofdmpn_scenario_destroy(p); }
};
struct FrameDeleter {
    void operator()(ofdmpn_frame* p) const { ofdmpn_frame_destroy(p); }
};
using ScenarioPtr = std::unique_ptr<ofdmpn_scenario, ScenarioDeleter>;
using FramePtr = std::unique_ptr<ofdmpn_frame, FrameDeleter>;

// Owns a string allocated by the library.
class ApiString {
public:
    char** receive() { return &ptr_; }
    const char* get() const { return ptr_ ? ptr_ : ""; }
    ~ApiString() { ofdmpn_string_free(ptr_); }

private:
    char* ptr_ = nullptr;
};

[[noreturn]] void die(const std::string& context) {
    std::cerr << "ofdm-pn: " << context << ": " << ofdmpn_last_error_message() << "\n";
    std::exit(kExitError);
}

void check(ofdmpn_status status, const char* context) {
    if (status != OFDMPN_OK) die(context);
}

struct Options {
    std::string config_path;
    std::string output_path;

    int n_channels = 0;
    double symbol_period = 0.0;
    double tx_linewidth = 0.0;
    double lo_linewidth = 0.0;
    double dispersion = 0.0;
    double wavelength = 0.0;
    double length_km = 0.0;
    std::vector<double> distances;
    std::vector<int> n_list;
    std::int64_t trials = 0;
    std::uint64_t seed = 1;
    std::string regime;
    double qpsk_ts = 0.0;
};

ScenarioPtr build_scenario(const CLI::App& app, const Options& opt) {
    ofdmpn_scenario* raw = nullptr;
    if (!opt.config_path.empty()) {
        check(ofdmpn_scenario_parse_file(opt.config_path.c_str(), &raw), "config");
    } else {
        check(ofdmpn_scenario_create_default(&raw), "config");
    }
    ScenarioPtr scn(raw);

    auto given = [&app](const char* name) { return app.count(name) > 0; };
    if (given("--n")) check(ofdmpn_scenario_set_n_channels(raw, opt.n_channels), "--n");
    if (given("--symbol-period")) {
        check(ofdmpn_scenario_set_symbol_period_s(raw, opt.symbol_period), "--symbol-period");
    }
    if (given("--tx-linewidth")) {
        check(ofdmpn_scenario_set_tx_linewidth_hz(raw, opt.tx_linewidth), "--tx-linewidth");
    }
    if (given("--lo-linewidth")) {
        check(ofdmpn_scenario_set_lo_linewidth_hz(raw, opt.lo_linewidth), "--lo-linewidth");
    }
    if (given("--dispersion")) {
        check(ofdmpn_scenario_set_dispersion_ps_nm_km(raw, opt.dispersion), "--dispersion");
    }
    if (given("--wavelength")) {
        check(ofdmpn_scenario_set_wavelength_m(raw, opt.wavelength), "--wavelength");
    }
    if (given("--length")) {
        check(ofdmpn_scenario_set_fiber_length_km(raw, opt.length_km), "--length");
    }
    if (given("--distances")) {
        check(ofdmpn_scenario_set_distances_km(raw, opt.distances.data(),
                                               static_cast<int>(opt.distances.size())),
              "--distances");
    }
    if (given("--n-list")) {
        check(ofdmpn_scenario_set_n_list(raw, opt.n_list.data(),
                                         static_cast<int>(opt.n_list.size())),
              "--n-list");
    }
    if (given("--trials")) check(ofdmpn_scenario_set_trials(raw, opt.trials), "--trials");
    if (given("--seed")) check(ofdmpn_scenario_set_seed(raw, opt.seed), "--seed");
    if (given("--regime")) {
        check(ofdmpn_scenario_set_regime(raw, opt.regime.c_str()), "--regime");
    }
    if (given("--qpsk-ts")) {
        check(ofdmpn_scenario_set_qpsk_symbol_period_s(raw, opt.qpsk_ts), "--qpsk-ts");
    }
    return scn;
}

void emit(const Options& opt, const std::string& content) {
    if (opt.output_path.empty()) {
        std::cout << content;
        return;
    }
    std::FILE* f = std::fopen(opt.output_path.c_str(), "wb");
    if (f == nullptr) {
        std::cerr << "ofdm-pn: cannot open output file '" << opt.output_path << "'\n";
        std::exit(kExitError);
    }
    const size_t written = std::fwrite(content.data(), 1, content.size(), f);
    if (std::fclose(f) != 0 || written != content.size()) {
        std::cerr << "ofdm-pn: short write to '" << opt.output_path << "'\n";
        std::exit(kExitError);
    }
}

ofdmpn_regime regime_code(const ofdmpn_scenario* scn) {
    // --regime was already pushed into the scenario by build_scenario.
    int regime = OFDMPN_REGIME_NO_CORR;
    check(ofdmpn_scenario_regime(scn, &regime), "regime");
    return static_cast<ofdmpn_regime>(regime);
}

int run_walkoff(const Options& opt, const ofdmpn_scenario* scn) {
    const ofdmpn_config* cfg = nullptr;
    check(ofdmpn_scenario_config(scn, &cfg), "walkoff");
    double tau = 0.0, spacing = 0.0;
    check(ofdmpn_config_walkoff_s(cfg, &tau), "walkoff");
    check(ofdmpn_config_channel_spacing_hz(cfg, &spacing), "walkoff");
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "walkoff tau = %.12g s (%.6g ps) at channel spacing %.12g Hz\n", tau,
                  tau * 1e12, spacing);
    emit(opt, buf);
    return kExitOk;
}

FramePtr make_frame(const ofdmpn_config* cfg, const std::string& frame_digits) {
    ofdmpn_frame* raw = nullptr;
    if (frame_digits.empty()) {
        check(ofdmpn_frame_create_all_same(cfg, 0, &raw), "--frame");
        return FramePtr(raw);
    }
    std::vector<int> digits;
    digits.reserve(frame_digits.size());
    for (char c : frame_digits) {
        if (c < '0' || c > '3') {
            std::cerr << "ofdm-pn: --frame must be a string of digits 0..3\n";
            std::exit(kExitError);
        }
        digits.push_back(c - '0');
    }
    check(ofdmpn_frame_create_qpsk(cfg, digits.data(), static_cast<int>(digits.size()),
                                   &raw),
          "--frame");
    return FramePtr(raw);
}

int run_variance(const Options& opt, const ofdmpn_scenario* scn, int k,
                 const std::string& frame_digits, bool with_oracle,
                 std::int64_t mc_trials) {
    const ofdmpn_config* cfg = nullptr;
    check(ofdmpn_scenario_config(scn, &cfg), "variance");
    const FramePtr frame = make_frame(cfg, frame_digits);
    const ofdmpn_regime regime = regime_code(scn);

    std::ostringstream out;
    ofdmpn_variance_result res{};
    check(ofdmpn_variance(cfg, frame.get(), k, regime, &res), "variance");
    const char* regime_names[] = {"fullcorr", "nocorr", "partial"};
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s value = %.12g rad^2, normalized = %.12g\n",
                  regime_names[res.regime], res.value, res.normalized);
    out << buf;

    if (with_oracle) {
        ofdmpn_variance_result oracle{};
        check(ofdmpn_oracle_variance(cfg, frame.get(), k, &oracle), "oracle");
        std::snprintf(buf, sizeof(buf), "%-10s value = %.12g rad^2, normalized = %.12g\n",
                      "oracle", oracle.value, oracle.normalized);
        out << buf;
    }
    if (mc_trials > 0) {
        ofdmpn_mc_estimate lin{}, expm{};
        check(ofdmpn_mc_variance(cfg, frame.get(), k, mc_trials, opt.seed,
                                 OFDMPN_MC_LINEARIZED, &lin),
              "mc");
        check(ofdmpn_mc_variance(cfg, frame.get(), k, mc_trials, opt.seed,
                                 OFDMPN_MC_EXPONENTIAL, &expm),
              "mc");
        std::snprintf(buf, sizeof(buf),
                      "%-10s value = %.12g rad^2 (stderr %.6g, %lld trials)\n", "mc_lin",
                      lin.variance, lin.std_err, static_cast<long long>(lin.trials));
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "%-10s value = %.12g rad^2 (stderr %.6g, %lld trials)\n", "mc_exp",
                      expm.variance, expm.std_err, static_cast<long long>(expm.trials));
        out << buf;
    }
    emit(opt, out.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-noise penalty of pilot-tone coherent optical OFDM links"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config_path, "scenario config file (key = value lines)");
    app.add_option("-o,--output", opt.output_path, "write output to this file");
    app.add_option("--n", opt.n_channels, "channel count incl. pilot (odd)");
    app.add_option("--symbol-period", opt.symbol_period, "OFDM symbol period [s]");
    app.add_option("--tx-linewidth", opt.tx_linewidth, "Tx laser linewidth [Hz]");
    app.add_option("--lo-linewidth", opt.lo_linewidth, "LO laser linewidth [Hz]");
    app.add_option("--dispersion", opt.dispersion, "fiber dispersion [ps/(nm km)]");
    app.add_option("--wavelength", opt.wavelength, "wavelength [m]");
    app.add_option("--length", opt.length_km, "fiber length [km]");
    app.add_option("--distances", opt.distances, "sweep distances [km]")->delimiter(',');
    app.add_option("--n-list", opt.n_list, "channel counts for N sweeps")->delimiter(',');
    app.add_option("--trials", opt.trials, "Monte Carlo trials");
    app.add_option("--seed", opt.seed, "random seed");
    app.add_option("--regime", opt.regime, "fullcorr | nocorr | partial");
    app.add_option("--qpsk-ts", opt.qpsk_ts, "QPSK comparison symbol period [s]");

    CLI::App* cmd_walkoff = app.add_subcommand("walkoff", "dispersion walk-off delay");

    int var_k = 0;
    std::string var_frame;
    bool var_oracle = false;
    std::int64_t var_mc_trials = 0;
    CLI::App* cmd_variance =
        app.add_subcommand("variance", "CPE+ICI variance for one frame and channel");
    cmd_variance->add_option("--k", var_k, "received channel index");
    cmd_variance->add_option("--frame", var_frame, "QPSK digits 0..3, one per channel");
    cmd_variance->add_flag("--oracle", var_oracle, "also evaluate the covariance oracle");
    cmd_variance->add_option("--mc-trials", var_mc_trials, "also run Monte Carlo");

    CLI::App* cmd_sweep_distance =
        app.add_subcommand("sweep-distance", "variance and BER floor vs distance (CSV)");
    CLI::App* cmd_sweep_n =
        app.add_subcommand("sweep-n", "worst-case normalized variance vs N (CSV)");

    bool hist_audit = false;
    CLI::App* cmd_histogram =
        app.add_subcommand("histogram", "exhaustive constellation sweep histograms (CSV)");
    cmd_histogram->add_flag("--audit", hist_audit,
                            "disable symmetry reduction (full enumeration)");

    CLI::App* cmd_validate =
        app.add_subcommand("validate", "closed forms vs oracle vs Monte Carlo");

    double ber_target = 1.0e-4;
    CLI::App* cmd_max_distance =
        app.add_subcommand("max-distance", "maximum reach per system variant");
    cmd_max_distance->add_option("--ber-target", ber_target, "BER floor target");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const ScenarioPtr scn = build_scenario(app, opt);

    if (cmd_walkoff->parsed()) return run_walkoff(opt, scn.get());
    if (cmd_variance->parsed()) {
        return run_variance(opt, scn.get(), var_k, var_frame, var_oracle, var_mc_trials);
    }
    if (cmd_sweep_distance->parsed()) {
        ApiString csv;
        check(ofdmpn_scenario_sweep_distance_csv(scn.get(), csv.receive()), "sweep-distance");
        emit(opt, csv.get());
        return kExitOk;
    }
    if (cmd_sweep_n->parsed()) {
        ApiString csv;
        check(ofdmpn_scenario_sweep_n_csv(scn.get(), csv.receive()), "sweep-n");
        emit(opt, csv.get());
        return kExitOk;
    }
    if (cmd_histogram->parsed()) {
        ApiString csv;
        check(ofdmpn_scenario_histogram_csv(scn.get(), hist_audit ? 1 : 0, csv.receive()),
              "histogram");
        emit(opt, csv.get());
        return kExitOk;
    }
    if (cmd_validate->parsed()) {
        ApiString text;
        ApiString csv;
        const ofdmpn_status status =
            ofdmpn_scenario_validate(scn.get(), text.receive(), csv.receive());
        // The text report goes to stdout; the CSV goes to --output if given.
        std::cout << text.get();
        if (!opt.output_path.empty()) {
            Options csv_opt = opt;
            emit(csv_opt, csv.get());
        }
        if (status != OFDMPN_OK) {
            std::cerr << "ofdm-pn: validate: " << ofdmpn_last_error_message() << "\n";
            return kExitError;
        }
        return kExitOk;
    }
    if (cmd_max_distance->parsed()) {
        ApiString text;
        check(ofdmpn_scenario_max_distance_text(scn.get(), ber_target, text.receive()),
              "max-distance");
        emit(opt, text.get());
        return kExitOk;
    }
    return kExitUsage;
}
