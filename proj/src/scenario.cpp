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

#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "oracle.hpp"
#include "rng.hpp"
#include "search.hpp"

namespace ofdmpn {

namespace {

constexpr double kPi = 3.14159265358979323846;

const char* const kRequiredKeys[] = {
    "n_channels",  "symbol_period_s",     "tx_linewidth_hz", "lo_linewidth_hz",
    "dispersion_ps_nm_km", "wavelength_m", "fiber_length_km",
};

const char* const kOptionalKeys[] = {
    "distances_km", "n_list", "trials", "seed", "regime", "qpsk_symbol_period_s",
};

bool is_known_key(const std::string& key) {
    for (const char* k : kRequiredKeys) {
        if (key == k) return true;
    }
    for (const char* k : kOptionalKeys) {
        if (key == k) return true;
    }
    return false;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail_at(int line, const std::string& message) {
    throw ParseError("parse error at line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& value, int line) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
        fail_at(line, "malformed number '" + value + "'");
    }
    return v;
}

long long parse_int(const std::string& value, int line) {
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        fail_at(line, "malformed integer '" + value + "'");
    }
    return v;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(value);
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

std::vector<double> default_distances() {
    std::vector<double> d;
    for (int km = 0; km <= 600; km += 25) d.push_back(static_cast<double>(km));
    return d;
}

std::vector<int> default_sweep_n_list() {
    return {5, 7, 9, 11, 15, 21, 31, 51, 71, 101, 151, 201};
}

}  // namespace

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::FullTimeCorrelation: return "fullcorr";
        case Regime::NoTimeCorrelation: return "nocorr";
        case Regime::PartialCorrelation: return "partial";
        case Regime::QpskEepn: return "qpsk_eepn";
        case Regime::Oracle: return "oracle";
        case Regime::MonteCarlo: return "mc";
    }
    return "unknown";
}

Regime regime_from_name(const std::string& name) {
    if (name == "fullcorr") return Regime::FullTimeCorrelation;
    if (name == "nocorr") return Regime::NoTimeCorrelation;
    if (name == "partial") return Regime::PartialCorrelation;
    throw std::invalid_argument("unknown regime '" + name +
                                "' (expected fullcorr, nocorr or partial)");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

ScenarioConfig default_scenario() {
    // Standard 1 GS/s grid on 100 km of D=16 fiber at 1550 nm, 4 MHz DFB
    // linewidths; the documented baseline for every CLI command.
    FiberParams fiber{16.0, 1.55e-6, 100.0};
    LaserParams lasers{4.0e6, 4.0e6};
    ScenarioConfig scn{SystemConfig(101, 1.0e-9, fiber, lasers),
                       default_distances(),
                       {},
                       20000,
                       1,
                       Regime::NoTimeCorrelation,
                       0.0};
    return scn;
}

ScenarioConfig parse_scenario_text(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)
    std::stringstream stream(text);
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail_at(line, "expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!is_known_key(key)) {
            fail_at(line, "unknown key '" + key + "'");
        }
        if (entries.count(key) != 0) {
            fail_at(line, "duplicate key '" + key + "'");
        }
        if (value.empty()) {
            fail_at(line, "missing value for '" + key + "'");
        }
        entries.emplace(key, std::make_pair(value, line));
    }

    std::string missing;
    for (const char* k : kRequiredKeys) {
        if (entries.count(k) == 0) {
            if (!missing.empty()) missing += ", ";
            missing += k;
        }
    }
    if (!missing.empty()) {
        throw ParseError("missing required keys: " + missing);
    }

    auto value_of = [&entries](const char* key) -> const std::pair<std::string, int>& {
        return entries.at(key);
    };

    const auto& n_entry = value_of("n_channels");
    const long long n = parse_int(n_entry.first, n_entry.second);
    if (n < 3 || n % 2 == 0) {
        fail_at(n_entry.second, "n_channels must be odd and >= 3");
    }

    auto number_of = [&](const char* key) {
        const auto& e = value_of(key);
        return parse_double(e.first, e.second);
    };

    FiberParams fiber;
    fiber.dispersion_ps_nm_km = number_of("dispersion_ps_nm_km");
    fiber.wavelength_m = number_of("wavelength_m");
    fiber.length_km = number_of("fiber_length_km");
    LaserParams lasers;
    lasers.tx_linewidth_hz = number_of("tx_linewidth_hz");
    lasers.lo_linewidth_hz = number_of("lo_linewidth_hz");

    ScenarioConfig scn{SystemConfig(static_cast<int>(n), number_of("symbol_period_s"),
                                    fiber, lasers),
                       default_distances(),
                       {},
                       20000,
                       1,
                       Regime::NoTimeCorrelation,
                       0.0};

    if (entries.count("distances_km") != 0) {
        const auto& e = entries.at("distances_km");
        std::vector<double> distances;
        for (const std::string& item : split_list(e.first)) {
            distances.push_back(parse_double(item, e.second));
        }
        if (distances.empty()) fail_at(e.second, "distances_km must not be empty");
        for (size_t i = 0; i < distances.size(); ++i) {
            if (distances[i] < 0.0) fail_at(e.second, "distances must be nonnegative");
            if (i > 0 && distances[i] < distances[i - 1]) {
                fail_at(e.second, "distances must be ascending");
            }
        }
        scn.distances_km = std::move(distances);
    }
    if (entries.count("n_list") != 0) {
        const auto& e = entries.at("n_list");
        std::vector<int> n_list;
        for (const std::string& item : split_list(e.first)) {
            const long long v = parse_int(item, e.second);
            if (v < 3 || v % 2 == 0) fail_at(e.second, "n_list entries must be odd and >= 3");
            n_list.push_back(static_cast<int>(v));
        }
        if (n_list.empty()) fail_at(e.second, "n_list must not be empty");
        scn.n_list = std::move(n_list);
    }
    if (entries.count("trials") != 0) {
        const auto& e = entries.at("trials");
        const long long v = parse_int(e.first, e.second);
        if (v < 2) fail_at(e.second, "trials must be >= 2");
        scn.trials = v;
    }
    if (entries.count("seed") != 0) {
        const auto& e = entries.at("seed");
        char* end = nullptr;
        const unsigned long long v = std::strtoull(e.first.c_str(), &end, 10);
        if (end == e.first.c_str() || *end != '\0') {
            fail_at(e.second, "malformed integer '" + e.first + "'");
        }
        scn.seed = v;
    }
    if (entries.count("regime") != 0) {
        const auto& e = entries.at("regime");
        try {
            scn.regime = regime_from_name(e.first);
        } catch (const std::invalid_argument& ex) {
            fail_at(e.second, ex.what());
        }
    }
    if (entries.count("qpsk_symbol_period_s") != 0) {
        const auto& e = entries.at("qpsk_symbol_period_s");
        const double v = parse_double(e.first, e.second);
        if (!(v > 0.0)) fail_at(e.second, "qpsk_symbol_period_s must be positive");
        scn.qpsk_symbol_period_s = v;
    }
    return scn;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

std::string sweep_distance_csv(const ScenarioConfig& scenario) {
    const SystemConfig& base = scenario.config;
    // The normalized worst case is distance independent (the correlation
    // matrix only needs some nonzero walk-off), so compute it once and
    // scale by tau(L); every sigma2 column is then exactly linear in L.
    double ref_km = 100.0;
    for (double d : scenario.distances_km) {
        if (d > 0.0) {
            ref_km = d;
            break;
        }
    }
    const SystemConfig ref = base.with_length_km(ref_km);
    const int n = base.n_channels();
    const double norm_nc = heuristic_worst_case(n, ref, Regime::NoTimeCorrelation).normalized;
    const double norm_pc = heuristic_worst_case(n, ref, Regime::PartialCorrelation).normalized;
    const double norm_fc = heuristic_worst_case(n, ref, Regime::FullTimeCorrelation).normalized;
    const double unit_per_km =
        2.0 * kPi * base.lasers().tx_linewidth_hz *
        std::abs(walkoff(base.with_length_km(1.0)).tau_s);
    const double ts = scenario.qpsk_ts();

    std::string csv =
        "L_km,sigma2_ofdm_nocorr,sigma2_ofdm_partial,sigma2_ofdm_fullcorr,"
        "sigma2_qpsk,ber_ofdm_nocorr,ber_ofdm_partial,ber_ofdm_fullcorr,ber_qpsk\n";
    for (double km : scenario.distances_km) {
        const double unit = unit_per_km * km;
        const double s_nc = norm_nc * unit;
        const double s_pc = norm_pc * unit;
        const double s_fc = norm_fc * unit;
        const double s_qpsk = qpsk_eepn_variance(base.with_length_km(km), ts).variance;
        csv += format_number(km);
        for (double v : {s_nc, s_pc, s_fc, s_qpsk}) csv += "," + format_number(v);
        for (double v : {s_nc, s_pc, s_fc, s_qpsk}) csv += "," + format_number(ber_floor(v));
        csv += "\n";
    }
    return csv;
}

std::string sweep_n_csv(const ScenarioConfig& scenario) {
    std::vector<int> n_list =
        scenario.n_list.empty() ? default_sweep_n_list() : scenario.n_list;
    std::sort(n_list.begin(), n_list.end());
    n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());

    const std::vector<NSweepRow> rows = channel_count_sweep(n_list, scenario.config);
    std::string csv = "N,norm_nocorr,norm_partial,norm_fullcorr\n";
    for (const NSweepRow& row : rows) {
        csv += std::to_string(row.n);
        csv += "," + format_number(row.norm_no_corr);
        csv += "," + format_number(row.norm_partial);
        csv += "," + format_number(row.norm_full_corr);
        csv += "\n";
    }
    return csv;
}

std::string histogram_csv(const ScenarioConfig& scenario, bool audit) {
    const std::vector<int> n_list =
        scenario.n_list.empty() ? std::vector<int>{5, 7, 9, 11} : scenario.n_list;

    std::string csv = "N,bin_lo,bin_hi,count\n";
    for (int n : n_list) {
        const SweepOutcome sweep =
            exhaustive_sweep(n, scenario.config, scenario.regime, audit);
        for (int b = 0; b < kHistogramBins; ++b) {
            csv += std::to_string(n);
            csv += "," + format_number(b * sweep.bin_width);
            csv += "," + format_number((b + 1) * sweep.bin_width);
            csv += "," + std::to_string(sweep.histogram[static_cast<size_t>(b)]);
            csv += "\n";
        }
        std::string digits;
        for (int d : sweep.worst_digits) digits += static_cast<char>('0' + d);
        csv += "# summary N=" + std::to_string(n) +
               " regime=" + regime_name(sweep.regime) +
               " worst_normalized=" + format_number(sweep.worst_normalized) +
               " worst_k=" + std::to_string(sweep.worst_k) + " worst_frame=" + digits +
               " cases_evaluated=" + std::to_string(sweep.cases_evaluated) +
               " frames_evaluated=" + std::to_string(sweep.frames_evaluated) +
               " audit=" + (sweep.audit ? "1" : "0") + "\n";
    }
    return csv;
}

namespace {

struct ValidateRow {
    int n = 0;
    double km = 0.0;
    int k = 0;
    std::string frame_digits;
    double full = 0.0, nocorr = 0.0, partial = 0.0, partial_rho1 = 0.0;
    double oracle = 0.0;
    McEstimate mc_lin, mc_exp;
};

std::string frame_to_digits(const std::vector<int>& digits) {
    std::string s;
    for (int d : digits) s += static_cast<char>('0' + d);
    return s;
}

double safe_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

ValidateReport validate_report(const ScenarioConfig& scenario) {
    if (scenario.trials < 1000) {
        throw std::invalid_argument("validate requires trials >= 1000");
    }
    const SystemConfig& base = scenario.config;

    // Small grid: the oracle assembles an (N^2 x N^2) covariance, so keep N
    // at simulation scale; distances pick up the scenario's range.
    const std::vector<int> n_values = {5, 11};
    std::vector<double> distances = {0.0};
    {
        double lo = 0.0, hi = 0.0;
        for (double d : scenario.distances_km) {
            if (d > 0.0) {
                if (lo == 0.0) lo = d;
                hi = d;
            }
        }
        if (lo == 0.0) {
            lo = 100.0;
            hi = 500.0;
        }
        distances.push_back(lo);
        if (hi > lo) distances.push_back(hi);
    }

    std::vector<ValidateRow> rows;
    std::uint64_t stream = 0;
    for (int n : n_values) {
        const int pilot = (n - 1) / 2;
        for (double km : distances) {
            const SystemConfig cfg = base.with_n_channels(n).with_length_km(km);
            for (int variant = 0; variant < 3; ++variant) {
                std::vector<int> digits(static_cast<size_t>(n), 0);
                int k = 0;
                if (variant > 0) {
                    std::mt19937_64 engine = stream_engine(scenario.seed, 0xA11CE + stream);
                    for (int r = 0; r < n; ++r) {
                        if (r == pilot) continue;
                        digits[static_cast<size_t>(r)] = static_cast<int>(engine() % 4);
                    }
                    k = static_cast<int>(engine() % static_cast<std::uint64_t>(n));
                    if (k == pilot) k = (k + 1) % n;
                }
                ++stream;
                const SymbolFrame frame = SymbolFrame::from_qpsk_digits(digits);

                ValidateRow row;
                row.n = n;
                row.km = km;
                row.k = k;
                row.frame_digits = frame_to_digits(digits);
                row.full = variance_full_corr(frame, k, cfg).value;
                row.nocorr = variance_no_corr(frame, k, cfg).value;
                row.partial = variance_partial(frame, k, cfg).value;
                row.partial_rho1 =
                    variance_partial(frame, k, cfg, RhoMode::ForcedUnit).value;
                row.oracle = exact_variance(frame, k, cfg).value;
                row.mc_lin = mc_variance(frame, k, cfg, scenario.trials,
                                         scenario.seed + stream, McMode::Linearized);
                row.mc_exp = mc_variance(frame, k, cfg, scenario.trials,
                                         scenario.seed + stream, McMode::Exponential);
                rows.push_back(std::move(row));
            }
        }
    }

    std::string csv =
        "n,L_km,k,frame,sigma2_fullcorr,sigma2_nocorr,sigma2_partial,"
        "sigma2_partial_rho1,sigma2_oracle,sigma2_mc_lin,mc_lin_stderr,"
        "sigma2_mc_exp,ratio_nocorr_oracle,ratio_partial_oracle,mc_within_3se\n";

    ValidateReport report;
    report.ok = true;
    double worst_pull = 0.0;
    double ratio_nc_lo = std::numeric_limits<double>::infinity(), ratio_nc_hi = 0.0;
    double ratio_pc_lo = std::numeric_limits<double>::infinity(), ratio_pc_hi = 0.0;
    for (const ValidateRow& row : rows) {
        const double diff = std::abs(row.mc_lin.variance - row.oracle);
        const bool within = diff <= 3.0 * row.mc_lin.std_err;
        if (!within) {
            report.ok = false;
            report.failure = "oracle vs Monte Carlo disagreement at N=" +
                             std::to_string(row.n) + " L=" + format_number(row.km) +
                             " k=" + std::to_string(row.k) + ": |" +
                             format_number(row.mc_lin.variance) + " - " +
                             format_number(row.oracle) + "| > 3*" +
                             format_number(row.mc_lin.std_err);
        }
        if (row.mc_lin.std_err > 0.0) {
            worst_pull = std::max(worst_pull, diff / row.mc_lin.std_err);
        }
        const double ratio_nc = safe_ratio(row.nocorr, row.oracle);
        const double ratio_pc = safe_ratio(row.partial, row.oracle);
        if (row.km > 0.0) {
            ratio_nc_lo = std::min(ratio_nc_lo, ratio_nc);
            ratio_nc_hi = std::max(ratio_nc_hi, ratio_nc);
            ratio_pc_lo = std::min(ratio_pc_lo, ratio_pc);
            ratio_pc_hi = std::max(ratio_pc_hi, ratio_pc);
        }

        csv += std::to_string(row.n) + "," + format_number(row.km) + "," +
               std::to_string(row.k) + "," + row.frame_digits;
        for (double v : {row.full, row.nocorr, row.partial, row.partial_rho1, row.oracle,
                         row.mc_lin.variance, row.mc_lin.std_err, row.mc_exp.variance,
                         ratio_nc, ratio_pc}) {
            csv += "," + format_number(v);
        }
        csv += within ? ",1\n" : ",0\n";
    }

    std::string text;
    text += "validation: closed forms vs covariance oracle vs Monte Carlo\n";
    text += "config: N=" + std::to_string(base.n_channels()) +
            " T=" + format_number(base.symbol_period_s()) +
            " s, tx/lo linewidth=" + format_number(base.lasers().tx_linewidth_hz) + "/" +
            format_number(base.lasers().lo_linewidth_hz) +
            " Hz, D=" + format_number(base.fiber().dispersion_ps_nm_km) +
            " ps/(nm km), lambda=" + format_number(base.fiber().wavelength_m) + " m\n";
    text += "trials=" + std::to_string(scenario.trials) +
            " seed=" + std::to_string(scenario.seed) + "\n\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%4s %8s %4s  %-12s %-13s %-13s %-13s %-13s %s\n",
                  "N", "L_km", "k", "oracle", "mc_lin", "mc_stderr", "nocorr", "partial",
                  "3se");
    text += line;
    for (const ValidateRow& row : rows) {
        const double diff = std::abs(row.mc_lin.variance - row.oracle);
        std::snprintf(line, sizeof(line),
                      "%4d %8.6g %4d  %-12.6g %-13.6g %-13.6g %-13.6g %-13.6g %s\n",
                      row.n, row.km, row.k, row.oracle, row.mc_lin.variance,
                      row.mc_lin.std_err, row.nocorr, row.partial,
                      diff <= 3.0 * row.mc_lin.std_err ? "ok" : "FAIL");
        text += line;
    }
    text += "\noracle vs MC(linearized): worst |diff|/stderr = " +
            format_number(worst_pull) + " (limit 3)\n";
    text += "analytic/oracle ratio (informational, L>0): nocorr in [" +
            format_number(ratio_nc_lo) + ", " + format_number(ratio_nc_hi) +
            "], partial in [" + format_number(ratio_pc_lo) + ", " +
            format_number(ratio_pc_hi) + "]\n";
    text += report.ok ? "validate: PASS\n" : "validate: FAIL (" + report.failure + ")\n";

    report.csv = std::move(csv);
    report.text = std::move(text);
    return report;
}

std::string max_distance_report(const ScenarioConfig& scenario, double ber_target) {
    if (!(ber_target > 0.0 && ber_target < 0.5)) {
        throw std::invalid_argument("BER target must lie in (0, 0.5)");
    }
    const SystemConfig& cfg = scenario.config;
    const int n = cfg.n_channels();
    const double ts = scenario.qpsk_ts();

    std::string text;
    text += "maximum reach for BER floor <= " + format_number(ber_target) + "\n";
    text += "config: N=" + std::to_string(n) + " T=" + format_number(cfg.symbol_period_s()) +
            " s, tx/lo linewidth=" + format_number(cfg.lasers().tx_linewidth_hz) + "/" +
            format_number(cfg.lasers().lo_linewidth_hz) +
            " Hz, D=" + format_number(cfg.fiber().dispersion_ps_nm_km) +
            " ps/(nm km), lambda=" + format_number(cfg.fiber().wavelength_m) +
            " m, qpsk Ts=" + format_number(ts) + " s\n";
    text += "design worst case: N/4 normalized (no/partial time correlation), "
            "N/2 (full)\n\n";

    char line[160];
    std::snprintf(line, sizeof(line), "%-14s %-12s %s\n", "variant", "normalized",
                  "L_max_km");
    text += line;

    auto ofdm_line = [&](const char* name, double normalized) {
        const MaxDistanceResult res = solve_max_distance(cfg, normalized, ber_target);
        std::snprintf(line, sizeof(line), "%-14s %-12s %s\n", name,
                      format_number(normalized).c_str(),
                      res.unlimited ? "unlimited" : format_number(res.length_km).c_str());
        text += line;
    };
    ofdm_line("ofdm_nocorr", n / 4.0);
    ofdm_line("ofdm_partial", n / 4.0);
    ofdm_line("ofdm_fullcorr", n / 2.0);

    // QPSK with EEPN: sigma2(L) = intrinsic + slope * L, inverted exactly.
    const double sigma2_target = sigma2_for_ber_floor(ber_target);
    const double intrinsic = qpsk_eepn_variance(cfg.with_length_km(0.0), ts).variance;
    const double slope = qpsk_eepn_variance(cfg.with_length_km(1.0), ts).eepn_variance;
    std::string qpsk;
    if (intrinsic >= sigma2_target) {
        qpsk = "0 (floor above target at L=0)";
    } else if (slope <= 0.0) {
        qpsk = "unlimited";
    } else {
        qpsk = format_number((sigma2_target - intrinsic) / slope);
    }
    std::snprintf(line, sizeof(line), "%-14s %-12s %s\n", "qpsk_eepn", "-", qpsk.c_str());
    text += line;
    return text;
}

}  // namespace ofdmpn
