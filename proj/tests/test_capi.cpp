// Exercises the shared library strictly through the C header: handles,
// status codes, thread-local error messages and string ownership.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "ofdmpn.h"

namespace {

ofdmpn_config* baseline(int n = 101, double length_km = 100.0) {
    ofdmpn_config* cfg = nullptr;
    REQUIRE(ofdmpn_config_create(n, 1.0e-9, 4.0e6, 4.0e6, 16.0, 1.55e-6, length_km,
                                 &cfg) == OFDMPN_OK);
    return cfg;
}

}  // namespace

TEST_CASE("version string") {
    CHECK(std::strcmp(ofdmpn_version(), "0.1.0") == 0);
}

TEST_CASE("config lifecycle and accessors") {
    ofdmpn_config* cfg = baseline();

    int pilot = -1;
    CHECK(ofdmpn_config_pilot_index(cfg, &pilot) == OFDMPN_OK);
    CHECK(pilot == 50);

    double spacing = 0.0;
    CHECK(ofdmpn_config_channel_spacing_hz(cfg, &spacing) == OFDMPN_OK);
    CHECK(spacing == doctest::Approx(1.0e9));

    double tau = 0.0;
    CHECK(ofdmpn_config_walkoff_s(cfg, &tau) == OFDMPN_OK);
    CHECK(tau == doctest::Approx(1.28e-11).epsilon(5e-3));

    int steps = 0;
    CHECK(ofdmpn_config_delay_steps(cfg, 0, &steps) == OFDMPN_OK);
    CHECK(steps == 50);
    CHECK(ofdmpn_config_delay_steps(cfg, 101, &steps) == OFDMPN_ERR_INVALID_ARGUMENT);
    CHECK(std::string(ofdmpn_last_error_message()).find("channel index") !=
          std::string::npos);

    double sigma2 = -1.0;
    CHECK(ofdmpn_config_channel_sigma2(cfg, 50, &sigma2) == OFDMPN_OK);
    CHECK(sigma2 == 0.0);

    ofdmpn_config_destroy(cfg);
}

TEST_CASE("config rejects invalid parameters with messages") {
    ofdmpn_config* cfg = nullptr;
    CHECK(ofdmpn_config_create(100, 1.0e-9, 4.0e6, 4.0e6, 16.0, 1.55e-6, 100.0, &cfg) ==
          OFDMPN_ERR_INVALID_ARGUMENT);
    CHECK(cfg == nullptr);
    CHECK(std::string(ofdmpn_last_error_message()).find("odd") != std::string::npos);

    CHECK(ofdmpn_config_create(101, 1.0e-9, 4.0e6, 4.0e6, 16.0, 1.55e-6, 100.0,
                               nullptr) == OFDMPN_ERR_INVALID_ARGUMENT);
}

TEST_CASE("frames") {
    ofdmpn_config* cfg = baseline(5);

    ofdmpn_frame* frame = nullptr;
    REQUIRE(ofdmpn_frame_create_all_same(cfg, 1, &frame) == OFDMPN_OK);
    double re = 0.0, im = 0.0;
    CHECK(ofdmpn_frame_symbol(frame, 0, &re, &im) == OFDMPN_OK);
    CHECK(re == 0.0);
    CHECK(im == 1.0);
    CHECK(ofdmpn_frame_symbol(frame, 2, &re, &im) == OFDMPN_OK);
    CHECK(re == 1.0);  // pilot stays 1
    CHECK(im == 0.0);
    ofdmpn_frame_destroy(frame);

    const int digits[5] = {0, 1, 0, 2, 3};
    REQUIRE(ofdmpn_frame_create_qpsk(cfg, digits, 5, &frame) == OFDMPN_OK);
    ofdmpn_frame_destroy(frame);

    const int bad_pilot[5] = {0, 1, 2, 2, 3};
    CHECK(ofdmpn_frame_create_qpsk(cfg, bad_pilot, 5, &frame) ==
          OFDMPN_ERR_INVALID_ARGUMENT);

    const double bad_re[5] = {0.5, 1, 1, 1, 1};
    const double bad_im[5] = {0, 0, 0, 0, 0};
    CHECK(ofdmpn_frame_create_complex(cfg, bad_re, bad_im, 5, &frame) ==
          OFDMPN_ERR_INVALID_ARGUMENT);

    ofdmpn_config_destroy(cfg);
}

TEST_CASE("variance through the C surface") {
    ofdmpn_config* cfg = baseline(11);
    ofdmpn_frame* frame = nullptr;
    REQUIRE(ofdmpn_frame_create_all_same(cfg, 0, &frame) == OFDMPN_OK);

    ofdmpn_variance_result full{};
    CHECK(ofdmpn_variance(cfg, frame, 0, OFDMPN_REGIME_FULL_CORR, &full) == OFDMPN_OK);
    CHECK(full.normalized == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(full.regime == OFDMPN_REGIME_FULL_CORR);
    CHECK(full.received_channel == 0);

    ofdmpn_variance_result part{};
    CHECK(ofdmpn_variance(cfg, frame, 0, OFDMPN_REGIME_PARTIAL, &part) == OFDMPN_OK);
    CHECK(part.normalized == doctest::Approx(2.5).epsilon(1e-12));

    // pilot slot rejected
    ofdmpn_variance_result bad{};
    CHECK(ofdmpn_variance(cfg, frame, 5, OFDMPN_REGIME_NO_CORR, &bad) ==
          OFDMPN_ERR_INVALID_ARGUMENT);

    double r = 0.0;
    CHECK(ofdmpn_rho(cfg, 1, 4, &r) == OFDMPN_OK);
    CHECK(r == doctest::Approx(0.5).epsilon(1e-15));

    ofdmpn_frame_destroy(frame);
    ofdmpn_config_destroy(cfg);
}

TEST_CASE("oracle and Monte Carlo through the C surface") {
    ofdmpn_config* cfg = baseline(7);
    ofdmpn_frame* frame = nullptr;
    REQUIRE(ofdmpn_frame_create_all_same(cfg, 0, &frame) == OFDMPN_OK);

    ofdmpn_variance_result oracle{};
    REQUIRE(ofdmpn_oracle_variance(cfg, frame, 0, &oracle) == OFDMPN_OK);
    CHECK(oracle.value > 0.0);
    CHECK(oracle.regime == -1);

    ofdmpn_mc_estimate est{};
    REQUIRE(ofdmpn_mc_variance(cfg, frame, 0, 20000, 42, OFDMPN_MC_LINEARIZED, &est) ==
            OFDMPN_OK);
    CHECK(std::fabs(est.variance - oracle.value) < 3.0 * est.std_err);
    CHECK(est.trials == 20000);
    CHECK(est.seed == 42);

    ofdmpn_mc_estimate again{};
    REQUIRE(ofdmpn_mc_variance(cfg, frame, 0, 20000, 42, OFDMPN_MC_LINEARIZED, &again) ==
            OFDMPN_OK);
    CHECK(again.variance == est.variance);

    CHECK(ofdmpn_mc_variance(cfg, frame, 0, 1, 42, OFDMPN_MC_LINEARIZED, &est) ==
          OFDMPN_ERR_INVALID_ARGUMENT);

    ofdmpn_frame_destroy(frame);
    ofdmpn_config_destroy(cfg);
}

TEST_CASE("EEPN, BER floor and max distance through the C surface") {
    ofdmpn_config* cfg = baseline();

    ofdmpn_eepn_result eepn{};
    CHECK(ofdmpn_qpsk_eepn(cfg, 1.0e-11, &eepn) == OFDMPN_OK);
    CHECK(eepn.eepn_linewidth_hz / 4.0e6 == doctest::Approx(32.03).epsilon(1e-3));
    CHECK(ofdmpn_qpsk_eepn(cfg, 0.0, &eepn) == OFDMPN_ERR_INVALID_ARGUMENT);

    double ber = -1.0;
    CHECK(ofdmpn_ber_floor(0.0, &ber) == OFDMPN_OK);
    CHECK(ber == 0.0);
    CHECK(ofdmpn_ber_floor(-1.0, &ber) == OFDMPN_ERR_INVALID_ARGUMENT);

    int unlimited = -1;
    double km = 0.0;
    CHECK(ofdmpn_max_distance(cfg, 101.0 / 4.0, 1.0e-4, &unlimited, &km) == OFDMPN_OK);
    CHECK(unlimited == 0);
    CHECK(km == doctest::Approx(548.0).epsilon(0.03));

    ofdmpn_config_destroy(cfg);
}

TEST_CASE("worst-case search through the C surface") {
    ofdmpn_config* cfg = baseline();

    ofdmpn_variance_result heur{};
    CHECK(ofdmpn_heuristic_worst_case(cfg, 101, OFDMPN_REGIME_FULL_CORR, &heur) ==
          OFDMPN_OK);
    CHECK(heur.normalized == doctest::Approx(50.0).epsilon(1e-12));

    ofdmpn_sweep_outcome sweep{};
    int64_t histogram[OFDMPN_HISTOGRAM_BINS];
    int digits[5];
    REQUIRE(ofdmpn_exhaustive_sweep(cfg, 5, OFDMPN_REGIME_NO_CORR, 1, &sweep, histogram,
                                    digits) == OFDMPN_OK);
    CHECK(sweep.cases_evaluated == 1024);
    CHECK(sweep.audit == 1);
    int64_t total = 0;
    for (int64_t c : histogram) total += c;
    CHECK(total == 1024);
    CHECK(sweep.worst_normalized == doctest::Approx(1.0828427125).epsilon(1e-9));

    CHECK(ofdmpn_exhaustive_sweep(cfg, 13, OFDMPN_REGIME_NO_CORR, 0, &sweep, nullptr,
                                  nullptr) == OFDMPN_ERR_INVALID_ARGUMENT);

    ofdmpn_config_destroy(cfg);
}

TEST_CASE("scenario API") {
    SUBCASE("default scenario and overrides") {
        ofdmpn_scenario* scn = nullptr;
        REQUIRE(ofdmpn_scenario_create_default(&scn) == OFDMPN_OK);

        const ofdmpn_config* cfg = nullptr;
        REQUIRE(ofdmpn_scenario_config(scn, &cfg) == OFDMPN_OK);
        int pilot = 0;
        CHECK(ofdmpn_config_pilot_index(cfg, &pilot) == OFDMPN_OK);
        CHECK(pilot == 50);

        CHECK(ofdmpn_scenario_set_n_channels(scn, 201) == OFDMPN_OK);
        CHECK(ofdmpn_scenario_config(scn, &cfg) == OFDMPN_OK);
        CHECK(ofdmpn_config_pilot_index(cfg, &pilot) == OFDMPN_OK);
        CHECK(pilot == 100);

        CHECK(ofdmpn_scenario_set_n_channels(scn, 10) == OFDMPN_ERR_INVALID_ARGUMENT);
        CHECK(ofdmpn_scenario_set_regime(scn, "bogus") == OFDMPN_ERR_INVALID_ARGUMENT);
        CHECK(ofdmpn_scenario_set_regime(scn, "partial") == OFDMPN_OK);
        int regime = -1;
        CHECK(ofdmpn_scenario_regime(scn, &regime) == OFDMPN_OK);
        CHECK(regime == OFDMPN_REGIME_PARTIAL);

        const double bad[2] = {100.0, 50.0};
        CHECK(ofdmpn_scenario_set_distances_km(scn, bad, 2) ==
              OFDMPN_ERR_INVALID_ARGUMENT);

        ofdmpn_scenario_destroy(scn);
    }
    SUBCASE("parse errors carry messages") {
        ofdmpn_scenario* scn = nullptr;
        CHECK(ofdmpn_scenario_parse_text("junk line\n", &scn) == OFDMPN_ERR_PARSE);
        CHECK(scn == nullptr);
        CHECK(std::string(ofdmpn_last_error_message()).find("line 1") !=
              std::string::npos);
    }
    SUBCASE("CSV emission") {
        ofdmpn_scenario* scn = nullptr;
        REQUIRE(ofdmpn_scenario_create_default(&scn) == OFDMPN_OK);
        const double distances[3] = {0.0, 100.0, 200.0};
        REQUIRE(ofdmpn_scenario_set_distances_km(scn, distances, 3) == OFDMPN_OK);

        char* csv = nullptr;
        REQUIRE(ofdmpn_scenario_sweep_distance_csv(scn, &csv) == OFDMPN_OK);
        REQUIRE(csv != nullptr);
        CHECK(std::string(csv).find("L_km,sigma2_ofdm_nocorr") == 0);
        ofdmpn_string_free(csv);

        const int n_list[2] = {5, 7};
        REQUIRE(ofdmpn_scenario_set_n_list(scn, n_list, 2) == OFDMPN_OK);
        char* ncsv = nullptr;
        REQUIRE(ofdmpn_scenario_sweep_n_csv(scn, &ncsv) == OFDMPN_OK);
        CHECK(std::string(ncsv).find("N,norm_nocorr") == 0);
        ofdmpn_string_free(ncsv);

        char* report = nullptr;
        REQUIRE(ofdmpn_scenario_max_distance_text(scn, 1.0e-4, &report) == OFDMPN_OK);
        CHECK(std::string(report).find("ofdm_nocorr") != std::string::npos);
        ofdmpn_string_free(report);

        CHECK(ofdmpn_scenario_max_distance_text(scn, 0.5, &report) ==
              OFDMPN_ERR_INVALID_ARGUMENT);

        ofdmpn_scenario_destroy(scn);
    }
    SUBCASE("validate returns text and CSV and is deterministic") {
        ofdmpn_scenario* scn = nullptr;
        REQUIRE(ofdmpn_scenario_create_default(&scn) == OFDMPN_OK);
        REQUIRE(ofdmpn_scenario_set_trials(scn, 2000) == OFDMPN_OK);
        REQUIRE(ofdmpn_scenario_set_seed(scn, 3) == OFDMPN_OK);

        char* text1 = nullptr;
        char* csv1 = nullptr;
        const ofdmpn_status s1 = ofdmpn_scenario_validate(scn, &text1, &csv1);
        CHECK(s1 == OFDMPN_OK);
        REQUIRE(text1 != nullptr);
        REQUIRE(csv1 != nullptr);

        char* csv2 = nullptr;
        CHECK(ofdmpn_scenario_validate(scn, nullptr, &csv2) == s1);
        CHECK(std::string(csv1) == std::string(csv2));

        ofdmpn_string_free(text1);
        ofdmpn_string_free(csv1);
        ofdmpn_string_free(csv2);
        ofdmpn_scenario_destroy(scn);
    }
}
