// Closed-form variance formulas, EEPN comparison, BER floor and the
// max-reach inversion.  Expected values come from independent evaluations
// frozen here: a long-double transcription of the double sums, hand SI
// products, and a bisection root of the BER-floor equation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "analytic.hpp"
#include "model.hpp"

using namespace ofdmpn;

namespace {

constexpr double kPi = 3.14159265358979323846;

SystemConfig baseline(int n = 101, double length_km = 100.0) {
    return SystemConfig(n, 1.0e-9, FiberParams{16.0, 1.55e-6, length_km},
                        LaserParams{4.0e6, 4.0e6});
}

// Test-only oracle: literal transcription of the time-uncorrelated double
// sum in long double, independent of the library's table-based evaluation.
long double brute_no_corr_normalized(const std::vector<std::complex<long double>>& a,
                                     int k) {
    const int n = static_cast<int>(a.size());
    const int pilot = (n - 1) / 2;
    long double total = 0.0L;
    for (int m = 0; m < n; ++m) {
        long double bracket = 0.0L;
        for (int r = 0; r < n; ++r) {
            const long double weight = sqrtl(fabsl(static_cast<long double>(r - pilot)));
            const std::complex<long double> ratio = a[static_cast<size_t>(r)] /
                                                    a[static_cast<size_t>(k)];
            const long double angle = 2.0L * 3.14159265358979323846L * (r - k) * m / n;
            bracket += weight * (ratio.real() * cosl(angle) - ratio.imag() * sinl(angle));
        }
        total += bracket * bracket;
    }
    return total / (static_cast<long double>(n) * n);
}

std::vector<std::complex<long double>> to_long_double(const SymbolFrame& frame) {
    std::vector<std::complex<long double>> out;
    for (const cplx& v : frame.symbols()) out.emplace_back(v.real(), v.imag());
    return out;
}

SymbolFrame random_frame(int n, std::mt19937_64& rng) {
    std::vector<int> digits(static_cast<size_t>(n), 0);
    for (int r = 0; r < n; ++r) {
        if (r == (n - 1) / 2) continue;
        digits[static_cast<size_t>(r)] = static_cast<int>(rng() % 4);
    }
    return SymbolFrame::from_qpsk_digits(digits);
}

int random_k(int n, std::mt19937_64& rng) {
    const int pilot = (n - 1) / 2;
    int k = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (k == pilot) k = (k + 1) % n;
    return k;
}

}  // namespace

TEST_CASE("full-correlation all-same collapses to (N-1)/2") {
    for (int n : {5, 11, 51, 101}) {
        const SymbolFrame frame = SymbolFrame::all_same(n, cplx(1.0, 0.0));
        const VarianceResult res = variance_full_corr(frame, 0, baseline(n));
        CHECK(res.normalized == doctest::Approx((n - 1) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("full-correlation value for N=201 at 100 km") {
    const SymbolFrame frame = SymbolFrame::all_same(201, cplx(1.0, 0.0));
    const VarianceResult res = variance_full_corr(frame, 0, baseline(201));
    const double tau = 16.0e-6 * 1.0e5 * 1.55e-6 * 1.55e-6 * 1.0e9 / 3.0e8;
    CHECK(res.normalized == doctest::Approx(100.0).epsilon(1e-10));
    CHECK(res.value == doctest::Approx(100.0 * 2.0 * kPi * 4.0e6 * tau).epsilon(1e-10));
    CHECK(res.value == doctest::Approx(3.22e-2).epsilon(2e-3));
}

TEST_CASE("no-correlation all-same at N=5 equals (4+sqrt(2))/5") {
    const SymbolFrame frame = SymbolFrame::all_same(5, cplx(1.0, 0.0));
    const VarianceResult res = variance_no_corr(frame, 0, baseline(5));
    CHECK(res.normalized == doctest::Approx(1.0828427124746190).epsilon(1e-13));
    const long double brute = brute_no_corr_normalized(to_long_double(frame), 0);
    CHECK(res.normalized == doctest::Approx(static_cast<double>(brute)).epsilon(1e-13));
}

TEST_CASE("no-correlation matches the brute-force double sum on random frames") {
    std::mt19937_64 rng(20260808);
    for (int rep = 0; rep < 24; ++rep) {
        const int n = 5 + 2 * static_cast<int>(rng() % 8);  // 5..19
        const SymbolFrame frame = random_frame(n, rng);
        const int k = random_k(n, rng);
        const VarianceResult res = variance_no_corr(frame, k, baseline(n));
        const long double brute = brute_no_corr_normalized(to_long_double(frame), k);
        CHECK(res.normalized == doctest::Approx(static_cast<double>(brute)).epsilon(1e-11));
    }
}

TEST_CASE("variance vanishes with the walk-off") {
    const SymbolFrame frame = SymbolFrame::all_same(11, cplx(1.0, 0.0));
    const SystemConfig cfg = baseline(11, 0.0);
    CHECK(variance_full_corr(frame, 0, cfg).value == 0.0);
    CHECK(variance_no_corr(frame, 0, cfg).value == 0.0);
    CHECK(variance_partial(frame, 0, cfg).value == 0.0);
}

TEST_CASE("pilot is rejected as the received channel") {
    const SymbolFrame frame = SymbolFrame::all_same(11, cplx(1.0, 0.0));
    const SystemConfig cfg = baseline(11);
    CHECK_THROWS_AS(variance_no_corr(frame, 5, cfg), std::invalid_argument);
    CHECK_THROWS_AS(variance_no_corr(frame, 11, cfg), std::out_of_range);
}

TEST_CASE("rho") {
    const SystemConfig cfg = baseline(11);
    CHECK(rho(3, 3, cfg) == 1.0);
    CHECK(rho(2, 8, cfg) == 1.0);  // mirror channels share |d|
    // |d|=1 vs |d|=4 -> sqrt(1/4)
    CHECK(rho(4, 1, cfg) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rho(5, 0, cfg) == 0.0);  // pilot against a data channel
    CHECK(rho(5, 5, cfg) == 1.0);
    // all variances zero at L=0: inert convention
    CHECK(rho(0, 3, baseline(11, 0.0)) == 1.0);
}

TEST_CASE("partial correlation with rho forced to 1 equals no-correlation") {
    std::mt19937_64 rng(424242);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 5 + 2 * static_cast<int>(rng() % 14);  // 5..31
        const SymbolFrame frame = random_frame(n, rng);
        const int k = random_k(n, rng);
        const SystemConfig cfg = baseline(n);
        const double unit_rho =
            variance_partial(frame, k, cfg, RhoMode::ForcedUnit).value;
        const double no_corr = variance_no_corr(frame, k, cfg).value;
        CHECK(unit_rho == doctest::Approx(no_corr).epsilon(1e-12));
    }
}

TEST_CASE("partial tracks no-correlation, gap shrinking like 1/N") {
    // All-same frame at k=0.  The partial form evaluates to exactly
    // (N-1)/4 there, so the relative gap to the no-correlation form is
    // about 6% at N=11 and inside 2% from N=51 on.
    auto gap = [](int n) {
        const SymbolFrame frame = SymbolFrame::all_same(n, cplx(1.0, 0.0));
        const SystemConfig cfg = baseline(n);
        const double pc = variance_partial(frame, 0, cfg).normalized;
        const double nc = variance_no_corr(frame, 0, cfg).normalized;
        CHECK(pc == doctest::Approx((n - 1) / 4.0).epsilon(1e-12));
        return std::abs(pc / nc - 1.0);
    };
    CHECK(gap(11) < 0.08);
    CHECK(gap(11) > 0.02);  // the two forms are NOT within 2% this small
    CHECK(gap(51) < 0.02);
    CHECK(gap(101) < 0.01);
}

TEST_CASE("scaling laws") {
    std::mt19937_64 rng(777);
    const SymbolFrame frame = random_frame(11, rng);
    const SystemConfig cfg = baseline(11);

    SUBCASE("linear in tx linewidth") {
        const SystemConfig twice(11, 1.0e-9, cfg.fiber(), LaserParams{8.0e6, 4.0e6});
        for (int k : {0, 3, 9}) {
            CHECK(variance_no_corr(frame, k, twice).value ==
                  doctest::Approx(2.0 * variance_no_corr(frame, k, cfg).value)
                      .epsilon(1e-14));
            CHECK(variance_no_corr(frame, k, twice).normalized ==
                  doctest::Approx(variance_no_corr(frame, k, cfg).normalized)
                      .epsilon(1e-14));
        }
    }
    SUBCASE("linear in fiber length") {
        const SystemConfig twice = cfg.with_length_km(200.0);
        for (int k : {0, 3, 9}) {
            CHECK(variance_partial(frame, k, twice).value ==
                  doctest::Approx(2.0 * variance_partial(frame, k, cfg).value)
                      .epsilon(1e-13));
        }
    }
}

TEST_CASE("global rotation of the data symbols is irrelevant") {
    std::mt19937_64 rng(31337);
    const int n = 9;
    const SystemConfig cfg = baseline(n);
    for (int rep = 0; rep < 8; ++rep) {
        const SymbolFrame frame = random_frame(n, rng);
        const int k = random_k(n, rng);
        const cplx u = std::polar(1.0, 0.1 + 0.77 * static_cast<double>(rep));
        std::vector<cplx> rotated = frame.symbols();
        for (int r = 0; r < n; ++r) {
            if (r == (n - 1) / 2) continue;
            rotated[static_cast<size_t>(r)] *= u;
        }
        const SymbolFrame rot = SymbolFrame::from_symbols(rotated);
        CHECK(variance_no_corr(rot, k, cfg).value ==
              doctest::Approx(variance_no_corr(frame, k, cfg).value).epsilon(1e-10));
        CHECK(variance_full_corr(rot, k, cfg).value ==
              doctest::Approx(variance_full_corr(frame, k, cfg).value).epsilon(1e-9));
        CHECK(variance_partial(rot, k, cfg).value ==
              doctest::Approx(variance_partial(frame, k, cfg).value).epsilon(1e-10));
    }
}

TEST_CASE("EEPN variance and linewidth") {
    const SystemConfig cfg = baseline();

    SUBCASE("100 GS/s: EEPN linewidth is 32 LO linewidths") {
        const QpskEepnResult r = qpsk_eepn_variance(cfg, 1.0e-11);
        // lambda^2 * D * L / (4 * c * Ts^2), independent product
        const double expected =
            1.55e-6 * 1.55e-6 * 16.0e-6 * 1.0e5 / (4.0 * 3.0e8 * 1.0e-22);
        CHECK(expected == doctest::Approx(32.033).epsilon(1e-3));
        CHECK(r.eepn_linewidth_hz / 4.0e6 == doctest::Approx(expected).epsilon(1e-12));
        CHECK(r.variance ==
              doctest::Approx(r.intrinsic_variance + r.eepn_variance).epsilon(1e-15));
        // the linewidth form reproduces the variance identically
        CHECK(2.0 * kPi * (4.0e6 + 4.0e6 + r.eepn_linewidth_hz) * 1.0e-11 ==
              doctest::Approx(r.variance).epsilon(1e-14));
    }
    SUBCASE("halving Ts doubles the EEPN variance and quadruples the linewidth") {
        const QpskEepnResult a = qpsk_eepn_variance(cfg, 1.0e-11);
        const QpskEepnResult b = qpsk_eepn_variance(cfg, 0.5e-11);
        CHECK(b.eepn_variance == doctest::Approx(2.0 * a.eepn_variance).epsilon(1e-13));
        CHECK(b.eepn_linewidth_hz ==
              doctest::Approx(4.0 * a.eepn_linewidth_hz).epsilon(1e-13));
        CHECK(b.eepn_linewidth_hz / 4.0e6 == doctest::Approx(128.13).epsilon(1e-3));
    }
    SUBCASE("no fiber leaves the intrinsic term only") {
        const QpskEepnResult r = qpsk_eepn_variance(cfg.with_length_km(0.0), 1.0e-11);
        CHECK(r.eepn_variance == 0.0);
        CHECK(r.variance == doctest::Approx(2.0 * kPi * 8.0e6 * 1.0e-11).epsilon(1e-15));
    }
    SUBCASE("nonpositive symbol period is rejected") {
        CHECK_THROWS_AS(qpsk_eepn_variance(cfg, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(qpsk_eepn_variance(cfg, -1.0e-11), std::invalid_argument);
    }
}

TEST_CASE("capacity-matched identity: EEPN term equals (N/4) OFDM units") {
    for (int n : {101, 201}) {
        for (double km : {100.0, 277.0, 548.0}) {
            const SystemConfig cfg = baseline(n, km);
            const double ts = cfg.symbol_period_s() / n;
            const double eepn = qpsk_eepn_variance(cfg, ts).eepn_variance;
            const double ofdm_unit =
                (n / 4.0) * 2.0 * kPi * cfg.lasers().tx_linewidth_hz * walkoff(cfg).tau_s;
            CHECK(eepn == doctest::Approx(ofdm_unit).epsilon(1e-12));
        }
    }
}

TEST_CASE("BER floor") {
    CHECK(ber_floor(0.0) == 0.0);
    CHECK_THROWS_AS(ber_floor(-1.0e-6), std::invalid_argument);

    SUBCASE("monotone nondecreasing") {
        std::mt19937_64 rng(5150);
        std::vector<double> sigma2;
        for (int i = 0; i < 200; ++i) {
            sigma2.push_back(1e-4 * std::pow(10.0, 4.0 * (rng() % 10000) / 10000.0));
        }
        std::sort(sigma2.begin(), sigma2.end());
        double prev = 0.0;
        for (double s2 : sigma2) {
            const double b = ber_floor(s2);
            CHECK(b >= prev);
            prev = b;
        }
    }
    SUBCASE("bisection root of ber_floor = 1e-4") {
        // Independent root: bisect sigma in [0.05, 0.5].
        double lo = 0.05, hi = 0.5;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (ber_floor(mid * mid) < 1.0e-4) lo = mid; else hi = mid;
        }
        const double sigma_root = 0.5 * (lo + hi);
        CHECK(sigma_root == doctest::Approx(0.2111).epsilon(2e-3));
        CHECK(sigma_root * sigma_root == doctest::Approx(4.458e-2).epsilon(2e-3));
        CHECK(sigma2_for_ber_floor(1.0e-4) ==
              doctest::Approx(sigma_root * sigma_root).epsilon(1e-9));
    }
}

TEST_CASE("max distance") {
    const SystemConfig cfg = baseline();

    SUBCASE("reaches the published design points") {
        const MaxDistanceResult l101 = solve_max_distance(cfg, 101.0 / 4.0, 1.0e-4);
        CHECK_FALSE(l101.unlimited);
        CHECK(l101.length_km == doctest::Approx(548.0).epsilon(0.03));

        const SystemConfig cfg201 = baseline(201);
        const MaxDistanceResult l201 = solve_max_distance(cfg201, 201.0 / 4.0, 1.0e-4);
        CHECK(l201.length_km == doctest::Approx(277.0).epsilon(0.03));
    }
    SUBCASE("round trip through ber_floor") {
        const double norm = 25.25;
        const MaxDistanceResult res = solve_max_distance(cfg, norm, 1.0e-4);
        const double sigma2 = norm * 2.0 * kPi * 4.0e6 *
                              walkoff(cfg.with_length_km(res.length_km)).tau_s;
        CHECK(ber_floor(sigma2) == doctest::Approx(1.0e-4).epsilon(1e-9));
    }
    SUBCASE("no dispersion means no finite bound") {
        const SystemConfig flat(101, 1.0e-9, FiberParams{0.0, 1.55e-6, 100.0},
                                LaserParams{4.0e6, 4.0e6});
        CHECK(solve_max_distance(flat, 25.0, 1.0e-4).unlimited);
        const SystemConfig quiet(101, 1.0e-9, FiberParams{16.0, 1.55e-6, 100.0},
                                 LaserParams{0.0, 4.0e6});
        CHECK(solve_max_distance(quiet, 25.0, 1.0e-4).unlimited);
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(solve_max_distance(cfg, 25.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(solve_max_distance(cfg, 25.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(solve_max_distance(cfg, 0.0, 1e-4), std::invalid_argument);
    }
}

TEST_CASE("variance_for dispatch") {
    const SymbolFrame frame = SymbolFrame::all_same(5, cplx(1.0, 0.0));
    const SystemConfig cfg = baseline(5);
    CHECK(variance_for(Regime::FullTimeCorrelation, frame, 0, cfg).regime ==
          Regime::FullTimeCorrelation);
    CHECK(variance_for(Regime::NoTimeCorrelation, frame, 0, cfg).regime ==
          Regime::NoTimeCorrelation);
    CHECK(variance_for(Regime::PartialCorrelation, frame, 0, cfg).regime ==
          Regime::PartialCorrelation);
    CHECK_THROWS_AS(variance_for(Regime::Oracle, frame, 0, cfg), std::invalid_argument);
}
