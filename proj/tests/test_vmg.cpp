#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "doctest.h"
#include "kljn/errors.hpp"
#include "kljn/kljn.hpp"
#include "kljn/noise.hpp"
#include "kljn/rng.hpp"
#include "kljn/vmg.hpp"

using namespace kljn;

namespace {

VmgConfig fixture() {
    // Strongly asymmetric four-resistor arrangement used throughout:
    // 46416/278 ohm at Alice, 278/100 ohm at Bob, U^2_LA = 1 V^2.
    VmgConfig c;
    c.r_ha = 46416.0;
    c.r_la = 278.0;
    c.r_hb = 278.0;
    c.r_lb = 100.0;
    c.u2_la = 1.0;
    c.bandwidth = 500.0;
    return c;
}

struct MsStats {
    double mean = 0.0;
    double se = 0.0;
};

MsStats stats_of(const std::vector<double>& xs) {
    double s = 0.0, s2 = 0.0;
    for (double x : xs) {
        s += x;
        s2 += x * x;
    }
    const double n = static_cast<double>(xs.size());
    MsStats out;
    out.mean = s / n;
    out.se = std::sqrt((s2 / n - out.mean * out.mean) / n);
    return out;
}

} // namespace

TEST_CASE("four-resistor level formulas reproduce the worked fixture") {
    const VmgDerived d = vmg_levels(fixture());
    CHECK(d.u2_ha == doctest::Approx(1.03e4).epsilon(0.01));
    CHECK(d.u2_lb == doctest::Approx(0.32).epsilon(0.01));
    // The literal level equations put the high-at-Bob level ~2% below the
    // value the voltage-equality condition alone would suggest (0.477).
    CHECK(d.u2_hb == doctest::Approx(0.477).epsilon(0.025));
    CHECK(d.u2_ha == doctest::Approx(10334.68).epsilon(1e-4));
    CHECK(d.u2_hb == doctest::Approx(0.467711).epsilon(1e-4));
    CHECK(d.u2_lb == doctest::Approx(0.322767).epsilon(1e-4));
}

TEST_CASE("derived effective temperatures match the fixture") {
    const VmgDerived d = vmg_levels(fixture());
    CHECK(d.t_la == doctest::Approx(1.3e17).epsilon(0.01));
    CHECK(d.t_ha == doctest::Approx(8.1e18).epsilon(0.01));
    CHECK(d.t_lb == doctest::Approx(1.17e17).epsilon(0.01));
    CHECK(d.t_hb == doctest::Approx(6.09284e16).epsilon(1e-4));
}

TEST_CASE("temperatures are exact Johnson fixed points of their levels") {
    const VmgConfig c = fixture();
    const VmgDerived d = vmg_levels(c);
    const double f = 4.0 * k_boltzmann * c.bandwidth;
    CHECK(f * d.t_la * c.r_la == doctest::Approx(c.u2_la).epsilon(1e-12));
    CHECK(f * d.t_ha * c.r_ha == doctest::Approx(d.u2_ha).epsilon(1e-12));
    CHECK(f * d.t_hb * c.r_hb == doctest::Approx(d.u2_hb).epsilon(1e-12));
    CHECK(f * d.t_lb * c.r_lb == doctest::Approx(d.u2_lb).epsilon(1e-12));
}

TEST_CASE("symmetric resistor pairs collapse the low levels exactly") {
    VmgConfig c;
    c.r_ha = 100e3;
    c.r_la = 10e3;
    c.r_hb = 100e3;
    c.r_lb = 10e3;
    c.u2_la = 251.03;
    const VmgRawLevels raw = vmg_level_formulas(c);
    CHECK(raw.u2_lb == c.u2_la); // exact reduction, no tolerance
}

TEST_CASE("symmetric resistor pairs are rejected as unphysical") {
    // With equal pairs the high-at-Bob equation goes negative: a two-
    // temperature compensation cannot exist for the plain two-resistor
    // scheme, so the derivation must refuse rather than return nonsense.
    VmgConfig c;
    c.r_ha = 100e3;
    c.r_la = 10e3;
    c.r_hb = 100e3;
    c.r_lb = 10e3;
    c.u2_la = 251.03;
    CHECK(vmg_level_formulas(c).u2_hb < 0.0);
    CHECK_THROWS_AS(vmg_levels(c), unphysical_configuration_error);
}

TEST_CASE("config validation rejects nonpositive parameters") {
    VmgConfig c = fixture();
    c.r_lb = 0.0;
    CHECK_THROWS_AS(validate(c), invalid_argument_error);
    c = fixture();
    c.u2_la = -1.0;
    CHECK_THROWS_AS(validate(c), invalid_argument_error);
    c = fixture();
    c.bandwidth = 0.0;
    CHECK_THROWS_AS(validate(c), invalid_argument_error);
    CHECK_NOTHROW(validate(fixture()));
}

TEST_CASE("zero-loop-power fourth resistor") {
    CHECK(fck1_fourth_resistor(10e3, 10e3, 100e3) ==
          doctest::Approx(1e3).epsilon(1e-12));
    CHECK(fck1_fourth_resistor(278.0, 278.0, 278.0) ==
          doctest::Approx(278.0).epsilon(1e-12));
    CHECK(fck1_fourth_resistor(278.0, 278.0, 46416.0) ==
          doctest::Approx(1.66503).epsilon(1e-4));
    CHECK_THROWS_AS(fck1_fourth_resistor(0.0, 1.0, 1.0),
                    invalid_argument_error);
}

TEST_CASE("zero-loop-power closed-form levels") {
    VmgConfig c;
    c.r_ha = 100e3;
    c.r_la = 10e3;
    c.r_hb = 10e3;
    c.r_lb = 1e3;
    c.u2_la = 1.0;
    const VmgDerived d = fck1_levels(c);
    CHECK(d.u2_hb == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.u2_ha == doctest::Approx(50.5).epsilon(1e-12));
    CHECK(d.u2_lb == doctest::Approx(0.505).epsilon(1e-12));

    c.r_lb = 900.0; // violates r_lb = r_hb*r_la/r_ha
    CHECK_THROWS_AS(fck1_levels(c), invalid_argument_error);
}

TEST_CASE("zero-loop-power scheme: equal wire levels and zero net power") {
    VmgConfig c;
    c.r_ha = 100e3;
    c.r_la = 10e3;
    c.r_hb = 10e3;
    c.r_lb = 1e3;
    c.u2_la = 1.0;
    const VmgDerived d = fck1_levels(c);

    const std::size_t runs = 100;
    std::vector<double> ms_lh, ms_hl, np_all;
    for (std::size_t r = 0; r < runs; ++r) {
        const std::array<std::uint64_t, 4> seeds = {
            derive_seed(31, 4 * r + 1, "fck.ha"),
            derive_seed(31, 4 * r + 2, "fck.la"),
            derive_seed(31, 4 * r + 3, "fck.hb"),
            derive_seed(31, 4 * r + 4, "fck.lb")};
        const std::array<NoiseTrace, 4> src =
            vmg_source_traces(c, d, 1000, 4, seeds);
        const bool lh = (r % 2) == 0;
        const WireRecord rec =
            lh ? solve_wire(src[1], src[2], c.r_la, c.r_hb)
               : solve_wire(src[0], src[3], c.r_ha, c.r_lb);
        (lh ? ms_lh : ms_hl).push_back(mean_square(rec.u_w));
        np_all.push_back(net_power(rec));
    }
    const MsStats lh = stats_of(ms_lh), hl = stats_of(ms_hl);
    const MsStats np = stats_of(np_all);
    CHECK(std::abs(lh.mean - 0.5) < 4.0 * lh.se);
    CHECK(std::abs(hl.mean - 0.5) < 4.0 * hl.se);
    CHECK(std::abs(lh.mean - hl.mean) <
          4.0 * std::sqrt(lh.se * lh.se + hl.se * hl.se));
    CHECK(std::abs(np.mean) < 4.0 * np.se);
}

TEST_CASE("four-resistor fixture: secure wire statistics agree across runs") {
    const VmgConfig c = fixture();
    const VmgDerived d = vmg_levels(c);

    const std::size_t runs = 200;
    std::vector<double> u2_lh, u2_hl, i2_lh, i2_hl;
    for (std::size_t r = 0; r < runs; ++r) {
        const std::array<std::uint64_t, 4> seeds = {
            derive_seed(32, 4 * r + 1, "vmg.ha"),
            derive_seed(32, 4 * r + 2, "vmg.la"),
            derive_seed(32, 4 * r + 3, "vmg.hb"),
            derive_seed(32, 4 * r + 4, "vmg.lb")};
        const std::array<NoiseTrace, 4> src =
            vmg_source_traces(c, d, 1000, 4, seeds);
        const bool lh = (r % 2) == 0;
        const WireRecord rec =
            lh ? solve_wire(src[1], src[2], c.r_la, c.r_hb)
               : solve_wire(src[0], src[3], c.r_ha, c.r_lb);
        (lh ? u2_lh : u2_hl).push_back(mean_square(rec.u_w));
        (lh ? i2_lh : i2_hl).push_back(mean_square(rec.i_w));
    }
    const MsStats ulh = stats_of(u2_lh), uhl = stats_of(u2_hl);
    const MsStats ilh = stats_of(i2_lh), ihl = stats_of(i2_hl);
    CHECK(std::abs(ulh.mean - uhl.mean) <
          4.0 * std::sqrt(ulh.se * ulh.se + uhl.se * uhl.se));
    CHECK(std::abs(ilh.mean - ihl.mean) <
          4.0 * std::sqrt(ilh.se * ilh.se + ihl.se * ihl.se));
    // Expected wire level for this fixture is ~0.37 V^2.
    CHECK(ulh.mean == doctest::Approx(0.368).epsilon(0.02));
    CHECK(ilh.mean == doctest::Approx(4.75e-6).epsilon(0.02));
}

TEST_CASE("source trace synthesis honors the derived levels exactly") {
    const VmgConfig c = fixture();
    const VmgDerived d = vmg_levels(c);
    const std::array<std::uint64_t, 4> seeds = {11, 12, 13, 14};
    const std::array<NoiseTrace, 4> src =
        vmg_source_traces(c, d, 1000, 4, seeds);
    CHECK(rms_of(src[0].samples) ==
          doctest::Approx(std::sqrt(d.u2_ha)).epsilon(1e-10));
    CHECK(rms_of(src[1].samples) ==
          doctest::Approx(std::sqrt(c.u2_la)).epsilon(1e-10));
    CHECK(rms_of(src[2].samples) ==
          doctest::Approx(std::sqrt(d.u2_hb)).epsilon(1e-10));
    CHECK(rms_of(src[3].samples) ==
          doctest::Approx(std::sqrt(d.u2_lb)).epsilon(1e-10));
    CHECK(src[0].samples.size() == 1000);
    CHECK_THROWS_AS(vmg_source_traces(c, d, 0, 4, seeds),
                    invalid_argument_error);
}
