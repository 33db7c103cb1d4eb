#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

#include "doctest.h"
#include "kljn/attack_deterministic.hpp"
#include "kljn/attack_statistical.hpp"
#include "kljn/errors.hpp"
#include "kljn/kljn.hpp"
#include "kljn/noise.hpp"
#include "kljn/rng.hpp"

using namespace kljn;

namespace {

NoiseTrace source(std::uint64_t seed, double r) {
    const KljnConfig cfg;
    return scale_johnson(gen_gblwn_window(1000, cfg.bandwidth, seed, 4), r,
                         cfg.t_eff, cfg.bandwidth);
}

} // namespace

TEST_CASE("quantize_trace structure") {
    NoiseTrace t = gen_gblwn(1024, 500.0, 5, 1);
    const NoiseTrace q1 = quantize_trace(t, 1);
    std::set<double> values(q1.samples.begin(), q1.samples.end());
    CHECK(values.size() <= 2); // one-bit instrument: two levels only
    const double fs = 4.0 * rms_of(t.samples);
    for (double v : q1.samples) CHECK(std::abs(std::abs(v) - fs / 2.0) < 1e-12);

    // Outliers clamp to the end levels instead of escaping full scale.
    NoiseTrace spiky = t;
    spiky.samples[0] = 100.0 * fs;
    const NoiseTrace qs = quantize_trace(spiky, 4);
    const double top = 4.0 * rms_of(spiky.samples);
    CHECK(qs.samples[0] <= top);

    CHECK_THROWS_AS(quantize_trace(t, 0), invalid_argument_error);
    NoiseTrace zeros;
    zeros.samples.assign(64, 0.0);
    zeros.dt = 1e-3;
    CHECK_THROWS_AS(quantize_trace(zeros, 1), degenerate_input_error);
}

TEST_CASE("ohms-law identification with exact source knowledge") {
    const KljnConfig cfg;
    const NoiseTrace u_a = source(101, cfg.r_l);
    const NoiseTrace u_bh = source(102, cfg.r_h);
    const NoiseTrace u_bl = source(103, cfg.r_l);

    SUBCASE("Bob holds the high resistor") {
        const WireRecord rec = solve_wire(u_a, u_bh, cfg.r_l, cfg.r_h);
        const OhmsLawResult res =
            ohms_law_identify(rec, u_bh, u_bl, cfg.r_h, cfg.r_l);
        CHECK(res.verdict == OhmsLawResult::Verdict::HIGH);
        CHECK(res.guessed_r == cfg.r_h);
        CHECK(res.spread_high < 1e-9);
        CHECK(res.flat_fraction_high > 0.999);
        CHECK(res.flat_fraction_low < 0.5);
    }
    SUBCASE("Bob holds the low resistor") {
        const WireRecord rec = solve_wire(u_a, u_bl, cfg.r_l, cfg.r_l);
        const OhmsLawResult res =
            ohms_law_identify(rec, u_bh, u_bl, cfg.r_h, cfg.r_l);
        CHECK(res.verdict == OhmsLawResult::Verdict::LOW);
        CHECK(res.guessed_r == cfg.r_l);
        CHECK(res.spread_low < 1e-9);
    }
}

TEST_CASE("ohms-law identification: colliding candidates wait") {
    const KljnConfig cfg;
    const NoiseTrace u_a = source(104, cfg.r_l);
    const NoiseTrace u_b = source(105, cfg.r_h);
    const WireRecord rec = solve_wire(u_a, u_b, cfg.r_l, cfg.r_h);
    // Both hypotheses are handed the trace Bob actually emitted, so both
    // produce a perfectly flat resistance estimate: the attack must wait.
    const OhmsLawResult res = ohms_law_identify(rec, u_b, u_b, cfg.r_h, cfg.r_l);
    CHECK(res.verdict == OhmsLawResult::Verdict::UNDECIDED_WAITING);
}

TEST_CASE("ohms-law identification rejects degenerate and mismatched input") {
    const KljnConfig cfg;
    const NoiseTrace u_a = source(106, cfg.r_l);
    const WireRecord quiet = solve_wire(u_a, u_a, cfg.r_l, cfg.r_h);
    CHECK_THROWS_AS(ohms_law_identify(quiet, u_a, u_a, cfg.r_h, cfg.r_l),
                    degenerate_input_error);

    const NoiseTrace short_b = gen_gblwn(256, 500.0, 7, 1);
    const WireRecord rec =
        solve_wire(u_a, source(108, cfg.r_h), cfg.r_l, cfg.r_h);
    CHECK_THROWS_AS(ohms_law_identify(rec, short_b, short_b, cfg.r_h, cfg.r_l),
                    invalid_argument_error);
}

TEST_CASE("one-bit power tracking eliminates hypotheses in sign order") {
    // measured sign sequence: +, +, -
    const std::vector<int> measured = {1, 1, -1};
    std::array<std::vector<double>, 4> hyp;
    hyp[0] = {-1.0, 1.0, 1.0};  // HH: wrong at step 1
    hyp[1] = {1.0, -1.0, 1.0};  // LL: wrong at step 2
    hyp[2] = {1.0, 1.0, 1.0};   // HL: wrong at step 3
    hyp[3] = {1.0, 1.0, -1.0};  // LH: consistent throughout
    const AttackOutcome out = one_bit_power_attack(measured, hyp);
    CHECK(out.guess == BitSituation::LH);
    CHECK(out.decision_step == 3);
    CHECK(!out.undecided);
    CHECK(out.aux.at("survival_steps_HH") == 0.0);
    CHECK(out.aux.at("survival_steps_LL") == 1.0);
    CHECK(out.aux.at("survival_steps_HL") == 2.0);
    CHECK(out.aux.at("survival_steps_LH") == 3.0);
}

TEST_CASE("one-bit power tracking can decide at the first step") {
    const std::vector<int> measured = {1};
    std::array<std::vector<double>, 4> hyp;
    hyp[0] = {-2.0};
    hyp[1] = {-0.5};
    hyp[2] = {-1.0};
    hyp[3] = {3.0};
    const AttackOutcome out = one_bit_power_attack(measured, hyp);
    CHECK(out.guess == BitSituation::LH);
    CHECK(out.decision_step == 1);
}

TEST_CASE("one-bit power tracking: zero power reads as positive sign") {
    const std::vector<int> measured = {1};
    std::array<std::vector<double>, 4> hyp;
    hyp[0] = {0.0}; // survives: zero quantizes to +1
    hyp[1] = {-1.0};
    hyp[2] = {-1.0};
    hyp[3] = {-1.0};
    const AttackOutcome out = one_bit_power_attack(measured, hyp);
    CHECK(out.guess == BitSituation::HH);
    CHECK(out.decision_step == 1);
}

TEST_CASE("one-bit power tracking: ambiguity and contradiction") {
    const std::vector<int> measured = {1};
    std::array<std::vector<double>, 4> hyp;
    hyp[0] = {1.0};
    hyp[1] = {1.0};
    hyp[2] = {-1.0};
    hyp[3] = {-1.0};
    const AttackOutcome out = one_bit_power_attack(measured, hyp);
    CHECK(out.undecided);
    CHECK(out.decision_step == 1); // window exhausted
    CHECK(out.guess == BitSituation::HH);

    std::array<std::vector<double>, 4> all_wrong;
    for (auto& h : all_wrong) h = {-1.0};
    CHECK_THROWS_AS(one_bit_power_attack(measured, all_wrong),
                    inconsistent_knowledge_error);

    std::array<std::vector<double>, 4> mismatched = hyp;
    mismatched[2] = {-1.0, -1.0};
    CHECK_THROWS_AS(one_bit_power_attack(measured, mismatched),
                    invalid_argument_error);
    CHECK_THROWS_AS(one_bit_power_attack({}, std::array<std::vector<double>, 4>{}),
                    invalid_argument_error);
}

TEST_CASE("elimination attack recovers a secure exchange exactly") {
    const KljnConfig cfg;
    const NoiseTrace u_la = source(201, cfg.r_l);
    const NoiseTrace u_ha = source(202, cfg.r_h);
    const NoiseTrace u_b = source(203, cfg.r_h);
    // Truth LH: Alice low, Bob high.
    const WireRecord rec = solve_wire(u_la, u_b, cfg.r_l, cfg.r_h);
    const AttackOutcome out =
        elimination_attack(rec, u_la, u_ha, cfg.r_l, cfg.r_h, cfg);
    CHECK(out.guess == BitSituation::LH);
    CHECK(!out.undecided);
    CHECK(out.decision_step == rec.u_w.size());
    CHECK(out.aux.at("ccc_low") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(out.aux.at("ccc_high")) <
          4.0 / std::sqrt(static_cast<double>(rec.u_w.size())));
}

TEST_CASE("elimination attack: indistinguishable candidates stay undecided") {
    const KljnConfig cfg;
    const NoiseTrace t = source(204, cfg.r_l);
    // Zero wire current makes both reconstructions collapse onto u_w, so a
    // shared candidate trace matches under either resistor hypothesis.
    const WireRecord rec = solve_wire(t, t, cfg.r_l, cfg.r_h);
    const AttackOutcome out =
        elimination_attack(rec, t, t, cfg.r_l, cfg.r_h, cfg);
    CHECK(out.undecided);
}

TEST_CASE("elimination attack: unknown sources are inconsistent knowledge") {
    const KljnConfig cfg;
    const WireRecord rec = solve_wire(source(205, cfg.r_l),
                                      source(206, cfg.r_h), cfg.r_l, cfg.r_h);
    const NoiseTrace stranger_l = source(207, cfg.r_l);
    const NoiseTrace stranger_h = source(208, cfg.r_h);
    CHECK_THROWS_AS(
        elimination_attack(rec, stranger_l, stranger_h, cfg.r_l, cfg.r_h, cfg),
        inconsistent_knowledge_error);
}

TEST_CASE("elimination attack is exact over many runs, even quantized") {
    const KljnConfig cfg;
    const std::size_t runs = 50;
    for (int delta_bits : {0, 4}) {
        std::size_t correct = 0;
        for (std::size_t r = 0; r < runs; ++r) {
            const BitSituation truth = secure_situation_from_key(
                derive_seed(60, r + 1, "elim.truth"));
            const bool ah = truth == BitSituation::HL;
            const NoiseTrace u_la =
                source(derive_seed(60, 3 * r + 1, "elim.la"), cfg.r_l);
            const NoiseTrace u_ha =
                source(derive_seed(60, 3 * r + 2, "elim.ha"), cfg.r_h);
            const NoiseTrace u_b = source(derive_seed(60, 3 * r + 3, "elim.b"),
                                          ah ? cfg.r_l : cfg.r_h);
            const WireRecord rec =
                solve_wire(ah ? u_ha : u_la, u_b, ah ? cfg.r_h : cfg.r_l,
                           ah ? cfg.r_l : cfg.r_h);
            const AttackOutcome out = elimination_attack(
                rec, u_la, u_ha, cfg.r_l, cfg.r_h, cfg, delta_bits);
            if (!out.undecided && out.guess == truth) ++correct;
        }
        CHECK(correct == runs); // full source knowledge defeats the exchange
    }
}

TEST_CASE("waiting-time probability of unresolved noise collisions") {
    CHECK(waiting_time_prob(1, 0) == 1.0);
    CHECK(waiting_time_prob(1, 1) == 0.5);
    CHECK(waiting_time_prob(1, 3) == 0.125);
    CHECK(waiting_time_prob(7, 1) == doctest::Approx(1.0 / 128.0).epsilon(1e-15));
    CHECK(waiting_time_prob(2, 2) == 0.0625);
    CHECK_THROWS_AS(waiting_time_prob(0, 1), invalid_argument_error);
    CHECK_THROWS_AS(waiting_time_prob(1, -1), invalid_argument_error);
}
