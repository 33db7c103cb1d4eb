#include "kljn/attack_zero_crossing.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "kljn/errors.hpp"
#include "kljn/fft.hpp"
#include "kljn/rng.hpp"

namespace kljn {

NoiseTrace oversample(const NoiseTrace& trace, std::size_t factor) {
    if (factor == 0)
        throw invalid_argument_error("oversample: factor must be >= 1");
    const std::size_t n = trace.samples.size();
    if (n < 2)
        throw invalid_argument_error("oversample: need at least 2 samples");
    if (factor == 1) return trace;

    std::vector<std::complex<double>> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = trace.samples[i];
    const auto spec = fft(in, false);

    const std::size_t m = n * factor;
    std::vector<std::complex<double>> dense(m, {0.0, 0.0});
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) dense[k] = spec[k];
    for (std::size_t k = half + 1; k < n; ++k) dense[m - n + k] = spec[k];
    if (n % 2 == 0) {
        // Split the Nyquist bin symmetrically with weight 1/sqrt(2) so the
        // dense sequence has exactly the energy of the input.
        const double w = 1.0 / std::sqrt(2.0);
        dense[half] = w * spec[half];
        dense[m - half] = w * spec[half];
    } else {
        dense[half] = spec[half];
    }

    auto time = fft(dense, true);
    NoiseTrace out;
    out.samples.resize(m);
    const double gain = static_cast<double>(factor);
    for (std::size_t i = 0; i < m; ++i) out.samples[i] = gain * time[i].real();
    out.dt = trace.dt / gain;
    out.bandwidth = trace.bandwidth;
    return out;
}

CrossingSet find_zero_crossings(const NoiseTrace& i, const NoiseTrace& u,
                                std::size_t factor) {
    if (i.samples.size() != u.samples.size())
        throw invalid_argument_error(
            "find_zero_crossings: trace length mismatch");
    const NoiseTrace id = oversample(i, factor);
    const NoiseTrace ud = oversample(u, factor);

    CrossingSet out;
    const auto& x = id.samples;
    const auto& v = ud.samples;
    const double dt = id.dt;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double a = x[k];
        const double b = x[k + 1];
        if (a == 0.0) {
            out.times.push_back(static_cast<double>(k) * dt);
            out.sampled_voltages.push_back(v[k]);
            continue;
        }
        if (a * b < 0.0) {
            const double frac = a / (a - b);
            out.times.push_back((static_cast<double>(k) + frac) * dt);
            out.sampled_voltages.push_back(v[k] + frac * (v[k + 1] - v[k]));
        }
    }
    return out;
}

namespace {

struct RunMeasure {
    BitSituation truth;
    double u2_zc = 0.0;
    double u2_w = 0.0;
    std::size_t crossings = 0;
    bool discarded = false;
};

RunMeasure measure_run(const SchemeRunner& runner, std::uint64_t key,
                       std::size_t factor) {
    auto [rec, truth] = runner(key);
    NoiseTrace it{rec.i_w, rec.dt, 0.0};
    NoiseTrace ut{rec.u_w, rec.dt, 0.0};
    const CrossingSet cs = find_zero_crossings(it, ut, factor);

    RunMeasure m;
    m.truth = truth;
    m.crossings = cs.times.size();
    m.u2_w = mean_square(rec.u_w);
    if (cs.sampled_voltages.empty()) {
        m.discarded = true;
        return m;
    }
    double acc = 0.0;
    for (double v : cs.sampled_voltages) acc += v * v;
    m.u2_zc = acc / static_cast<double>(cs.sampled_voltages.size());
    return m;
}

} // namespace

ZcResult zc_attack(const SchemeRunner& runner, std::size_t runs,
                   std::uint64_t seed, std::size_t factor) {
    if (runs == 0) throw invalid_argument_error("zc_attack: runs must be > 0");

    ZcResult res;

    // Calibration: learn the mean crossing-sampled voltage mean-square of
    // each secure situation from labeled exchanges.
    double sum_lh = 0.0, sum_hl = 0.0;
    double sum_w_lh = 0.0, sum_w_hl = 0.0;
    std::size_t n_lh = 0, n_hl = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        const RunMeasure m =
            measure_run(runner, derive_seed(seed, 1, r + 1), factor);
        if (m.discarded) {
            ++res.discarded;
            continue;
        }
        if (m.truth == BitSituation::LH) {
            sum_lh += m.u2_zc;
            sum_w_lh += m.u2_w;
            ++n_lh;
        } else if (m.truth == BitSituation::HL) {
            sum_hl += m.u2_zc;
            sum_w_hl += m.u2_w;
            ++n_hl;
        }
    }
    if (n_lh == 0 || n_hl == 0)
        throw degenerate_input_error(
            "zc_attack: calibration saw no usable runs for a secure "
            "situation");
    res.mean_u2zc_lh = sum_lh / static_cast<double>(n_lh);
    res.mean_u2zc_hl = sum_hl / static_cast<double>(n_hl);
    res.mean_u2w_lh = sum_w_lh / static_cast<double>(n_lh);
    res.mean_u2w_hl = sum_w_hl / static_cast<double>(n_hl);

    // Attack: fresh exchanges, nearest calibrated mean decides (tie -> LH).
    res.per_run.reserve(runs);
    double cross_acc = 0.0;
    std::size_t used = 0, correct = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        const RunMeasure m =
            measure_run(runner, derive_seed(seed, 2, r + 1), factor);
        ZcRun row;
        row.truth = m.truth;
        row.u2_zc = m.u2_zc;
        row.crossings = m.crossings;
        if (m.discarded) {
            row.discarded = true;
            row.guess = BitSituation::LH;
            ++res.discarded;
            res.per_run.push_back(row);
            continue;
        }
        const double d_lh = std::abs(m.u2_zc - res.mean_u2zc_lh);
        const double d_hl = std::abs(m.u2_zc - res.mean_u2zc_hl);
        row.guess = (d_hl < d_lh) ? BitSituation::HL : BitSituation::LH;
        row.correct = (row.guess == row.truth);
        cross_acc += static_cast<double>(m.crossings);
        ++used;
        if (row.correct) ++correct;
        res.per_run.push_back(row);
    }
    if (used == 0)
        throw degenerate_input_error("zc_attack: every attack run discarded");
    res.p = static_cast<double>(correct) / static_cast<double>(used);
    res.mean_crossings = cross_acc / static_cast<double>(used);

    // Batch scatter of p: 10 equal batches of consecutive attack runs.
    const std::size_t batches = 10;
    if (res.per_run.size() >= batches) {
        const std::size_t per = res.per_run.size() / batches;
        std::vector<double> ps;
        ps.reserve(batches);
        for (std::size_t b = 0; b < batches; ++b) {
            std::size_t ok = 0, tot = 0;
            for (std::size_t k = b * per; k < (b + 1) * per; ++k) {
                if (res.per_run[k].discarded) continue;
                ++tot;
                if (res.per_run[k].correct) ++ok;
            }
            if (tot > 0)
                ps.push_back(static_cast<double>(ok) /
                             static_cast<double>(tot));
        }
        if (ps.size() > 1) {
            const double mu = mean_of(ps);
            double acc = 0.0;
            for (double v : ps) acc += (v - mu) * (v - mu);
            res.sigma = std::sqrt(acc / static_cast<double>(ps.size()));
        }
    }
    return res;
}

} // namespace kljn
