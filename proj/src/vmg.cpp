#include "kljn/vmg.hpp"

#include <cmath>
#include <string>

#include "kljn/errors.hpp"

namespace kljn {

void validate(const VmgConfig& config) {
    if (!(config.r_ha > 0.0) || !(config.r_la > 0.0) || !(config.r_hb > 0.0) ||
        !(config.r_lb > 0.0))
        throw invalid_argument_error("VmgConfig: all resistors must be positive");
    if (!(config.u2_la > 0.0))
        throw invalid_argument_error("VmgConfig: u2_la must be positive");
    if (!(config.bandwidth > 0.0))
        throw invalid_argument_error("VmgConfig: bandwidth must be positive");
}

VmgRawLevels vmg_level_formulas(const VmgConfig& c) {
    validate(c);
    const double rha = c.r_ha, rla = c.r_la, rhb = c.r_hb, rlb = c.r_lb;
    const double u2la = c.u2_la;

    const double den_hb = rla * rla + rlb * (rla - rha) - rha * rla;
    const double den_ha = rla * rla + rlb * (rla + rhb) + rhb * rla;
    const double den_lb = rla * rla + rla * (rhb - rha) - rha * rhb;
    if (den_hb == 0.0 || den_ha == 0.0 || den_lb == 0.0)
        throw singular_configuration_error(
            "vmg_level_formulas: zero denominator for this resistor set");

    VmgRawLevels lv;
    lv.u2_hb = u2la * (rlb * (rha + rhb) - rha * rhb + rhb * rhb) / den_hb;
    lv.u2_ha = u2la * (rlb * (rha + rhb) + rha * rhb + rha * rha) / den_ha;
    lv.u2_lb = u2la * (rlb * (rha - rhb) - rha * rhb + rlb * rlb) / den_lb;
    return lv;
}

namespace {

double temperature_for(double u2, double r, double bandwidth) {
    return u2 / (4.0 * k_boltzmann * r * bandwidth);
}

VmgDerived finish_levels(const VmgConfig& c, double u2_hb, double u2_ha,
                         double u2_lb) {
    struct Named {
        const char* name;
        double value;
    };
    for (Named q : {Named{"u2_hb", u2_hb}, Named{"u2_ha", u2_ha},
                    Named{"u2_lb", u2_lb}}) {
        if (!(q.value >= 0.0) || !std::isfinite(q.value))
            throw unphysical_configuration_error(
                std::string("unphysical configuration: derived ") + q.name +
                " is negative");
    }
    VmgDerived d;
    d.u2_hb = u2_hb;
    d.u2_ha = u2_ha;
    d.u2_lb = u2_lb;
    d.t_la = temperature_for(c.u2_la, c.r_la, c.bandwidth);
    d.t_hb = temperature_for(u2_hb, c.r_hb, c.bandwidth);
    d.t_ha = temperature_for(u2_ha, c.r_ha, c.bandwidth);
    d.t_lb = temperature_for(u2_lb, c.r_lb, c.bandwidth);
    struct NamedT {
        const char* name;
        double value;
    };
    for (NamedT q : {NamedT{"t_la", d.t_la}, NamedT{"t_hb", d.t_hb},
                     NamedT{"t_ha", d.t_ha}, NamedT{"t_lb", d.t_lb}}) {
        if (!(q.value >= 0.0) || !std::isfinite(q.value))
            throw unphysical_configuration_error(
                std::string("unphysical configuration: derived ") + q.name +
                " is negative");
    }
    return d;
}

} // namespace

VmgDerived vmg_levels(const VmgConfig& c) {
    VmgRawLevels lv = vmg_level_formulas(c);
    return finish_levels(c, lv.u2_hb, lv.u2_ha, lv.u2_lb);
}

double fck1_fourth_resistor(double r_hb, double r_la, double r_ha) {
    if (!(r_hb > 0.0) || !(r_la > 0.0) || !(r_ha > 0.0))
        throw invalid_argument_error(
            "fck1_fourth_resistor: all resistors must be positive");
    return r_hb * r_la / r_ha;
}

VmgDerived fck1_levels(const VmgConfig& c) {
    validate(c);
    double want = fck1_fourth_resistor(c.r_hb, c.r_la, c.r_ha);
    if (std::fabs(c.r_lb - want) > 1e-9 * want)
        throw invalid_argument_error(
            "fck1_levels: r_lb must equal r_hb*r_la/r_ha (zero-power relation)");
    double u2_hb = c.u2_la * c.r_hb / c.r_la;
    double u2_ha = c.u2_la * c.r_ha * (c.r_ha + c.r_lb) /
                   (c.r_la * (c.r_la + c.r_hb));
    double u2_lb = u2_ha * c.r_lb / c.r_ha;
    return finish_levels(c, u2_hb, u2_ha, u2_lb);
}

std::array<NoiseTrace, 4> vmg_source_traces(
    const VmgConfig& config, const VmgDerived& derived, std::size_t n_samples,
    std::size_t ensemble_count, const std::array<std::uint64_t, 4>& seeds) {
    if (n_samples == 0)
        throw invalid_argument_error("vmg_source_traces: zero-length request");
    validate(config);
    const double u2[4] = {derived.u2_ha, config.u2_la, derived.u2_hb,
                          derived.u2_lb};
    std::array<NoiseTrace, 4> out;
    for (int s = 0; s < 4; ++s) {
        if (!(u2[s] >= 0.0))
            throw unphysical_configuration_error(
                "vmg_source_traces: negative derived level");
        NoiseTrace t = gen_gblwn_window(n_samples, config.bandwidth, seeds[s],
                                        ensemble_count);
        out[s] = scale_to_rms(t, std::sqrt(u2[s]));
    }
    return out;
}

} // namespace kljn
