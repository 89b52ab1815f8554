#include "qsdc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qsdc {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary_entropy: x outside [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double transmittance(const ChannelParams& params, double d_km) {
    if (d_km < 0.0) throw std::domain_error("transmittance: negative distance");
    return params.eta_d * std::pow(10.0, -params.zeta * d_km / 20.0);
}

GainSet gains(const ChannelParams& params, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("gains: eta outside [0, 1]");
    const double pd = params.p_d;
    const double x = eta * params.mu;
    GainSet g;
    g.q_mumu = 1.0 - std::exp(-2.0 * x) + 2.0 * pd * std::exp(-2.0 * x);
    g.q_mu0 = 1.0 - (1.0 - 2.0 * pd) * std::exp(-x);
    g.q_0mu = g.q_mu0;
    g.q_00 = 2.0 * pd * (1.0 - pd);
    g.q_avg = (g.q_mumu + g.q_mu0 + g.q_0mu + g.q_00) / 4.0;
    return g;
}

YieldSet yields(const ChannelParams& params, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("yields: eta outside [0, 1]");
    const double pd = params.p_d;
    YieldSet y;
    y.y0 = 2.0 * pd * (1.0 - pd);
    y.y1 = 1.0 - (1.0 - 2.0 * pd) * (1.0 - eta);
    y.y2 = 1.0 - (1.0 - 2.0 * pd) * (1.0 - eta) * (1.0 - eta);
    y.y11 = (1.0 - pd) * (1.0 - pd) *
            (eta * eta / 2.0 + pd * (4.0 * eta - 3.0 * eta * eta) +
             4.0 * pd * pd * (1.0 - eta) * (1.0 - eta));
    y.e11_prod = params.e_0 * y.y11 -
                 (params.e_0 - params.delta) * (1.0 - pd * pd) * eta * eta / 2.0;
    return y;
}

PlobBound plob_bound(double zeta, double d_km, double cap) {
    if (d_km < 0.0) throw std::domain_error("plob_bound: negative distance");
    const double eta_c = std::pow(10.0, -zeta * d_km / 10.0);
    if (eta_c >= 1.0) return {cap, true};
    const double rate = -std::log2(1.0 - eta_c);
    if (rate > cap) return {cap, true};
    return {rate, false};
}

}  // namespace qsdc
