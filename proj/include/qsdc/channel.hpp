#pragma once

#include "qsdc/params.hpp"

namespace qsdc {

/// Binary entropy h(x) = -x log2(x) - (1-x) log2(1-x), with 0 log 0 == 0.
/// Throws std::domain_error outside [0, 1].
double binary_entropy(double x);

/// One-arm efficiency (source to the middle node) for a total A--B distance
/// d_km: eta = eta_d * 10^(-zeta * d / 20). Throws std::domain_error for
/// d_km < 0.
double transmittance(const ChannelParams& params, double d_km);

/// Per-path detection gains at one-arm efficiency eta.
struct GainSet {
    double q_mumu;  ///< both senders at intensity mu
    double q_mu0;   ///< Alice mu, Bob vacuum
    double q_0mu;   ///< Alice vacuum, Bob mu
    double q_00;    ///< both vacuum (dark counts only)
    double q_avg;   ///< (q_mumu + q_mu0 + q_0mu + q_00) / 4
};

GainSet gains(const ChannelParams& params, double eta);

/// n-photon yields and the phase-error--yield product.
struct YieldSet {
    double y0;        ///< vacuum yield
    double y1;        ///< single-photon yield
    double y2;        ///< two-photon yield
    double y11;       ///< two-single-photon (one per arm) yield
    double e11_prod;  ///< phase-error-weighted yield e11 = eX11 * Y11
};

YieldSet yields(const ChannelParams& params, double eta);

/// Repeaterless rate limit -log2(1 - eta_c) with end-to-end transmittance
/// eta_c = 10^(-zeta d / 10); detector efficiency does not enter. At d = 0
/// the bound diverges and the configured cap is returned with capped set.
struct PlobBound {
    double rate;
    bool capped;
};

inline constexpr double kPlobCap = 1e4;

PlobBound plob_bound(double zeta, double d_km, double cap = kPlobCap);

}  // namespace qsdc
