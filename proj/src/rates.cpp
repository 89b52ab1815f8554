#include "qsdc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qsdc {

namespace {

ClampedProb clamp_prob(double raw, double lo, double hi) {
    if (raw < lo) return {lo, true};
    if (raw > hi) return {hi, true};
    return {raw, false};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

ClampedProb qber_z(const GainSet& g, double q_match) {
    if (g.q_avg == 0.0) throw std::domain_error("qber_z: average gain is zero");
    if (!(q_match > 0.0)) throw std::domain_error("qber_z: q_match must be > 0");
    const double num = (g.q_00 * g.q_mumu + g.q_mumu * g.q_00) / 16.0;
    return clamp_prob(num / (q_match * g.q_avg * g.q_avg), 0.0, 1.0);
}

ClampedProb single_photon_fraction(const ChannelParams& params, const GainSet& g,
                                   const YieldSet& y, double q_match) {
    if (g.q_avg == 0.0) throw std::domain_error("single_photon_fraction: average gain is zero");
    if (!(q_match > 0.0))
        throw std::domain_error("single_photon_fraction: q_match must be > 0");
    const double p1 = params.mu * std::exp(-params.mu);  // Poisson P_mu(1)
    const double num = 2.0 * p1 * p1 * (y.y1 * y.y1 + y.y2 * y.y0) / 16.0;
    return clamp_prob(num / (q_match * g.q_avg * g.q_avg), 0.0, 1.0);
}

ClampedProb phase_error_rate(const YieldSet& y) {
    if (y.y11 == 0.0) throw std::domain_error("phase_error_rate: Y11 is zero");
    return clamp_prob(y.e11_prod / y.y11, 0.0, 0.5);
}

double rate_from_components(double q_avg, double delta_1, double e_x11, double e_z,
                            double f_ec) {
    const double brace =
        delta_1 * (1.0 - binary_entropy(e_x11)) - f_ec * binary_entropy(e_z);
    return std::max(0.0, kBasisPreparationRate * kBasisMatchingRate * q_avg * brace);
}

RateBreakdown secrecy_rate(const ChannelParams& params, double d_km, double mu) {
    if (d_km < 0.0) throw std::domain_error("secrecy_rate: negative distance");
    if (!(mu > 0.0)) throw std::domain_error("secrecy_rate: mu must be > 0");
    ChannelParams local = params;
    local.mu = mu;

    RateBreakdown out;
    out.d_km = d_km;
    out.mu_used = mu;
    out.eta = transmittance(local, d_km);
    const PlobBound pb = plob_bound(params.zeta, d_km);
    out.plob = pb.rate;
    out.plob_capped = pb.capped;

    const GainSet g = gains(local, out.eta);
    out.q_avg = g.q_avg;
    if (g.q_avg == 0.0) {
        out.channel_dead = true;
        out.clamped = true;
        return out;
    }
    const YieldSet y = yields(local, out.eta);

    const ClampedProb ez = qber_z(g, kBasisMatchingRate);
    const ClampedProb d1 = single_photon_fraction(local, g, y, kBasisMatchingRate);
    const ClampedProb ex = phase_error_rate(y);
    // E^Z enters h() only on [0, 0.5]; worse-than-random channels saturate.
    const ClampedProb ez_h = clamp_prob(ez.value, 0.0, 0.5);

    out.e_z = ez_h.value;
    out.delta_1 = d1.value;
    out.e_x11 = ex.value;
    out.clamped = ez.clamped || ez_h.clamped || d1.clamped || ex.clamped || pb.capped;
    out.r = rate_from_components(g.q_avg, d1.value, ex.value, ez_h.value, params.f_ec);
    return out;
}

MuOptimum optimize_intensity(const ChannelParams& params, double d_km,
                             std::span<const double> mu_grid) {
    if (mu_grid.empty()) throw std::invalid_argument("optimize_intensity: empty grid");
    for (double mu : mu_grid)
        if (!(mu > 0.0))
            throw std::invalid_argument("optimize_intensity: grid intensities must be > 0");
    MuOptimum best{mu_grid[0], secrecy_rate(params, d_km, mu_grid[0])};
    for (std::size_t i = 1; i < mu_grid.size(); ++i) {
        RateBreakdown rb = secrecy_rate(params, d_km, mu_grid[i]);
        if (rb.r > best.best.r) best = {mu_grid[i], rb};
    }
    return best;
}

std::vector<double> default_mu_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 8; ++i) grid.push_back(0.01 * i);
    return grid;
}

double x_basis_success(std::uint64_t t, double p_event) {
    if (t < 1) throw std::domain_error("x_basis_success: T must be >= 1");
    if (!(p_event >= 0.0 && p_event <= 1.0))
        throw std::domain_error("x_basis_success: p_event outside [0, 1]");
    if (t == 1) return 0.0;  // a pair needs two events
    if (p_event == 0.0) return 0.0;
    if (p_event == 1.0) return 1.0;
    const double log1mp = std::log1p(-p_event);
    const double tail0 = std::exp(static_cast<double>(t) * log1mp);          // (1-p)^T
    const double tail1 = static_cast<double>(t) * p_event *
                         std::exp(static_cast<double>(t - 1) * log1mp);      // C(T,1) p (1-p)^(T-1)
    return std::clamp(1.0 - tail1 - tail0, 0.0, 1.0);
}

double x_basis_success_approx(std::uint64_t t, double p_event) {
    if (t < 1) throw std::domain_error("x_basis_success_approx: T must be >= 1");
    if (!(p_event >= 0.0 && p_event <= 1.0))
        throw std::domain_error("x_basis_success_approx: p_event outside [0, 1]");
    const double z = static_cast<double>(t - 1) * p_event;
    return std::clamp(1.0 - (1.0 + z) * std::exp(-z), 0.0, 1.0);
}

FramesRequired frames_required(std::uint64_t t, double p_event, double target_failure) {
    if (!(target_failure > 0.0 && target_failure < 1.0))
        throw std::domain_error("frames_required: target_failure outside (0, 1)");
    const double prx = x_basis_success(t, p_event);
    if (prx == 0.0) return {0, true};
    if (prx == 1.0) return {1, false};
    const double q = 1.0 - prx;
    double est = std::ceil(std::log(target_failure) / std::log(q));
    std::uint64_t n = est < 1.0 ? 1 : static_cast<std::uint64_t>(est);
    // Settle the bracketing [q^N <= target < q^(N-1)] in the same arithmetic
    // callers observe.
    while (std::pow(q, static_cast<double>(n)) > target_failure) ++n;
    while (n > 1 && std::pow(q, static_cast<double>(n - 1)) <= target_failure) --n;
    return {n, false};
}

XBasisPlan plan_x_basis(const ChannelParams& params, double d_km, double mu,
                        double target_failure) {
    ChannelParams local = params;
    local.mu = mu;
    const GainSet g = gains(local, transmittance(local, d_km));
    XBasisPlan plan;
    plan.t = params.T;
    plan.p_event = g.q_avg / 2.0;  // Pr(E_mu, E_SPI) = Q/2
    plan.pr_exact = x_basis_success(params.T, plan.p_event);
    plan.pr_approx = x_basis_success_approx(params.T, plan.p_event);
    plan.target_failure = target_failure;
    const FramesRequired fr = frames_required(params.T, plan.p_event, target_failure);
    plan.n_frames = fr.n;
    plan.unreachable = fr.unreachable;
    return plan;
}

std::vector<SweepRow> sweep(const ChannelParams& params, std::span<const double> d_values,
                            const SweepOptions& options) {
    for (std::size_t i = 0; i < d_values.size(); ++i) {
        if (d_values[i] < 0.0) throw std::invalid_argument("sweep: negative distance");
        if (i > 0 && d_values[i] < d_values[i - 1])
            throw std::invalid_argument("sweep: distances must be sorted ascending");
    }
    std::vector<double> grid = options.mu_grid;
    if (options.optimize_mu && grid.empty()) grid = default_mu_grid();

    std::vector<SweepRow> rows;
    rows.reserve(d_values.size());
    for (double d : d_values) {
        SweepRow row;
        if (options.optimize_mu) {
            row.rate = optimize_intensity(params, d, grid).best;
        } else {
            row.rate = secrecy_rate(params, d, params.mu);
        }
        if (options.include_x_columns) {
            const double p_event = row.rate.q_avg / 2.0;
            row.pr_xt = x_basis_success(params.T, p_event);
            const FramesRequired fr = frames_required(params.T, p_event, options.target_failure);
            if (!fr.unreachable) row.n_frames = fr.n;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows,
                     std::span<const std::string> preamble) {
    for (const auto& line : preamble) out << "# " << line << "\n";
    out << "d_km,eta,mu,Q,E_Z,Delta1,eX11,R,PLOB,PrXT,N,clamped\n";
    for (const auto& row : rows) {
        const RateBreakdown& r = row.rate;
        out << fmt(r.d_km) << ',' << fmt(r.eta) << ',' << fmt(r.mu_used) << ','
            << fmt(r.q_avg) << ',' << fmt(r.e_z) << ',' << fmt(r.delta_1) << ','
            << fmt(r.e_x11) << ',' << fmt(r.r) << ',' << fmt(r.plob) << ',';
        if (row.pr_xt) out << fmt(*row.pr_xt);
        out << ',';
        if (row.n_frames) out << *row.n_frames;
        out << ',' << (r.clamped ? 1 : 0) << "\n";
    }
}

}  // namespace qsdc
