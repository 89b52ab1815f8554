#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qsdc/channel.hpp"
#include "qsdc/params.hpp"

namespace qsdc {

/// Basis preparation rate p: two single-photon-interference events form one
/// basis.
inline constexpr double kBasisPreparationRate = 0.5;

/// Basis matching rate q: 2 effective intensity combinations out of 16.
inline constexpr double kBasisMatchingRate = 0.125;

/// A probability forced back into its admissible interval. `clamped` records
/// that the raw value fell outside it.
struct ClampedProb {
    double value;
    bool clamped;
};

/// Z-basis QBER from the per-path gains; clamped to [0, 1].
/// Throws std::domain_error when q_avg == 0 or q_match <= 0.
ClampedProb qber_z(const GainSet& g, double q_match);

/// Average single-photon bases rate Delta_1; clamped to [0, 1].
/// Throws std::domain_error when q_avg == 0.
ClampedProb single_photon_fraction(const ChannelParams& params, const GainSet& g,
                                   const YieldSet& y, double q_match);

/// Single-photon phase error rate eX11 = e11 / Y11; clamped to [0, 0.5].
/// Throws std::domain_error when y11 == 0.
ClampedProb phase_error_rate(const YieldSet& y);

/// Secrecy rate from already-computed components:
///   R = max(0, p q Q { Delta_1 [1 - h(eX11)] - f h(E^Z) }).
double rate_from_components(double q_avg, double delta_1, double e_x11, double e_z,
                            double f_ec);

/// Everything the rate engine derives at one distance.
struct RateBreakdown {
    double d_km = 0;
    double eta = 0;
    double mu_used = 0;
    double q_avg = 0;
    double e_z = 0;      ///< clamped to [0, 0.5] before entering h()
    double delta_1 = 0;
    double e_x11 = 0;
    double r = 0;        ///< bits/round, >= 0
    double plob = 0;
    bool clamped = false;       ///< any probability clamp fired (row excluded from figures)
    bool plob_capped = false;
    bool channel_dead = false;  ///< Q == 0; r forced to 0
};

RateBreakdown secrecy_rate(const ChannelParams& params, double d_km, double mu);

/// Grid maximization of R over intensities; ties break toward smaller mu.
/// Throws std::invalid_argument on an empty or non-positive grid.
struct MuOptimum {
    double mu;
    RateBreakdown best;
};

MuOptimum optimize_intensity(const ChannelParams& params, double d_km,
                             std::span<const double> mu_grid);

/// Default intensity search grid, 0.01 to 0.08 in steps of 0.01.
std::vector<double> default_mu_grid();

/// Success rate of X-basis preparation with T events at per-event success
/// probability p_event:
///   Pr(X|T) = 1 - T p (1-p)^(T-1) - (1-p)^T,
/// evaluated in log space so large T stays stable.
double x_basis_success(std::uint64_t t, double p_event);

/// Poisson approximation 1 - (1 + z) e^(-z) with z = (T-1) p.
double x_basis_success_approx(std::uint64_t t, double p_event);

/// Frames N needed so that [1 - Pr(X|T)]^N <= target_failure.
struct FramesRequired {
    std::uint64_t n = 0;
    bool unreachable = false;  ///< Pr(X|T) == 0: no N suffices
};

FramesRequired frames_required(std::uint64_t t, double p_event, double target_failure);

/// X-basis sizing at one operating point; p_event = Q/2.
struct XBasisPlan {
    std::uint64_t t = 0;
    double p_event = 0;
    double pr_exact = 0;
    double pr_approx = 0;
    std::uint64_t n_frames = 0;
    double target_failure = 0;
    bool unreachable = false;
};

XBasisPlan plan_x_basis(const ChannelParams& params, double d_km, double mu,
                        double target_failure);

struct SweepOptions {
    bool optimize_mu = false;
    std::vector<double> mu_grid;       ///< empty => default_mu_grid() when optimizing
    bool include_x_columns = false;    ///< fill PrXT and N using p_event = Q/2
    double target_failure = 1e-10;
};

struct SweepRow {
    RateBreakdown rate;
    std::optional<double> pr_xt;
    std::optional<std::uint64_t> n_frames;
};

/// One row per distance, each identical to a standalone secrecy_rate call.
/// Distances must be nonnegative and sorted ascending.
std::vector<SweepRow> sweep(const ChannelParams& params, std::span<const double> d_values,
                            const SweepOptions& options);

/// CSV with the exact column set
/// `d_km,eta,mu,Q,E_Z,Delta1,eX11,R,PLOB,PrXT,N,clamped`; missing optional
/// columns emit empty fields. `preamble` lines (if any) are written before the
/// header prefixed with '#'.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows,
                     std::span<const std::string> preamble = {});

}  // namespace qsdc
