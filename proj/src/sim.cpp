#include "qsdc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <thread>

#include "qsdc/channel.hpp"
#include "qsdc/rates.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct RoundOutcome {
    PulseRound round;
    bool d0 = false;
    bool d1 = false;
};

// Draw order per round: alice intensity, alice phase (nonzero pulses only),
// bob intensity, bob phase, detector draws. Each round owns its RNG stream so
// the layout never leaks across rounds.
RoundOutcome simulate_round(const ChannelParams& params, double eta, std::uint64_t seed,
                            std::uint64_t index, bool emit_decoy) {
    RoundRng rng(seed, index);
    RoundOutcome out;
    out.round.index = index;

    auto draw_intensity = [&]() -> double {
        if (emit_decoy) {
            const double u = rng.next_unit();
            if (u < 1.0 / 3.0) return 0.0;
            if (u < 2.0 / 3.0) return params.nu;
            return params.mu;
        }
        return rng.next_unit() < 0.5 ? 0.0 : params.mu;
    };

    out.round.alice_intensity = draw_intensity();
    if (out.round.alice_intensity > 0.0) out.round.alice_phase = rng.next_unit() * kTwoPi;
    out.round.bob_intensity = draw_intensity();
    if (out.round.bob_intensity > 0.0) out.round.bob_phase = rng.next_unit() * kTwoPi;

    const double ia = out.round.alice_intensity;
    const double ib = out.round.bob_intensity;
    const double sum = ia + ib;
    double cross = 0.0;
    if (ia > 0.0 && ib > 0.0)
        cross = 2.0 * std::sqrt(ia * ib) *
                std::cos(out.round.alice_phase - out.round.bob_phase);

    const double keep = 1.0 - params.p_d;
    double p0 = params.p_d, p1 = params.p_d;
    if (sum > 0.0) {
        p0 = 1.0 - keep * std::exp(-0.5 * eta * (sum + cross));
        p1 = 1.0 - keep * std::exp(-0.5 * eta * (sum - cross));
    }
    out.d0 = rng.next_unit() < p0;
    out.d1 = rng.next_unit() < p1;
    return out;
}

void tally(RoundsSummary& s, const RoundOutcome& o) {
    ++s.n_rounds;
    PatternStats* ps;
    const bool a_on = o.round.alice_intensity > 0.0;
    const bool b_on = o.round.bob_intensity > 0.0;
    if (a_on && b_on) ps = &s.both_on;
    else if (a_on) ps = &s.alice_only;
    else if (b_on) ps = &s.bob_only;
    else ps = &s.both_off;
    ++ps->rounds;
    const int clicks = (o.d0 ? 1 : 0) + (o.d1 ? 1 : 0);
    if (clicks > 0) ++ps->at_least_one_click;
    if (clicks == 1) ++ps->exactly_one_click;
    if (clicks == 0) ++s.click_none;
    else if (clicks == 2) ++s.click_both;
    else if (o.d0) ++s.click_d0_only;
    else ++s.click_d1_only;
}

template <typename PerRound>
void run_partitioned(const SimConfig& config, PerRound&& per_chunk) {
    const int workers = std::max(1, config.workers);
    const std::uint64_t n = config.n_rounds;
    if (workers == 1 || n < 4096) {
        per_chunk(0, 0, n);
        return;
    }
    const std::uint64_t chunk = (n + workers - 1) / static_cast<std::uint64_t>(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        const std::uint64_t lo = std::min(n, w * chunk);
        const std::uint64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&per_chunk, w, lo, hi] { per_chunk(w, lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

void RoundsSummary::merge(const RoundsSummary& o) {
    auto add = [](PatternStats& a, const PatternStats& b) {
        a.rounds += b.rounds;
        a.at_least_one_click += b.at_least_one_click;
        a.exactly_one_click += b.exactly_one_click;
    };
    n_rounds += o.n_rounds;
    add(both_on, o.both_on);
    add(alice_only, o.alice_only);
    add(bob_only, o.bob_only);
    add(both_off, o.both_off);
    click_none += o.click_none;
    click_d0_only += o.click_d0_only;
    click_d1_only += o.click_d1_only;
    click_both += o.click_both;
}

PulseRound generate_round(const ChannelParams& params, std::uint64_t seed,
                          std::uint64_t index, bool emit_decoy) {
    // Detection draws are discarded; eta does not affect the preparation data.
    return simulate_round(params, 0.0, seed, index, emit_decoy).round;
}

void simulate_quantum_layer(const SimConfig& config, std::vector<PulseRound>& rounds,
                            std::vector<DetectionEvent>& detections) {
    if (config.n_rounds < 1) throw std::invalid_argument("simulate_quantum_layer: n_rounds < 1");
    const double eta = transmittance(config.params, config.d_km);
    rounds.resize(config.n_rounds);
    detections.resize(config.n_rounds);
    run_partitioned(config, [&](int, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            RoundOutcome o = simulate_round(config.params, eta, config.seed, i,
                                            config.emit_decoy);
            rounds[i] = o.round;
            detections[i] = DetectionEvent{i, o.d0, o.d1};
        }
    });
}

RoundsSummary simulate_valid_events(const SimConfig& config, std::vector<ValidEvent>& valid) {
    if (config.n_rounds < 1) throw std::invalid_argument("simulate_valid_events: n_rounds < 1");
    const double eta = transmittance(config.params, config.d_km);
    const int workers = std::max(1, config.workers);
    std::vector<RoundsSummary> summaries(workers);
    std::vector<std::vector<ValidEvent>> locals(workers);
    run_partitioned(config, [&](int w, std::uint64_t lo, std::uint64_t hi) {
        RoundsSummary& s = summaries[w];
        std::vector<ValidEvent>& out = locals[w];
        for (std::uint64_t i = lo; i < hi; ++i) {
            RoundOutcome o = simulate_round(config.params, eta, config.seed, i,
                                            config.emit_decoy);
            tally(s, o);
            if (o.d0 != o.d1) {
                out.push_back(ValidEvent{i, o.round.alice_intensity, o.round.alice_phase,
                                         o.round.bob_intensity, o.round.bob_phase, o.d0});
            }
        }
    });
    RoundsSummary total;
    valid.clear();
    for (int w = 0; w < workers; ++w) {
        total.merge(summaries[w]);
        valid.insert(valid.end(), locals[w].begin(), locals[w].end());
    }
    return total;
}

std::vector<std::uint64_t> filter_valid_events(std::span<const DetectionEvent> detections) {
    std::vector<std::uint64_t> out;
    for (const auto& d : detections)
        if (d.d0 != d.d1) out.push_back(d.index);
    return out;
}

std::vector<ValidEvent> collect_valid_events(std::span<const PulseRound> rounds,
                                             std::span<const DetectionEvent> detections) {
    std::vector<ValidEvent> out;
    for (std::uint64_t idx : filter_valid_events(detections)) {
        const PulseRound& r = rounds[idx];
        out.push_back(ValidEvent{idx, r.alice_intensity, r.alice_phase, r.bob_intensity,
                                 r.bob_phase, detections[idx].d0});
    }
    return out;
}

IsolationVerdict check_isolation_threshold(std::span<const std::uint64_t> valid_indices,
                                           std::uint64_t t, std::uint64_t lambda) {
    IsolationVerdict v;
    const std::size_t n = valid_indices.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t nearest = UINT64_MAX;
        if (k > 0) nearest = std::min(nearest, valid_indices[k] - valid_indices[k - 1]);
        if (k + 1 < n) nearest = std::min(nearest, valid_indices[k + 1] - valid_indices[k]);
        if (nearest >= t) ++v.isolated_count;
    }
    v.pass = v.isolated_count < lambda;
    return v;
}

const char* to_string(BasisKind kind) {
    switch (kind) {
        case BasisKind::X: return "X";
        case BasisKind::Z0: return "Z0";
        case BasisKind::Z1: return "Z1";
        case BasisKind::O: return "O";
    }
    return "?";
}

BasisAssignment prepare_bases(std::span<const ValidEvent> valid,
                              std::span<const std::uint8_t> ciphertext, std::size_t n_x,
                              const ChannelParams& params) {
    BasisAssignment out;
    std::vector<bool> consumed(valid.size(), false);

    // X pairs: adjacent events with nonzero Alice intensity, round gap < T.
    std::size_t prev = SIZE_MAX;
    for (std::size_t k = 0; k < valid.size() && out.n_x < n_x; ++k) {
        if (valid[k].alice_intensity <= 0.0) continue;
        if (prev != SIZE_MAX &&
            valid[k].round_index - valid[prev].round_index < params.T) {
            out.pairs.push_back(BasisPair{valid[prev].round_index, valid[k].round_index,
                                          static_cast<std::uint32_t>(prev),
                                          static_cast<std::uint32_t>(k), BasisKind::X, -1});
            consumed[prev] = consumed[k] = true;
            ++out.n_x;
            prev = SIZE_MAX;
        } else {
            prev = k;
        }
    }

    // Z pairs in ciphertext order. Bit 0 pairs (alice = 0, alice != 0); bit 1
    // the reverse. The earliest unconsumed event fitting the first slot is
    // taken, then the earliest later event fitting the second slot.
    std::set<std::uint32_t> zeros, nonzeros;
    for (std::size_t k = 0; k < valid.size(); ++k) {
        if (consumed[k]) continue;
        if (valid[k].alice_intensity > 0.0) nonzeros.insert(static_cast<std::uint32_t>(k));
        else zeros.insert(static_cast<std::uint32_t>(k));
    }
    for (std::size_t t = 0; t < ciphertext.size(); ++t) {
        const bool bit = ciphertext[t] != 0;
        std::set<std::uint32_t>& first = bit ? nonzeros : zeros;
        std::set<std::uint32_t>& second = bit ? zeros : nonzeros;
        if (first.empty())
            throw InsufficientEventsError(
                t, "prepare_bases: no event for ciphertext position " + std::to_string(t));
        const std::uint32_t vi = *first.begin();
        auto itj = second.upper_bound(vi);
        if (itj == second.end())
            throw InsufficientEventsError(
                t, "prepare_bases: no second event for ciphertext position " +
                       std::to_string(t));
        const std::uint32_t vj = *itj;
        first.erase(first.begin());
        second.erase(itj);
        consumed[vi] = consumed[vj] = true;
        out.pairs.push_back(BasisPair{valid[vi].round_index, valid[vj].round_index, vi, vj,
                                      bit ? BasisKind::Z1 : BasisKind::Z0,
                                      static_cast<std::int64_t>(t)});
        ++out.n_z;
    }

    // Leftover vacuum events pair up as O.
    std::uint32_t pending = UINT32_MAX;
    for (std::uint32_t k : zeros) {
        if (pending == UINT32_MAX) {
            pending = k;
            continue;
        }
        out.pairs.push_back(BasisPair{valid[pending].round_index, valid[k].round_index,
                                      pending, k, BasisKind::O, -1});
        ++out.n_o;
        pending = UINT32_MAX;
    }
    return out;
}

PhaseDecomposition decompose_relative_phase(double phase_i, double phase_j) {
    double d = std::fmod(phase_j - phase_i, kTwoPi);
    if (d < 0.0) d += kTwoPi;
    PhaseDecomposition r;
    if (d >= std::numbers::pi) {
        r.bit = 1;
        r.theta = d - std::numbers::pi;
    } else {
        r.theta = d;
    }
    return r;
}

namespace {

int phase_slice(double theta, std::uint32_t m) {
    const double width = kTwoPi / static_cast<double>(m);
    int s = static_cast<int>(theta / width);
    const int n_slices = static_cast<int>(m / 2);  // theta lives in [0, pi)
    return std::min(s, n_slices - 1);
}

}  // namespace

std::vector<MatchedPair> match_bases(const BasisAssignment& assignment,
                                     std::span<const ValidEvent> valid,
                                     const ChannelParams& params) {
    std::vector<MatchedPair> out;
    for (const BasisPair& p : assignment.pairs) {
        const ValidEvent& ei = valid[p.vi];
        const ValidEvent& ej = valid[p.vj];
        bool keep = false;
        switch (p.kind) {
            case BasisKind::Z0:
                keep = ei.bob_intensity > 0.0 && ej.bob_intensity == 0.0;
                break;
            case BasisKind::Z1:
                keep = ei.bob_intensity == 0.0 && ej.bob_intensity > 0.0;
                break;
            case BasisKind::X: {
                if (ei.bob_intensity <= 0.0 || ej.bob_intensity <= 0.0) break;
                if (ei.alice_intensity != ei.bob_intensity ||
                    ej.alice_intensity != ej.bob_intensity)
                    break;
                const PhaseDecomposition a =
                    decompose_relative_phase(ei.alice_phase, ej.alice_phase);
                const PhaseDecomposition b =
                    decompose_relative_phase(ei.bob_phase, ej.bob_phase);
                keep = phase_slice(a.theta, params.phase_slices) ==
                       phase_slice(b.theta, params.phase_slices);
                break;
            }
            case BasisKind::O:
                break;  // parameter estimation only, never carries bits
        }
        if (!keep) continue;
        out.push_back(MatchedPair{p, ei.alice_intensity, ej.alice_intensity, ei.alice_phase,
                                  ej.alice_phase, ei.bob_intensity, ej.bob_intensity,
                                  ei.bob_phase, ej.bob_phase});
    }
    return out;
}

MappedBits map_bits(std::span<const MatchedPair> matched, std::span<const ValidEvent> valid,
                    const ChannelParams& params) {
    (void)params;
    MappedBits out;
    for (const MatchedPair& m : matched) {
        const BasisPair& p = m.pair;
        switch (p.kind) {
            case BasisKind::Z0:
            case BasisKind::Z1: {
                // Bob reads his own intensities: (0, pulse) -> 1, (pulse, 0) -> 0.
                const std::uint8_t bob_bit = m.bob_intensity_i == 0.0 ? 1 : 0;
                const std::uint8_t alice_bit = p.kind == BasisKind::Z1 ? 1 : 0;
                out.alice.push_back(alice_bit);
                out.bob.push_back(bob_bit);
                out.kind.push_back(p.kind);
                out.z_pos.push_back(p.z_pos);
                break;
            }
            case BasisKind::X: {
                if (m.alice_intensity_i <= 0.0 || m.alice_intensity_j <= 0.0 ||
                    m.bob_intensity_i <= 0.0 || m.bob_intensity_j <= 0.0)
                    throw std::invalid_argument("map_bits: zero-intensity X member");
                const PhaseDecomposition a =
                    decompose_relative_phase(m.alice_phase_i, m.alice_phase_j);
                const PhaseDecomposition b =
                    decompose_relative_phase(m.bob_phase_i, m.bob_phase_j);
                std::uint8_t bob_bit = b.bit;
                const bool di = valid[p.vi].d0;
                const bool dj = valid[p.vj].d0;
                if (di != dj) bob_bit ^= 1;  // (D0, D1) or (D1, D0) across the pair
                out.alice.push_back(a.bit);
                out.bob.push_back(bob_bit);
                out.kind.push_back(BasisKind::X);
                out.z_pos.push_back(-1);
                break;
            }
            case BasisKind::O:
                throw std::invalid_argument("map_bits: O pair carries no bits");
        }
    }
    return out;
}

double empirical_match_rate(std::span<const ValidEvent> valid) {
    std::uint64_t slots = 0, hits = 0;
    for (std::size_t k = 0; k + 1 < valid.size(); k += 2) {
        ++slots;
        const ValidEvent& a = valid[k];
        const ValidEvent& b = valid[k + 1];
        const bool z0 = a.alice_intensity == 0.0 && a.bob_intensity > 0.0 &&
                        b.alice_intensity > 0.0 && b.bob_intensity == 0.0;
        const bool z1 = a.alice_intensity > 0.0 && a.bob_intensity == 0.0 &&
                        b.alice_intensity == 0.0 && b.bob_intensity > 0.0;
        if (z0 || z1) ++hits;
    }
    return slots == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(slots);
}

EstimationReport estimate_parameters(const SimTranscript& transcript) {
    const SimConfig& config = transcript.config;
    EstimationReport rep;
    rep.n_valid = transcript.valid.size();
    rep.q_emp = config.n_rounds == 0
                    ? 0.0
                    : static_cast<double>(rep.n_valid) / static_cast<double>(config.n_rounds);
    rep.isolation_count = transcript.isolation.isolated_count;
    rep.q_match_emp = empirical_match_rate(transcript.valid);

    std::uint64_t z_bits = 0, z_errs = 0, x_bits = 0, x_errs = 0;
    const MappedBits& bits = transcript.bits;
    for (std::size_t k = 0; k < bits.kind.size(); ++k) {
        const bool err = bits.alice[k] != bits.bob[k];
        if (bits.kind[k] == BasisKind::X) {
            ++x_bits;
            if (err) ++x_errs;
        } else {
            ++z_bits;
            if (err) ++z_errs;
        }
    }
    rep.n_matched = transcript.matched.size();
    rep.n_matched_z = z_bits;
    rep.n_matched_x = x_bits;
    rep.ez_emp = z_bits == 0 ? 0.0 : static_cast<double>(z_errs) / static_cast<double>(z_bits);
    rep.x_qber_emp =
        x_bits == 0 ? 0.0 : static_cast<double>(x_errs) / static_cast<double>(x_bits);

    // The no-eavesdropper analytics supply the single-photon quantities.
    const double eta = transmittance(config.params, config.d_km);
    const GainSet g = gains(config.params, eta);
    const YieldSet y = yields(config.params, eta);
    if (g.q_avg > 0.0 && y.y11 > 0.0) {
        rep.delta_1 = single_photon_fraction(config.params, g, y, kBasisMatchingRate).value;
        rep.e_x11 = phase_error_rate(y).value;
    }

    rep.aborted = !transcript.isolation.pass || rep.n_matched == 0;
    if (!rep.aborted) {
        const double ez_h = std::min(rep.ez_emp, 0.5);
        rep.r_est = rate_from_components(rep.q_emp, rep.delta_1, rep.e_x11, ez_h,
                                         config.params.f_ec);
    }
    return rep;
}

SimTranscript run_protocol(const SimConfig& config, std::span<const std::uint8_t> ciphertext,
                           std::size_t n_x) {
    SimTranscript t;
    t.config = config;
    if (config.materialize) {
        simulate_quantum_layer(config, t.rounds, t.detections);
        t.valid = collect_valid_events(t.rounds, t.detections);
        RoundsSummary s;
        for (std::uint64_t i = 0; i < config.n_rounds; ++i) {
            // Rebuild aggregate counters from the materialized vectors.
            RoundOutcome o{t.rounds[i], t.detections[i].d0, t.detections[i].d1};
            tally(s, o);
        }
        t.summary = s;
    } else {
        t.summary = simulate_valid_events(config, t.valid);
    }

    std::vector<std::uint64_t> valid_indices;
    valid_indices.reserve(t.valid.size());
    for (const auto& v : t.valid) valid_indices.push_back(v.round_index);
    t.isolation = check_isolation_threshold(valid_indices, config.params.T,
                                            config.params.lambda_threshold);
    if (!t.isolation.pass) {
        t.report = estimate_parameters(t);
        return t;
    }

    if (n_x == 0)
        n_x = std::max<std::size_t>(64, t.valid.size() / 20);
    t.assignment = prepare_bases(t.valid, ciphertext, n_x, config.params);
    t.matched = match_bases(t.assignment, t.valid, config.params);
    t.bits = map_bits(t.matched, t.valid, config.params);
    t.report = estimate_parameters(t);
    return t;
}

}  // namespace qsdc
