#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsdc/params.hpp"

namespace qsdc {

/// One round of pulse preparation on both sides. Vacuum pulses carry phase 0.
struct PulseRound {
    std::uint64_t index = 0;
    double alice_intensity = 0;
    double alice_phase = 0;
    double bob_intensity = 0;
    double bob_phase = 0;
};

struct DetectionEvent {
    std::uint64_t index = 0;
    bool d0 = false;
    bool d1 = false;
};

/// A round where exactly one detector clicked, with the preparation data the
/// parties keep for it.
struct ValidEvent {
    std::uint64_t round_index = 0;
    double alice_intensity = 0;
    double alice_phase = 0;
    double bob_intensity = 0;
    double bob_phase = 0;
    bool d0 = false;  ///< true: D0 clicked; false: D1 clicked
};

struct PatternStats {
    std::uint64_t rounds = 0;
    std::uint64_t at_least_one_click = 0;
    std::uint64_t exactly_one_click = 0;
};

struct RoundsSummary {
    std::uint64_t n_rounds = 0;
    PatternStats both_on;     ///< both senders nonzero intensity
    PatternStats alice_only;
    PatternStats bob_only;
    PatternStats both_off;
    std::uint64_t click_none = 0, click_d0_only = 0, click_d1_only = 0, click_both = 0;

    void merge(const RoundsSummary& other);
};

struct SimConfig {
    ChannelParams params;
    double d_km = 0;
    std::uint64_t n_rounds = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    bool emit_decoy = false;   ///< draw intensities from {0, nu, mu} instead of {0, mu}
    bool materialize = false;  ///< keep full per-round vectors in the transcript
};

/// Regenerates round `index` of the stream keyed by `seed`. Pure function of
/// its arguments; the simulation and any replay agree bit for bit.
PulseRound generate_round(const ChannelParams& params, std::uint64_t seed,
                          std::uint64_t index, bool emit_decoy);

/// Full quantum layer: preparation plus the middle node's detection. Output
/// vectors are indexed by round. Deterministic given (config.params, n_rounds,
/// seed) regardless of worker count.
void simulate_quantum_layer(const SimConfig& config, std::vector<PulseRound>& rounds,
                            std::vector<DetectionEvent>& detections);

/// Streaming form: only valid events and aggregate statistics are retained.
RoundsSummary simulate_valid_events(const SimConfig& config, std::vector<ValidEvent>& valid);

/// Indices of rounds with exactly one click, order preserved.
std::vector<std::uint64_t> filter_valid_events(std::span<const DetectionEvent> detections);

/// Joins per-round data with the sifted index list.
std::vector<ValidEvent> collect_valid_events(std::span<const PulseRound> rounds,
                                             std::span<const DetectionEvent> detections);

struct IsolationVerdict {
    std::uint64_t isolated_count = 0;
    bool pass = false;
};

/// Counts valid events whose nearest valid neighbor is >= t rounds away;
/// passes iff the count stays below lambda.
IsolationVerdict check_isolation_threshold(std::span<const std::uint64_t> valid_indices,
                                           std::uint64_t t, std::uint64_t lambda);

enum class BasisKind : std::uint8_t { X, Z0, Z1, O };

const char* to_string(BasisKind kind);

struct BasisPair {
    std::uint64_t i = 0;  ///< round index of the first event
    std::uint64_t j = 0;  ///< round index of the second event
    std::uint32_t vi = 0; ///< ordinal of the first event in the valid list
    std::uint32_t vj = 0;
    BasisKind kind = BasisKind::O;
    std::int64_t z_pos = -1;  ///< ciphertext position for Z pairs
};

struct BasisAssignment {
    std::vector<BasisPair> pairs;  ///< X pairs first, then Z in ciphertext order, then O
    std::size_t n_x = 0, n_z = 0, n_o = 0;
};

/// Raised when the ciphertext cannot be embedded in the available events.
class InsufficientEventsError : public std::runtime_error {
public:
    InsufficientEventsError(std::size_t position, const std::string& what)
        : std::runtime_error(what), position_(position) {}
    std::size_t ciphertext_position() const { return position_; }

private:
    std::size_t position_;
};

/// Alice's greedy basis preparation: n_x X pairs from adjacent events with
/// both of her intensities nonzero and round gap < T, then Z pairs consuming
/// the ciphertext in order (bit 0 pairs a vacuum event with a later nonzero
/// event, bit 1 the reverse), then O pairs over leftover vacuum events.
BasisAssignment prepare_bases(std::span<const ValidEvent> valid,
                              std::span<const std::uint8_t> ciphertext, std::size_t n_x,
                              const ChannelParams& params);

struct MatchedPair {
    BasisPair pair;
    double alice_intensity_i = 0, alice_intensity_j = 0;
    double alice_phase_i = 0, alice_phase_j = 0;
    double bob_intensity_i = 0, bob_intensity_j = 0;
    double bob_phase_i = 0, bob_phase_j = 0;
};

/// Bob's side of basis matching. A Z pair survives iff his intensities form
/// the pattern complementary to Alice's; an X pair survives iff both of his
/// intensities are nonzero, published intensities agree on both rounds, and
/// the published phase slices (width 2 pi / M) coincide.
std::vector<MatchedPair> match_bases(const BasisAssignment& assignment,
                                     std::span<const ValidEvent> valid,
                                     const ChannelParams& params);

struct MappedBits {
    std::vector<std::uint8_t> alice;
    std::vector<std::uint8_t> bob;
    std::vector<BasisKind> kind;         ///< per bit position
    std::vector<std::int64_t> z_pos;     ///< ciphertext position, -1 for X bits
};

/// Step-6 bit mapping over the matched pairs; the flip rule consumes the
/// click pattern recorded in the valid events.
MappedBits map_bits(std::span<const MatchedPair> matched, std::span<const ValidEvent> valid,
                    const ChannelParams& params);

/// Relative-phase decomposition d_phi = theta + pi * b with theta in [0, pi).
struct PhaseDecomposition {
    double theta = 0;
    std::uint8_t bit = 0;
};

PhaseDecomposition decompose_relative_phase(double phase_i, double phase_j);

/// Fraction of in-order adjacent valid-event pairs whose joint intensity
/// pattern is one of the two bit-carrying Z combinations; the empirical basis
/// matching rate q (about 1/8).
double empirical_match_rate(std::span<const ValidEvent> valid);

struct EstimationReport {
    double q_emp = 0;         ///< valid / total rounds
    double ez_emp = 0;        ///< Z-basis disagreement fraction
    double x_qber_emp = 0;    ///< post-flip X disagreement fraction
    double q_match_emp = 0;   ///< empirical basis matching rate
    double delta_1 = 0;       ///< analytic single-photon bases rate
    double e_x11 = 0;         ///< analytic single-photon phase error rate
    double r_est = 0;         ///< rate from empirical Q, E^Z and analytic Delta1, eX11
    std::uint64_t n_valid = 0;
    std::uint64_t n_matched = 0;
    std::uint64_t n_matched_z = 0;
    std::uint64_t n_matched_x = 0;
    std::uint64_t isolation_count = 0;
    bool aborted = false;
};

struct SimTranscript {
    SimConfig config;
    RoundsSummary summary;
    std::vector<PulseRound> rounds;          ///< only when config.materialize
    std::vector<DetectionEvent> detections;  ///< only when config.materialize
    std::vector<ValidEvent> valid;
    IsolationVerdict isolation;
    BasisAssignment assignment;
    std::vector<MatchedPair> matched;
    MappedBits bits;
    EstimationReport report;
};

EstimationReport estimate_parameters(const SimTranscript& transcript);

/// Steps 1-7 for one ciphertext: simulate, sift, isolation check, basis
/// preparation (n_x = 0 picks the default max(64, 5% of valid)), matching,
/// bit mapping, estimation. A failed isolation check aborts: no bases are
/// prepared and no bits are released.
SimTranscript run_protocol(const SimConfig& config, std::span<const std::uint8_t> ciphertext,
                           std::size_t n_x = 0);

}  // namespace qsdc
