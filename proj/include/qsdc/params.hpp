#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace qsdc {

/// All physical and protocol constants of the channel model.
///
/// Distances are total Alice--Bob distances in km; each arm (sender to the
/// middle node) spans half of it, so the one-arm transmittance carries the
/// dB/20 exponent while the end-to-end channel carries dB/10.
struct ChannelParams {
    double eta_d = 0.7;     ///< detector efficiency, (0, 1]
    double zeta = 0.2;      ///< fiber attenuation, dB/km, >= 0
    double p_d = 2e-7;      ///< dark count probability per detector per round, [0, 0.5)
    double e_0 = 0.5;       ///< background error rate, [0, 1]
    double delta = 0.02;    ///< misalignment, [0, 1]
    double mu = 0.08;       ///< signal intensity (mean photon number), > 0
    double nu = 0.0;        ///< decoy intensity, [0, mu)
    double f_ec = 1.1;      ///< error-correction inefficiency, >= 1
    std::uint64_t T = 1000;              ///< maximum event interval, rounds, >= 1
    std::uint64_t lambda_threshold = 10; ///< max count of isolated events
    std::uint32_t phase_slices = 16;     ///< M, number of phase slices, even, >= 2

    /// Throws std::invalid_argument on any violated field invariant.
    void validate() const;
};

/// Parses the flat `key = value` config format. Keys are exactly the
/// ChannelParams field names; unknown keys are an error. Blank lines and
/// lines starting with '#' are ignored. Missing keys keep their defaults.
ChannelParams parse_config(std::istream& in);

/// Loads and validates a config file. Throws std::runtime_error if the file
/// cannot be opened, std::invalid_argument on parse/validation failure.
ChannelParams load_config(const std::string& path);

/// Serializes params in the same `key = value` format parse_config accepts.
std::string format_config(const ChannelParams& params);

}  // namespace qsdc
