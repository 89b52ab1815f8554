#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsdc/gf2.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

/// Frame geometry: m plaintext bits, l bits after secure coding, n bits after
/// error correction.
struct FrameCodingConfig {
    std::size_t m = 0;
    std::size_t l = 0;
    std::size_t n = 0;
    std::string ecc_id;  ///< registry key, e.g. "repetition-5"
    unsigned r = 0;      ///< repetition factor of the default code

    double ecc_rate() const { return static_cast<double>(l) / static_cast<double>(n); }
    double secure_rate() const { return static_cast<double>(m) / static_cast<double>(n); }

    void validate() const;  ///< throws std::invalid_argument unless m <= l <= n

    static FrameCodingConfig repetition(std::size_t m, std::size_t l, unsigned r);
};

/// Queue of pre-shared secret bits. Consumed bits are never reused.
class SstsPool {
public:
    void add(const BitVec& bits);
    BitVec take(std::size_t count);  ///< throws std::runtime_error on underflow
    std::size_t size() const { return bits_.size(); }
    std::size_t low_water_mark() const { return low_water_; }

private:
    std::deque<std::uint8_t> bits_;
    std::size_t low_water_ = 0;
};

/// Draws n random bits from a RoundRng stream.
BitVec random_bits(std::size_t n, RoundRng& rng);

/// Deterministic expansion of the published randomness G into `total_bits`
/// bits; `salt` distinguishes successive draws of the same G.
BitVec expand_randomness(const BitVec& g, std::size_t total_bits, std::uint64_t salt);

/// The frame's universal hash: an m x l Toeplitz matrix seeded from G (the
/// published l - 1 bits) via expand_randomness. Seeds whose leading m x m
/// submatrix is singular are skipped by bumping the salt, so both sides
/// derive the same matrix from the published G alone.
ToeplitzHash make_frame_hash(const FrameCodingConfig& config, const BitVec& g);

/// Preprocessing step: x = p xor s, then the inverse-hash construction places
/// the l - m local random bits at the trailing positions of y and solves the
/// leading system so that hash(y, g) = x.
BitVec secure_encode(const BitVec& p, const BitVec& s, const BitVec& g,
                     const BitVec& l_pad, const FrameCodingConfig& config);

/// UHF step: p = hash(y, g) xor s.
BitVec secure_decode(const BitVec& y, const BitVec& g, const BitVec& s,
                     const FrameCodingConfig& config);

/// Appends `amount` (<= l - m) bits distilled from the free positions of y to
/// the pool and returns them.
BitVec distill_ssts(const BitVec& y, std::size_t amount, const FrameCodingConfig& config,
                    SstsPool& pool);

/// Channel symbol: 0, 1, or erased.
using Symbol = std::int8_t;
inline constexpr Symbol kErased = -1;

struct EccDecodeResult {
    BitVec data;
    bool ok = false;
};

/// Pluggable error-correcting code. Decode failure is a value, not a crash.
class ErrorCorrectingCode {
public:
    virtual ~ErrorCorrectingCode() = default;
    virtual std::string name() const = 0;
    virtual std::size_t message_bits() const = 0;
    virtual std::size_t coded_bits() const = 0;
    /// Errors guaranteed corrected in any block when nothing is erased.
    virtual std::size_t correction_radius() const = 0;
    virtual BitVec encode(const BitVec& y) const = 0;
    virtual EccDecodeResult decode(std::span<const Symbol> z) const = 0;
};

/// Rate-1/r repetition code; the decoder takes a majority among the received
/// (non-erased) symbols of each block and fails a block on emptiness or tie.
class RepetitionCode final : public ErrorCorrectingCode {
public:
    RepetitionCode(std::size_t message_bits, unsigned r);
    std::string name() const override;
    std::size_t message_bits() const override { return l_; }
    std::size_t coded_bits() const override { return l_ * r_; }
    std::size_t correction_radius() const override { return (r_ - 1) / 2; }
    BitVec encode(const BitVec& y) const override;
    EccDecodeResult decode(std::span<const Symbol> z) const override;

private:
    std::size_t l_;
    unsigned r_;
};

/// Instantiates the code named by config.ecc_id ("repetition-<r>").
std::unique_ptr<ErrorCorrectingCode> make_ecc(const FrameCodingConfig& config);

/// c = z xor l_mask (an involution).
BitVec mask(const BitVec& z, const BitVec& l_mask);

/// Restores z at the published positions; everything else is an erasure.
std::vector<Symbol> unmask(const BitVec& c, const BitVec& l_mask,
                           std::span<const std::uint32_t> published_positions);

struct RateConditionVerdict {
    bool pass = false;
    double ecc_margin = 0;     ///< i_ab - l/n
    double secure_margin = 0;  ///< r_prev - m/n
};

/// Pass iff l/n <= i_ab and m/n <= r_prev.
RateConditionVerdict check_rate_conditions(const FrameCodingConfig& config, double i_ab,
                                           double r_prev);

/// Everything produced while encoding one frame.
struct CodedFrame {
    FrameCodingConfig config;
    BitVec p;       ///< plaintext
    BitVec s;       ///< SSTS slice
    BitVec x;       ///< p xor s
    BitVec g;       ///< published randomness, l - 1 bits
    BitVec l_pad;   ///< local randomness pinned into y, l - m bits
    BitVec y;       ///< inverse-hash preimage, l bits
    BitVec z;       ///< after error correction coding, n bits
    BitVec l_mask;  ///< masking pad, n bits
    BitVec c;       ///< final ciphertext, n bits
};

/// Full Alice-side encode; consumes m bits from the pool and draws all
/// randomness from rng.
CodedFrame encode_frame(const BitVec& plaintext, SstsPool& pool,
                        const FrameCodingConfig& config, RoundRng& rng);

struct FrameDecodeResult {
    BitVec plaintext;
    BitVec y;
    BitVec distilled;
    bool ok = false;
};

/// Full Bob-side decode from post-unmask symbols (erasures included).
/// Distills `distill_amount` bits into the pool on success.
FrameDecodeResult decode_frame(std::span<const Symbol> z_symbols, const BitVec& g,
                               const BitVec& s, const FrameCodingConfig& config,
                               std::size_t distill_amount, SstsPool& pool);

/// Binary frame file: magic "QSDC" | version 1 | m, l, n as 32-bit big-endian
/// | c bits padded to bytes | g bits padded to bytes.
void write_frame_file(std::ostream& out, const FrameCodingConfig& config, const BitVec& c,
                      const BitVec& g);

struct FrameFile {
    FrameCodingConfig config;
    BitVec c;
    BitVec g;
};

FrameFile read_frame_file(std::istream& in);  ///< throws std::runtime_error on bad data

/// Text hex dump of the same payload, one field per line.
std::string frame_hex_dump(const FrameCodingConfig& config, const BitVec& c, const BitVec& g);

}  // namespace qsdc
