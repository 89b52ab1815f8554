#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qsdc {

/// Packed bit vector over GF(2).
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static BitVec from_bits(std::span<const std::uint8_t> bits);

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= mask;
        else words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& other);
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
    friend bool operator==(const BitVec& a, const BitVec& b) = default;

    /// Parity of the AND with another vector of the same length.
    bool dot(const BitVec& other) const;

    std::vector<std::uint8_t> to_bits() const;
    std::span<const std::uint64_t> words() const { return words_; }

    /// Appends the contents of `other`.
    void append(const BitVec& other);

    /// The slice [begin, begin + count).
    BitVec slice(std::size_t begin, std::size_t count) const;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;

    void clear_tail();
};

/// Toeplitz matrix over GF(2) of shape m x l, parameterized by l + m - 1 seed
/// bits: H[r][c] = seed[(l - 1) + r - c].
class ToeplitzHash {
public:
    ToeplitzHash(std::size_t m, std::size_t l, const BitVec& seed);

    std::size_t output_bits() const { return m_; }
    std::size_t input_bits() const { return l_; }

    /// x = H y, length m.
    BitVec apply(const BitVec& y) const;

    /// Finds y with H y = x, where y[m..l-1] is pinned to free_bits (length
    /// l - m) and the leading m positions are solved by GF(2) elimination.
    /// Returns nullopt when the leading m x m submatrix is singular.
    std::optional<BitVec> solve(const BitVec& x, const BitVec& free_bits) const;

private:
    std::size_t m_, l_;
    std::vector<BitVec> rows_;
};

}  // namespace qsdc
