#include "qsdc/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace qsdc {

void BitVec::clear_tail() {
    const std::size_t r = n_ & 63;
    if (r != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << r) - 1;
}

BitVec BitVec::from_bits(std::span<const std::uint8_t> bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) v.set(i, true);
    return v;
}

BitVec& BitVec::operator^=(const BitVec& other) {
    if (other.n_ != n_) throw std::invalid_argument("BitVec: length mismatch in xor");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

bool BitVec::dot(const BitVec& other) const {
    if (other.n_ != n_) throw std::invalid_argument("BitVec: length mismatch in dot");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
        acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1;
}

std::vector<std::uint8_t> BitVec::to_bits() const {
    std::vector<std::uint8_t> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = get(i) ? 1 : 0;
    return out;
}

void BitVec::append(const BitVec& other) {
    const std::size_t base = n_;
    n_ += other.n_;
    words_.resize((n_ + 63) / 64, 0);
    for (std::size_t i = 0; i < other.n_; ++i)
        if (other.get(i)) set(base + i, true);
}

BitVec BitVec::slice(std::size_t begin, std::size_t count) const {
    if (begin + count > n_) throw std::out_of_range("BitVec: slice out of range");
    BitVec out(count);
    for (std::size_t i = 0; i < count; ++i)
        if (get(begin + i)) out.set(i, true);
    return out;
}

ToeplitzHash::ToeplitzHash(std::size_t m, std::size_t l, const BitVec& seed)
    : m_(m), l_(l) {
    if (m == 0 || l == 0 || m > l)
        throw std::invalid_argument("ToeplitzHash: need 0 < m <= l");
    if (seed.size() != l + m - 1)
        throw std::invalid_argument("ToeplitzHash: seed must have l + m - 1 bits");
    rows_.reserve(m);
    for (std::size_t r = 0; r < m; ++r) {
        BitVec row(l);
        for (std::size_t c = 0; c < l; ++c)
            if (seed.get(l - 1 + r - c)) row.set(c, true);
        rows_.push_back(std::move(row));
    }
}

BitVec ToeplitzHash::apply(const BitVec& y) const {
    if (y.size() != l_) throw std::invalid_argument("ToeplitzHash: input must have l bits");
    BitVec x(m_);
    for (std::size_t r = 0; r < m_; ++r)
        if (rows_[r].dot(y)) x.set(r, true);
    return x;
}

std::optional<BitVec> ToeplitzHash::solve(const BitVec& x, const BitVec& free_bits) const {
    if (x.size() != m_) throw std::invalid_argument("ToeplitzHash: rhs must have m bits");
    if (free_bits.size() != l_ - m_)
        throw std::invalid_argument("ToeplitzHash: free part must have l - m bits");

    // rhs = x ^ H * [0 | free_bits]
    BitVec padded(l_);
    for (std::size_t i = 0; i < free_bits.size(); ++i)
        if (free_bits.get(i)) padded.set(m_ + i, true);
    BitVec rhs = apply(padded);
    rhs ^= x;

    // Gauss-Jordan on the leading m x m submatrix.
    std::vector<BitVec> a;
    a.reserve(m_);
    for (std::size_t r = 0; r < m_; ++r) a.push_back(rows_[r].slice(0, m_));
    std::vector<std::uint8_t> b = rhs.to_bits();

    for (std::size_t col = 0; col < m_; ++col) {
        std::size_t pivot = col;
        while (pivot < m_ && !a[pivot].get(col)) ++pivot;
        if (pivot == m_) return std::nullopt;  // singular
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = 0; r < m_; ++r) {
            if (r != col && a[r].get(col)) {
                a[r] ^= a[col];
                b[r] ^= b[col];
            }
        }
    }

    BitVec y(l_);
    for (std::size_t i = 0; i < m_; ++i)
        if (b[i]) y.set(i, true);
    for (std::size_t i = 0; i < free_bits.size(); ++i)
        if (free_bits.get(i)) y.set(m_ + i, true);
    return y;
}

}  // namespace qsdc
