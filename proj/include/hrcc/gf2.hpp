#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hrcc/bits.hpp"

namespace hrcc {

// Polynomial over GF(2), coefficient of x^i stored in bit i. Degrees up to 31
// fit; the toolkit only ever needs <= 16.
struct BinaryPolynomial {
    uint32_t coeffs = 0;

    bool is_zero() const { return coeffs == 0; }
    int degree() const { return coeffs ? std::bit_width(coeffs) - 1 : 0; }
    bool coeff(int i) const { return (coeffs >> i) & 1; }

    friend bool operator==(const BinaryPolynomial&, const BinaryPolynomial&) = default;
};

// Octal text -> polynomial of degree at most v. "17" with v=3 is x^3+x^2+x+1.
inline BinaryPolynomial parse_octal(std::string_view text, int v) {
    if (v < 0 || v > 16) throw std::invalid_argument("parse_octal: v out of range");
    if (text.empty()) throw std::invalid_argument("parse_octal: empty string");
    uint64_t value = 0;
    for (char c : text) {
        if (c < '0' || c > '7') throw std::invalid_argument("parse_octal: bad octal digit");
        value = value * 8 + static_cast<uint64_t>(c - '0');
        if (value >= (uint64_t{1} << 32)) throw std::invalid_argument("parse_octal: value too large");
    }
    if (value >= (uint64_t{1} << (v + 1)))
        throw std::invalid_argument("parse_octal: value needs more than v+1 coefficient bits");
    return BinaryPolynomial{static_cast<uint32_t>(value)};
}

inline std::string format_octal(BinaryPolynomial p) {
    std::ostringstream os;
    os << std::oct << p.coeffs;
    return os.str();
}

// CRC polynomial p(x) = 1 + p1 x + ... + x^m. Both end coefficients pinned.
struct CrcPolynomial {
    uint32_t coeffs = 0;
    int m = 0;

    BinaryPolynomial poly() const { return BinaryPolynomial{coeffs}; }
    friend bool operator==(const CrcPolynomial&, const CrcPolynomial&) = default;
};

// Hex text (optional 0x prefix) -> CRC of exactly degree m.
inline CrcPolynomial parse_hex_crc(std::string_view text, int m) {
    if (m < 1 || m > 16) throw std::invalid_argument("parse_hex_crc: m out of range");
    if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
    if (text.empty()) throw std::invalid_argument("parse_hex_crc: empty string");
    uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("parse_hex_crc: bad hex string");
    if (value >= (uint32_t{1} << (m + 1)))
        throw std::invalid_argument("parse_hex_crc: value wider than m+1 bits");
    if (!(value & 1)) throw std::invalid_argument("parse_hex_crc: constant coefficient must be 1");
    if (!((value >> m) & 1)) throw std::invalid_argument("parse_hex_crc: degree-m coefficient must be 1");
    return CrcPolynomial{value, m};
}

inline std::string format_hex_crc(CrcPolynomial p) {
    std::ostringstream os;
    os << std::hex << std::uppercase << p.coeffs;
    return "0x" + os.str();
}

// Remainder of a bit sequence (highest-order coefficient first) modulo a
// divisor polynomial; result has divisor.degree() bits, highest first.
inline BitVec poly_mod(std::span<const uint8_t> dividend, BinaryPolynomial divisor) {
    if (divisor.is_zero()) throw std::invalid_argument("poly_mod: zero divisor");
    const int d = divisor.degree();
    uint32_t rem = 0;
    for (uint8_t bit : dividend) {
        rem = (rem << 1) | (bit & 1);
        if ((rem >> d) & 1) rem ^= divisor.coeffs;
    }
    BitVec out(d);
    for (int i = 0; i < d; ++i) out[i] = (rem >> (d - 1 - i)) & 1;
    return out;
}

// Systematic CRC encoding: message followed by m parity bits, so the whole
// sequence read as a polynomial is divisible by p.
inline BitVec crc_encode(std::span<const uint8_t> message, CrcPolynomial p) {
    const int d = p.m;
    uint32_t rem = 0;
    for (uint8_t bit : message) {
        rem = (rem << 1) | (bit & 1);
        if ((rem >> d) & 1) rem ^= p.coeffs;
    }
    for (int i = 0; i < d; ++i) {
        rem <<= 1;
        if ((rem >> d) & 1) rem ^= p.coeffs;
    }
    BitVec out(message.begin(), message.end());
    for (int i = 0; i < d; ++i) out.push_back((rem >> (d - 1 - i)) & 1);
    return out;
}

inline bool crc_check(std::span<const uint8_t> sequence, CrcPolynomial p) {
    if (sequence.size() <= static_cast<size_t>(p.m))
        throw std::invalid_argument("crc_check: sequence not longer than m");
    uint32_t rem = 0;
    for (uint8_t bit : sequence) {
        rem = (rem << 1) | (bit & 1);
        if ((rem >> p.m) & 1) rem ^= p.coeffs;
    }
    return rem == 0;
}

// Divisibility test on a packed payload (same highest-first reading).
inline bool crc_divides(const PackedWord& payload, CrcPolynomial p) {
    uint32_t rem = 0;
    for (int i = 0; i < payload.nbits; ++i) {
        rem = (rem << 1) | static_cast<uint32_t>(payload.get(i));
        if ((rem >> p.m) & 1) rem ^= p.coeffs;
    }
    return rem == 0;
}

}  // namespace hrcc
