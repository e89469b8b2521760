#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hrcc {

// Bit sequences are kept as one byte per bit (values 0/1) for the public API;
// index 0 is the first bit on the wire and, when a sequence is read as a
// polynomial, the highest-order coefficient.
using BitVec = std::vector<uint8_t>;

inline int weight(std::span<const uint8_t> bits) {
    int w = 0;
    for (uint8_t b : bits) w += b & 1;
    return w;
}

inline BitVec xor_bits(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
    BitVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = (a[i] ^ b[i]) & 1;
    return out;
}

inline std::string to_string(std::span<const uint8_t> bits) {
    std::string s;
    s.reserve(bits.size());
    for (uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline BitVec bits_from_string(std::string_view s) {
    BitVec out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '0') out.push_back(0);
        else if (c == '1') out.push_back(1);
        else if (c == ' ' || c == '_') continue;
        else throw std::invalid_argument("bits_from_string: bad character");
    }
    return out;
}

// Fixed-capacity packed bit word used on hot paths (error-event storage,
// low-weight path reconstruction, divisibility scans). Bit index == sequence
// position, same convention as BitVec.
struct PackedWord {
    static constexpr int kCapacity = 256;
    std::array<uint64_t, 4> w{};
    uint16_t nbits = 0;

    static PackedWord from_bits(std::span<const uint8_t> bits) {
        if (bits.size() > kCapacity) throw std::length_error("PackedWord: too many bits");
        PackedWord p;
        p.nbits = static_cast<uint16_t>(bits.size());
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i] & 1) p.w[i >> 6] |= uint64_t{1} << (i & 63);
        return p;
    }

    bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) w[i >> 6] |= m; else w[i >> 6] &= ~m;
    }
    void flip(int i) { w[i >> 6] ^= uint64_t{1} << (i & 63); }

    int popcount() const {
        int c = 0;
        for (uint64_t x : w) c += __builtin_popcountll(x);
        return c;
    }
    bool any() const { return (w[0] | w[1] | w[2] | w[3]) != 0; }

    BitVec to_bits() const {
        BitVec out(nbits);
        for (int i = 0; i < nbits; ++i) out[i] = get(i);
        return out;
    }

    // Cyclic left rotation by k positions: bit at position i moves to
    // position (i - k) mod nbits, i.e. the sequence advances by k.
    PackedWord rotated_left(int k) const {
        PackedWord r;
        r.nbits = nbits;
        if (nbits == 0) return r;
        k %= nbits;
        if (k < 0) k += nbits;
        for (int i = 0; i < nbits; ++i)
            if (get((i + k) % nbits)) r.set(i, true);
        return r;
    }

    friend bool operator==(const PackedWord& a, const PackedWord& b) {
        return a.nbits == b.nbits && a.w == b.w;
    }
    friend bool operator<(const PackedWord& a, const PackedWord& b) {
        if (a.nbits != b.nbits) return a.nbits < b.nbits;
        for (int i = 3; i >= 0; --i)
            if (a.w[i] != b.w[i]) return a.w[i] < b.w[i];
        return false;
    }
};

struct PackedWordHash {
    size_t operator()(const PackedWord& p) const {
        uint64_t h = 0x9e3779b97f4a7c15ull ^ p.nbits;
        for (uint64_t x : p.w) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return static_cast<size_t>(h);
    }
};

}  // namespace hrcc
