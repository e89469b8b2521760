#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hrcc/bits.hpp"
#include "hrcc/gf2.hpp"

namespace hrcc {

// Domain failures that a caller can reasonably handle (vs. programming errors,
// which use std::invalid_argument / std::logic_error).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoTailBitingStateError : DomainError {
    using DomainError::DomainError;
};
struct InsufficientThresholdError : DomainError {
    using DomainError::DomainError;
};

enum class Termination { ZT, TB };

inline std::string to_string(Termination t) { return t == Termination::ZT ? "zt" : "tb"; }
inline Termination termination_from_string(std::string_view s) {
    if (s == "zt" || s == "ZT") return Termination::ZT;
    if (s == "tb" || s == "TB") return Termination::TB;
    throw std::invalid_argument("termination_from_string: expected zt or tb");
}

// How consecutive payload bits are distributed over the omega-1 input rails.
//   Stepwise:  step k consumes payload bits (omega-1)k .. (omega-1)(k+1)-1.
//   Blockwise: rail r gets the r-th contiguous block of (K+m)/(omega-1) bits.
enum class RailPolicy { Stepwise, Blockwise };

inline std::string to_string(RailPolicy p) { return p == RailPolicy::Stepwise ? "stepwise" : "blockwise"; }
inline RailPolicy rail_policy_from_string(std::string_view s) {
    if (s == "stepwise") return RailPolicy::Stepwise;
    if (s == "blockwise") return RailPolicy::Blockwise;
    throw std::invalid_argument("rail_policy_from_string: expected stepwise or blockwise");
}

// Parity-check description of an (omega, omega-1, v) systematic feedback
// convolutional code: one degree-<=v polynomial per output stream. Stream i's
// polynomial sits at h[i]; octal listings follow the conventional order
// (h^(omega-1), ..., h^(0)), so parsing reverses them.
struct ParityCheckMatrix {
    int omega = 0;
    int v = 0;
    std::vector<BinaryPolynomial> h;  // indexed by stream
    int lambda = -1;                  // highest stream with an instant response (h0 = 1)
    int parity_phase = -1;            // lowest stream with an instant response

    static ParityCheckMatrix from_polys(std::vector<BinaryPolynomial> streams_high_to_low, int v) {
        ParityCheckMatrix m;
        m.omega = static_cast<int>(streams_high_to_low.size());
        m.v = v;
        if (m.omega < 2) throw std::invalid_argument("ParityCheckMatrix: need at least two streams");
        if (v < 1 || v > 16) throw std::invalid_argument("ParityCheckMatrix: v out of range [1,16]");
        m.h.assign(streams_high_to_low.rbegin(), streams_high_to_low.rend());
        bool deg_v = false;
        for (int i = 0; i < m.omega; ++i) {
            if (m.h[i].is_zero())
                throw std::invalid_argument(
                    "ParityCheckMatrix: stream " + std::to_string(i) +
                    " has a zero polynomial (its bits would never enter the check equation)");
            if (m.h[i].degree() == v) deg_v = true;
            if (m.h[i].coeff(0)) {
                m.lambda = i;  // ascending scan leaves the max behind
                if (m.parity_phase < 0) m.parity_phase = i;
            }
        }
        if (!deg_v) throw std::invalid_argument("ParityCheckMatrix: no stream of degree exactly v");
        if (m.lambda < 0) throw std::invalid_argument("ParityCheckMatrix: no stream with instant response");
        return m;
    }

    static ParityCheckMatrix from_octal(const std::vector<std::string>& octal_high_to_low, int v) {
        std::vector<BinaryPolynomial> polys;
        polys.reserve(octal_high_to_low.size());
        for (const auto& s : octal_high_to_low) polys.push_back(parse_octal(s, v));
        return from_polys(std::move(polys), v);
    }

    // "(17,15,13)" or "17,15,13".
    static ParityCheckMatrix from_text(std::string_view text, int v) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : text) {
            if (c == '(' || c == ')' || c == ' ') continue;
            if (c == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) parts.push_back(cur);
        if (parts.empty()) throw std::invalid_argument("ParityCheckMatrix: empty stream list");
        return from_octal(parts, v);
    }

    std::string to_text() const {
        std::string s = "(";
        for (int i = omega - 1; i >= 0; --i) {
            s += format_octal(h[i]);
            if (i) s += ",";
        }
        return s + ")";
    }

    uint32_t taps(int stream) const { return h[stream].coeffs; }
};

inline int max_instant_response(const ParityCheckMatrix& m) { return m.lambda; }

// Block structure of one frame: K message bits + m CRC bits spread over
// (omega-1) rails, optionally followed by zero-termination sections.
struct FrameLayout {
    int K = 0;
    int m = 0;
    int omega = 0;
    int v = 0;
    Termination mode = Termination::ZT;
    int payload_sections = 0;  // (K+m)/(omega-1)
    int term_sections = 0;     // ceil(v/(omega-1)) for ZT, 0 for TB
    int N = 0;

    static FrameLayout make(int K, int m, const ParityCheckMatrix& code, Termination mode) {
        FrameLayout f;
        f.K = K;
        f.m = m;
        f.omega = code.omega;
        f.v = code.v;
        f.mode = mode;
        if (K < 1) throw std::invalid_argument("FrameLayout: K must be positive");
        if (m < 0) throw std::invalid_argument("FrameLayout: m must be non-negative");
        const int rails = f.omega - 1;
        if ((K + m) % rails != 0)
            throw std::invalid_argument("FrameLayout: K+m must be divisible by omega-1");
        f.payload_sections = (K + m) / rails;
        f.term_sections = mode == Termination::ZT ? (code.v + rails - 1) / rails : 0;
        f.N = (f.payload_sections + f.term_sections) * f.omega;
        return f;
    }

    int payload_bits() const { return K + m; }
    int sections() const { return payload_sections + term_sections; }
    double rate() const { return static_cast<double>(K) / N; }
};

// Payload split into per-step rail tuples.
inline std::vector<BitVec> map_rails(std::span<const uint8_t> payload, int omega, RailPolicy policy) {
    const int rails = omega - 1;
    if (rails < 1 || payload.size() % rails != 0)
        throw std::invalid_argument("map_rails: payload length not divisible by omega-1");
    const int steps = static_cast<int>(payload.size()) / rails;
    std::vector<BitVec> out(steps, BitVec(rails));
    for (int k = 0; k < steps; ++k)
        for (int r = 0; r < rails; ++r)
            out[k][r] = policy == RailPolicy::Stepwise ? payload[k * rails + r]
                                                       : payload[r * steps + k];
    return out;
}

// Flat section-major view (step 0 rails, step 1 rails, ...) of the payload.
inline BitVec payload_to_section_major(std::span<const uint8_t> payload, int omega, RailPolicy policy) {
    const int rails = omega - 1;
    if (payload.size() % rails != 0)
        throw std::invalid_argument("payload_to_section_major: length not divisible by omega-1");
    if (policy == RailPolicy::Stepwise) return BitVec(payload.begin(), payload.end());
    const int steps = static_cast<int>(payload.size()) / rails;
    BitVec out(payload.size());
    for (int k = 0; k < steps; ++k)
        for (int r = 0; r < rails; ++r)
            out[k * rails + r] = payload[r * steps + k];
    return out;
}

inline BitVec section_major_to_payload(std::span<const uint8_t> smaj, int omega, RailPolicy policy) {
    const int rails = omega - 1;
    if (smaj.size() % rails != 0)
        throw std::invalid_argument("section_major_to_payload: length not divisible by omega-1");
    if (policy == RailPolicy::Stepwise) return BitVec(smaj.begin(), smaj.end());
    const int steps = static_cast<int>(smaj.size()) / rails;
    BitVec out(smaj.size());
    for (int k = 0; k < steps; ++k)
        for (int r = 0; r < rails; ++r)
            out[r * steps + k] = smaj[k * rails + r];
    return out;
}

// For each codeword position, the payload bit index carried there (-1 for the
// parity stream and for termination sections). Inverts encoding's placement.
inline std::vector<int> make_payload_map(const ParityCheckMatrix& code, const FrameLayout& layout,
                                         RailPolicy policy) {
    std::vector<int> pos(layout.N, -1);
    const int rails = code.omega - 1;
    int rail_of_phase[32];
    int r = 0;
    for (int j = 0; j < code.omega; ++j)
        if (j != code.parity_phase) rail_of_phase[j] = r++;
    for (int k = 0; k < layout.payload_sections; ++k) {
        for (int j = 0; j < code.omega; ++j) {
            if (j == code.parity_phase) continue;
            const int rail = rail_of_phase[j];
            const int payload_idx = policy == RailPolicy::Stepwise
                                        ? k * rails + rail
                                        : rail * layout.payload_sections + k;
            pos[k * code.omega + j] = payload_idx;
        }
    }
    return pos;
}

}  // namespace hrcc
