#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hrcc/code.hpp"
#include "hrcc/dual_trellis.hpp"

namespace hrcc {

// Systematic feedback encoder in observer canonical form: v memory cells hold
// the pending partial sums of the check equation. Each step consumes omega-1
// input bits, copies them onto the non-parity streams, and solves the parity
// stream so that the syndrome bit retired this step is zero. The state equals
// the dual trellis boundary state.
class SystematicEncoder {
public:
    explicit SystematicEncoder(const ParityCheckMatrix& code) : code_(code) {
        for (int j = 0; j < code.omega; ++j) taps_[j] = code.taps(j);
    }

    const ParityCheckMatrix& code() const { return code_; }
    int num_states() const { return 1 << code_.v; }

    // inputs: omega-1 bits; outputs: omega bits (parity on code.parity_phase).
    uint32_t step(uint32_t state, const uint8_t* inputs, uint8_t* outputs) const {
        uint32_t tmp = state;
        int r = 0;
        for (int j = 0; j < code_.omega; ++j) {
            if (j == code_.parity_phase) continue;
            uint8_t b = inputs[r++] & 1;
            outputs[j] = b;
            if (b) tmp ^= taps_[j];
        }
        uint8_t parity = tmp & 1;
        outputs[code_.parity_phase] = parity;
        if (parity) tmp ^= taps_[code_.parity_phase];
        return tmp >> 1;
    }

    // Runs whole steps over section-major input bits, appending codeword bits.
    uint32_t run(uint32_t state, std::span<const uint8_t> section_major, BitVec& codeword) const {
        const int rails = code_.omega - 1;
        uint8_t out[32];
        for (size_t k = 0; k + rails <= section_major.size(); k += rails) {
            state = step(state, section_major.data() + k, out);
            codeword.insert(codeword.end(), out, out + code_.omega);
        }
        return state;
    }

    // State map of one all-zero-input step (linear in the state).
    uint32_t zero_input_step(uint32_t state) const {
        uint32_t tmp = state;
        if (tmp & 1) tmp ^= taps_[code_.parity_phase];
        return tmp >> 1;
    }

private:
    ParityCheckMatrix code_;
    uint32_t taps_[32] = {};
};

inline BitVec encode_zt(const SystematicEncoder& enc, const FrameLayout& layout,
                        std::span<const uint8_t> payload, const ZtPatterns& zt,
                        RailPolicy policy) {
    if (layout.mode != Termination::ZT) throw std::invalid_argument("encode_zt: layout is not ZT");
    if (static_cast<int>(payload.size()) != layout.payload_bits())
        throw std::invalid_argument("encode_zt: payload length != K+m");
    BitVec smaj = payload_to_section_major(payload, layout.omega, policy);
    BitVec codeword;
    codeword.reserve(layout.N);
    uint32_t state = enc.run(0, smaj, codeword);
    state = enc.run(state, zt.inputs[state], codeword);
    if (state != 0) throw std::logic_error("encode_zt: termination pattern did not reach zero");
    return codeword;
}

// Images of the state basis vectors under `steps` zero-input steps; lets a
// caller evaluate the linear part of the payload->final-state map cheaply.
inline std::vector<uint32_t> zero_input_state_map(const SystematicEncoder& enc, int steps) {
    const int v = enc.code().v;
    std::vector<uint32_t> cols(v);
    for (int i = 0; i < v; ++i) {
        uint32_t s = uint32_t{1} << i;
        for (int k = 0; k < steps; ++k) s = enc.zero_input_step(s);
        cols[i] = s;
    }
    return cols;
}

inline uint32_t apply_state_map(const std::vector<uint32_t>& cols, uint32_t state) {
    uint32_t out = 0;
    for (size_t i = 0; i < cols.size(); ++i)
        if ((state >> i) & 1) out ^= cols[i];
    return out;
}

struct TbCodeword {
    BitVec codeword;
    uint32_t state;  // shared initial/final encoder state
};

// Tail-biting encoding: the final state must equal the initial state. The
// scan is exhaustive over all 2^v initial states in ascending order; since
// the final state is affine in the initial state, each trial is evaluated
// from the precomputed zero-input state map instead of a full re-encoding.
inline TbCodeword encode_tb(const SystematicEncoder& enc, const FrameLayout& layout,
                            std::span<const uint8_t> payload, RailPolicy policy,
                            const std::vector<uint32_t>* state_map = nullptr) {
    if (layout.mode != Termination::TB) throw std::invalid_argument("encode_tb: layout is not TB");
    if (static_cast<int>(payload.size()) != layout.payload_bits())
        throw std::invalid_argument("encode_tb: payload length != K+m");
    BitVec smaj = payload_to_section_major(payload, layout.omega, policy);

    BitVec scratch;
    scratch.reserve(layout.N);
    const uint32_t from_zero = enc.run(0, smaj, scratch);

    std::vector<uint32_t> local;
    if (!state_map) {
        local = zero_input_state_map(enc, layout.payload_sections);
        state_map = &local;
    }
    for (uint32_t sigma = 0; sigma < static_cast<uint32_t>(enc.num_states()); ++sigma) {
        if ((apply_state_map(*state_map, sigma) ^ from_zero) != sigma) continue;
        if (sigma == 0) return {std::move(scratch), 0};
        BitVec codeword;
        codeword.reserve(layout.N);
        uint32_t end = enc.run(sigma, smaj, codeword);
        if (end != sigma) throw std::logic_error("encode_tb: state map disagrees with encoder");
        return {std::move(codeword), sigma};
    }
    throw NoTailBitingStateError("encode_tb: no initial state satisfies the tail-biting condition");
}

}  // namespace hrcc
