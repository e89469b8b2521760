#pragma once

#include <cmath>
#include <stdexcept>

#include "hrcc/code.hpp"

namespace hrcc {

// Closed-form decoding-complexity model in units of ACS-equivalent operations.
// c_ssv covers the forward sweep plus the rank-1 traceback, c_trace the extra
// tracebacks of ranks 2..L, and c_list the ordered-list maintenance; the
// expected insertion count is estimated by its mode-specific upper bound
// (K+m)E[L], plus 2^v - 1 for tail-biting frames.
struct ComplexityReport {
    double c_ssv = 0.0;
    double c_trace = 0.0;
    double c_list = 0.0;
    double c_slvd = 0.0;
    int K = 0, m = 0, v = 0;
    double EL = 1.0;
    double EI = 0.0;
    Termination mode = Termination::ZT;
    double c1 = 1.0, c2 = 1.0;
};

inline ComplexityReport complexity_estimate(int K, int m, int v, double EL, Termination mode,
                                            double c1 = 1.0, double c2 = 1.0,
                                            double log_base = 2.0) {
    if (EL < 1.0) throw std::invalid_argument("complexity_estimate: EL must be >= 1");
    if (K < 1 || m < 0 || v < 1) throw std::invalid_argument("complexity_estimate: bad dimensions");
    ComplexityReport r;
    r.K = K;
    r.m = m;
    r.v = v;
    r.EL = EL;
    r.mode = mode;
    r.c1 = c1;
    r.c2 = c2;
    const double n = K + m;
    const double two_v1 = std::ldexp(1.0, v + 1);  // 2^(v+1)
    const double two_v = std::ldexp(1.0, v);
    if (mode == Termination::ZT) {
        const double traceback = 2.0 * (n + v) + 1.5 * n;
        r.c_ssv = (two_v1 - 2.0) + 1.5 * (two_v1 - 2.0) + 1.5 * (n - v) * two_v1 + c1 * traceback;
        r.c_trace = c1 * (EL - 1.0) * traceback;
        r.EI = n * EL;
    } else {
        r.c_ssv = 1.5 * n * two_v1 + two_v + 3.5 * c1 * n;
        r.c_trace = 3.5 * c1 * (EL - 1.0) * n;
        r.EI = n * EL + two_v - 1.0;
    }
    r.c_list = r.EI > 1.0 ? c2 * r.EI * (std::log2(r.EI) / std::log2(log_base)) : 0.0;
    r.c_slvd = r.c_ssv + r.c_trace + r.c_list;
    return r;
}

}  // namespace hrcc
