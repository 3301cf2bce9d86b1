#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csb/circuit.hpp"

namespace csb {

/// Measured decay curve <O>_L for L = 0..L_max. A paired-circuit scheme sums
/// per-circuit probabilities, so values live in [0, summed_components].
struct Signal {
    std::vector<double> values;
    std::uint64_t shots_per_point = 0; // 0 = exact probabilities
    int summed_components = 1;

    void validate() const;
};

struct Mode {
    cd z; // g e^{i lambda}
    cd c; // signal coefficient
};

/// Modes extracted from a signal, sorted by |c| descending. Estimates with
/// |z| > 1 + 0.05 are discarded as spurious; values in (1, 1.05] are kept for
/// diagnostics and clipped to 1 only inside the fidelity estimators.
struct ModeSet {
    std::vector<Mode> modes;
    double residual = 0.0; // RMS reconstruction error
    std::vector<double> singular_values;
    int retained = 0;
    std::string diagnostic;

    bool empty() const { return modes.empty(); }
};

inline constexpr double kUnitCircleTol = 0.05;

/// Matrix pencil estimate with pencil parameter P = floor(len/2) and SVD
/// model selection: keep singular values above sv_threshold * sigma_0, capped
/// at max_modes; coefficients from the least-squares Vandermonde fit.
ModeSet estimate_modes(const Signal& s, int max_modes = 4, double sv_threshold = 0.05);

/// RMS of s_L - sum_k c_k z_k^L.
double reconstruct_residual(const Signal& s, const ModeSet& m);

} // namespace csb
