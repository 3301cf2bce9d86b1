#pragma once

#include <optional>
#include <string>
#include <vector>

#include "csb/circuit.hpp"
#include "csb/qcore.hpp"
#include "csb/rng.hpp"

namespace csb {

/// Width cap for exact initial-state synthesis and dense eigendecomposition.
inline constexpr int kSynthesisWidthCap = 3;

struct IsingParams {
    int n = 2;
    std::vector<double> fields;    // h_i, size n
    std::vector<double> couplings; // J_{i,i+1}; size n on a ring, n-1 on a chain
    double dt = 1.0;
    bool ring = true;
};

Circuit build_rz_target(double theta);
Circuit build_fsim_target(double theta, double phi);
/// Standard 6-CNOT, 7-T fragment; composed unitary equals Toffoli.
Circuit build_toffoli_target();
/// One Trotter layer of H = sum h_i Z_i + sum J Z_i Z_{i+1}; H is diagonal so
/// the layer equals exp(-i H dt) exactly.
Circuit build_ising_target(const IsingParams& p);

/// Classical Ising energy of basis state x (bit 1 -> spin -1).
double ising_energy(const IsingParams& p, std::size_t x);

/// Circuit mapping |0..0> to (|x> + |y>)/sqrt(2); plain basis-state
/// preparation when x == y.
Circuit prepare_pair_state(const std::string& x, const std::string& y);

/// Paper's degeneracy-lifting layer for the Toffoli fragment:
/// R_Z(pi/2) (x) R_Z(2pi/3) (x) R_X(4pi/5).
std::vector<Gate> toffoli_lift_layer();

/// Append a single-qubit layer to the target (merged into the final layer
/// when slots are free). The varied spectrum must be recomputed downstream.
Circuit lift_degeneracy(const Circuit& target, const std::vector<Gate>& layer);

/// circ repeated n_rep times as a single target unit.
Circuit repeat_target(const Circuit& circ, int n_rep);

/// n_r Pauli-frame randomizations: a uniformly random supported Pauli layer
/// before every hard cycle, exact corrections merged into adjacent easy
/// layers. Each output composes to the same unitary as circ (global phase).
std::vector<Circuit> randomized_compile(const Circuit& circ, int n_r, Rng& rng);

/// Exact synthesis of an arbitrary state on up to kSynthesisWidthCap qubits
/// (multiplexed-rotation disentangling).
Circuit synthesize_state(const Vec& target_state, int n);

/// Eigen-structure of a target circuit: computational-basis labels for
/// diagonal circuits at any width, dense eigenvectors otherwise (small n).
struct TargetSpectrum {
    bool diagonal = false;
    int width = 0;
    std::vector<double> phases;             // ascending, wrapped to (-pi, pi]
    std::vector<std::size_t> basis_index;   // diagonal path: basis label per slot
    Mat vectors;                            // dense path: column per slot

    Eigen::Index dim() const { return Eigen::Index(1) << width; }
    Vec eigenvector(Eigen::Index slot) const;
};

TargetSpectrum spectrum_of(const Circuit& target, int dense_cap = kSynthesisWidthCap);

/// Two-eigenvector superposition (or single eigenstate when a == b) with its
/// preparation circuit.
struct InitialStateSpec {
    Eigen::Index a = 0;
    Eigen::Index b = 0;
    cd ca{1.0, 0.0};
    cd cb{0.0, 0.0};
    Circuit prep;
    bool is_pair() const { return a != b; }
};

InitialStateSpec make_pair_spec(const TargetSpectrum& s, Eigen::Index a, Eigen::Index b);
InitialStateSpec make_single_spec(const TargetSpectrum& s, Eigen::Index a);

} // namespace csb
