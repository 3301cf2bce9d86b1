#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csb/errors.hpp"

namespace csb {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum class GateKind {
    Id,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    RX,
    RY,
    RZ,
    U1Q, // generic single-qubit unitary (payload matrix)
    CX,
    CZ,
    ZZ,   // exp(-i angle/2 Z@Z)
    Fsim, // iswap angle theta, controlled phase angle phi
};

const char* gate_name(GateKind kind);

/// One gate instance. Qubit order is significant for CX (control, target);
/// the payload matrix is used only by U1Q.
struct Gate {
    GateKind kind = GateKind::Id;
    std::vector<int> qubits;
    std::vector<double> params;
    Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Identity();
    bool benchmarked = false; // subject to the rotation-overshoot noise term

    int arity() const { return static_cast<int>(qubits.size()); }
};

Gate make_gate(GateKind kind, std::vector<int> qubits, std::vector<double> params = {});
Gate make_u1q(int qubit, const Eigen::Matrix2cd& u);

/// Unitary of the gate on its own qubits (2x2 or 4x4), first listed qubit
/// being the most significant tensor factor.
Mat gate_matrix(const Gate& g);

/// True if the gate is diagonal in the computational basis.
bool gate_is_diagonal(const Gate& g);

/// Phases of a diagonal gate: gate == diag(exp(i*phase_k)).
std::vector<double> gate_diagonal_phases(const Gate& g);

/// Ordered layers of gates. A layer is "easy" when every gate is single-qubit
/// and "hard" when it holds multi-qubit gates only; mixed layers are rejected
/// by validate(). Basis convention throughout: qubit 0 is the most
/// significant bit of a computational-basis index.
struct Circuit {
    int width = 0;
    std::vector<std::vector<Gate>> layers;
    std::string target_kind; // rz | fsim | toffoli | ising | "" (plain)

    void append_layer(std::vector<Gate> gates);
    void append_gate(const Gate& g); // as its own layer
    std::size_t gate_count() const;
    bool layer_is_hard(std::size_t index) const;

    /// Throws ValidationError on out-of-range qubits, duplicate qubits within
    /// a layer, or easy/hard mixing.
    void validate() const;
};

/// Composed unitary of the circuit (dense). Capped by width; the default cap
/// matches the dense PTM cap plus Ising desk-scale checks.
Mat compose_unitary(const Circuit& circ, int width_cap = 6);

/// True if every gate is computational-basis diagonal.
bool circuit_is_diagonal(const Circuit& circ);

/// Phase of each diagonal entry for a diagonal circuit (unwrapped sum).
std::vector<double> compose_diagonal_phases(const Circuit& circ);

/// Apply the circuit to a statevector (no noise).
void apply_to_statevector(const Circuit& circ, Vec& psi);

/// |0...0> statevector of n qubits.
Vec zero_state(int n);

/// Embed a k-local unitary into the full 2^n space.
Mat embed_unitary(const Mat& u, const std::vector<int>& qubits, int n);

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// Global-phase-invariant distance: min over phases of ||A - e^{ia}B||_max.
double phase_invariant_distance(const Mat& a, const Mat& b);

} // namespace csb
