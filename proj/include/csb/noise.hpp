#pragma once

#include <string>
#include <vector>

#include "csb/qcore.hpp"

namespace csb {

/// Gate-attached noise parameters: equal-probability T1/T2 damping per
/// single-qubit gate, per-qubit damping plus a coherent Fsim-type error per
/// two-qubit gate, and an over-rotation for benchmarked 1-qubit rotations.
class NoiseModel {
  public:
    NoiseModel() = default;
    NoiseModel(double one_qubit_dp, double two_qubit_dp, double two_qubit_dtheta,
               double two_qubit_dphi, double rotation_overshoot);

    double one_qubit_dp() const { return one_qubit_dp_; }
    double two_qubit_dp() const { return two_qubit_dp_; }
    double two_qubit_dtheta() const { return two_qubit_dtheta_; }
    double two_qubit_dphi() const { return two_qubit_dphi_; }
    double rotation_overshoot() const { return rotation_overshoot_; }
    bool is_zero() const;

  private:
    double one_qubit_dp_ = 0.0;
    double two_qubit_dp_ = 0.0;
    double two_qubit_dtheta_ = 0.0;
    double two_qubit_dphi_ = 0.0;
    double rotation_overshoot_ = 0.0;
};

/// Amplitude damping (gamma = dp) then phase damping (lambda = dp) as one
/// trace-preserving KrausSet on a single qubit.
KrausSet make_damping_channels(double dp);

enum class CoherentErrorKind { Rz, Fsim };

/// R_Z(dtheta) for rz; Fsim(dtheta, dphi) for fsim.
UnitaryMatrix make_coherent_error(CoherentErrorKind kind, double dtheta, double dphi = 0.0);

/// Ideal circuit with noise attached (not baked in).
struct NoisyCircuit {
    Circuit ideal;
    NoiseModel model;
};

NoisyCircuit noisify_circuit(Circuit circ, NoiseModel model);

enum class OracleMethod { ExactChannel, ProductOfComponents };

const char* oracle_method_name(OracleMethod m);

struct GroundTruth {
    double process_fidelity = 1.0;
    double stochastic_fidelity = 1.0;
    OracleMethod method = OracleMethod::ExactChannel;
};

/// Exact channel fidelities for width <= dense cap; otherwise the product of
/// exact per-gate fidelities. The product method is flagged because inferring
/// circuit fidelity from components is not always reliable.
GroundTruth oracle_fidelities(const Circuit& target, const NoiseModel& model);

/// One primitive in the expanded noisy semantics of a circuit.
struct CompiledOp {
    enum class Kind { Unitary1, Unitary2, Channel1, Diagonal };
    Kind kind = Kind::Unitary1;
    int q0 = -1;
    int q1 = -1;
    Eigen::Matrix2cd u1;
    Eigen::Matrix4cd u2;
    std::vector<Eigen::Matrix2cd> k1;
    Vec diag; // unit phasors, full width

    std::vector<Mat> kraus_ops() const;
    std::vector<int> qubits() const;
};

/// Expand a circuit into primitive ops under the noise model (nullptr or
/// zero model = ideal). Easy layers are padded to full width so that idle
/// qubits in a cycle see the same damping as busy ones; hard cycles damp the
/// participating qubits. Per noisy gate the order is: implemented gate,
/// damping, coherent error.
std::vector<CompiledOp> compile_noisy_ops(const Circuit& circ, const NoiseModel* model);

/// Merge consecutive diagonal unitaries into single full-width diagonal ops.
std::vector<CompiledOp> fuse_diagonal_runs(std::vector<CompiledOp> ops, int width);

void apply_compiled_ops(DensityState& state, const std::vector<CompiledOp>& ops);

} // namespace csb
