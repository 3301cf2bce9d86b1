#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "csb/circuit.hpp"

namespace csb {

class NoiseModel; // noise.hpp

/// Hard cap for dense channel (PTM) construction: 4^n x 4^n storage.
inline constexpr int kDensePtmWidthCap = 3;

/// Unitary on a power-of-two dimension; U U^dag = I within 1e-10 (max-norm).
class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(Mat m);
    const Mat& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    Mat m_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix {
  public:
    explicit DensityMatrix(Mat m);
    static DensityMatrix pure(const Vec& psi);
    const Mat& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    Mat m_;
};

/// Kraus operators E_k with sum E_k^dag E_k = I within 1e-10.
class KrausSet {
  public:
    explicit KrausSet(std::vector<Mat> ops);
    static KrausSet identity(Eigen::Index dim);
    static KrausSet from_unitary(const Mat& u);
    /// Composition: other applied after this one. Zero products are pruned.
    KrausSet compose_after(const KrausSet& other) const;
    const std::vector<Mat>& ops() const { return ops_; }
    Eigen::Index dim() const { return ops_.front().rows(); }

  private:
    std::vector<Mat> ops_;
};

/// Channel matrix in the normalized Pauli basis P/sqrt(d): real d^2 x d^2,
/// first row (1,0,...,0) for trace-preserving maps. The normalization makes
/// the PTM of a unitary channel orthogonal, so the process fidelity is a
/// plain matrix inner product.
class PTM {
  public:
    explicit PTM(Eigen::MatrixXd m);
    const Eigen::MatrixXd& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); } // d^2

  private:
    Eigen::MatrixXd m_;
};

/// Eigenphase in (-pi, pi] with its unit-norm eigenvector.
struct EigenPair {
    double phase = 0.0;
    Vec vector;
};

/// Normalized Pauli basis of n qubits, index digits (I,X,Y,Z) with qubit 0
/// as the most significant digit.
std::vector<Mat> pauli_basis(int n);

/// Eigendecomposition of a unitary. Phases ascending; degenerate subspaces
/// come back with an orthonormal basis; output is deterministic for a fixed
/// input (each vector's first nonzero component is made real-positive and
/// equal-phase groups are sorted lexicographically).
std::vector<EigenPair> eig_unitary(const UnitaryMatrix& u);

PTM ptm_of_kraus(const KrausSet& kraus);

/// PTM of the composed circuit channel, with per-gate noise attached when a
/// model is given. Width is capped (4^n dense storage).
PTM ptm_of_circuit(const Circuit& circ, const NoiseModel* noise = nullptr,
                   int width_cap = kDensePtmWidthCap);

std::vector<cd> channel_eigenvalues(const PTM& m);

/// tr(ideal^dag noisy)/d^2, clipped to [0,1].
double process_fidelity(const PTM& ideal, const PTM& noisy);

/// (d F + 1) / (d + 1).
double average_gate_fidelity(double process_fid, Eigen::Index d);

/// sqrt(mean of squared channel-eigenvalue magnitudes).
double stochastic_fidelity_exact(const PTM& noisy);

/// Pauli-basis vectorization r_i = tr(sigma_i rho) of a Hermitian operator.
Eigen::VectorXd pauli_vector(const Mat& op, int n);

/// Density-matrix state evolved by k-local Kraus action (k <= 2); never
/// materializes a full 4^n PTM.
class DensityState {
  public:
    explicit DensityState(int n);
    static DensityState from_density(const Mat& rho, int n);

    int width() const { return n_; }
    const Mat& rho() const { return rho_; }

    void apply_gate_unitary(const Gate& g);
    void apply_unitary1(const Eigen::Matrix2cd& u, int q);
    void apply_unitary2(const Eigen::Matrix4cd& u, int q0, int q1);
    void apply_kraus1(const std::vector<Eigen::Matrix2cd>& ops, int q);
    void apply_kraus2(const std::vector<Eigen::Matrix4cd>& ops, int q0, int q1);
    void apply_diagonal(const Vec& phases); // full-width diagonal unitary

    /// <psi| rho |psi>, real part (imaginary residue checked small).
    double expectation_projector(const Vec& psi) const;

  private:
    int n_;
    Mat rho_;
};

/// tr(O rho_final) for O = |psi><psi|, evolving rho through the circuit with
/// optional noise. Result clipped to [0,1] after a small-residue check.
double evolve_and_measure(const DensityMatrix& rho, const Circuit& circ, const NoiseModel* noise,
                          const DensityMatrix& observable);

} // namespace csb
