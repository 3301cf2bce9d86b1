#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csb/noise.hpp"
#include "csb/pencil.hpp"
#include "csb/targets.hpp"

namespace csb {

/// Trivial (lambda_a == lambda_b) vs non-trivial operator-subspace dimensions;
/// d_ts is the sum of squared eigenphase multiplicities.
struct SubspaceDims {
    Eigen::Index d_ts = 0;
    Eigen::Index d_ns = 0;

    Eigen::Index d_squared() const { return d_ts + d_ns; }
    static SubspaceDims from_phases(const std::vector<double>& phases, double tol = 1e-8);
};

struct MatchedEigenvalue {
    cd z;                      // noisy eigenvalue g e^{i lambda_ab}
    double g = 0.0;            // |z|
    double ideal_phase = 0.0;  // lambda_a - lambda_b (0 for trivial matches)
    double delta_lambda = 0.0; // wrapped phase error
    bool trivial = true;
    bool flagged = false; // |delta_lambda| >= |ideal gap| / 2
    cd diag_entry{1.0, 0.0};
};

/// One analysis unit: the circuits whose per-L probabilities are summed into
/// a single signal. Width-1 rotation targets pair the superposition circuit
/// with a single-eigenstate circuit; everything else has one circuit per plan.
struct AcquisitionPlan {
    std::vector<InitialStateSpec> circuits;
    bool has_pair = false;
    double ideal_delta = 0.0;
    Eigen::Index pair_a = 0;
    Eigen::Index pair_b = 0;
};

/// K uniformly random unequal-phase eigenstate pairs (exhaustive when there
/// are at most K); width-1 targets get the two-initial-state scheme (pair +
/// higher-phase eigenstate). Throws DegeneracyError when the spectrum holds
/// no unequal-phase pair.
std::vector<InitialStateSpec> sample_eigenpairs(const TargetSpectrum& s, int K, Rng rng);

std::vector<AcquisitionPlan> plan_acquisitions(const TargetSpectrum& s,
                                               std::vector<InitialStateSpec> specs);

struct BenchmarkCircuit {
    Circuit circuit;
    int spec_index = 0;
    int length = 0; // L
};

/// prep . target^L for every spec and L in [0, L_max].
std::vector<BenchmarkCircuit> generate_benchmark_suite(const std::vector<AcquisitionPlan>& plans,
                                                       const Circuit& target, int L_max);

struct RcOptions {
    int randomizations = 10;
};

/// Probabilities tr(O rho_L) with binomial shot noise (shots = 0 -> exact),
/// summed across the plan's circuits per L. Under randomized compiling each
/// depth is averaged over fresh compilations at shots/randomizations each.
Signal acquire_signal(const AcquisitionPlan& plan, const Circuit& target, const NoiseModel* noise,
                      int L_max, std::uint64_t shots, Rng rng, const RcOptions* rc = nullptr);

/// Match modes to the ideal candidates {e^{i delta}, e^{-i delta}, 1}.
std::vector<MatchedEigenvalue> match_modes(const ModeSet& m, bool has_pair, double ideal_delta);

/// Fill E_ab,ab = g e^{i delta_lambda} (non-trivial) or z itself (trivial).
void compute_diagonal_entries(std::vector<MatchedEigenvalue>& matches);

struct FidelityEstimates {
    double process = 1.0;
    double stochastic = 1.0;
};

/// Subspace-weighted averages of diagonal entries (Pauli-free estimator).
/// The guaranteed fixed-point eigenvalue z = 1 replaces the measured trivial
/// mode closest to 1, so the fixed point is counted exactly once.
FidelityEstimates estimate_fidelities(const std::vector<MatchedEigenvalue>& all,
                                      const SubspaceDims& dims);

struct UnitaryParamEstimates {
    std::optional<double> theta_hat;
    std::optional<double> dtheta;
    std::optional<double> phi_hat;
    std::optional<double> dphi;
};

struct PlanOutcome {
    AcquisitionPlan plan;
    Signal signal;
    ModeSet modes;
    std::vector<MatchedEigenvalue> matches;
    std::vector<std::string> flags;
};

/// Recover unitary parameters from matched mode phases (rz and fsim targets).
UnitaryParamEstimates estimate_unitary_params(const std::vector<PlanOutcome>& outcomes,
                                              const Circuit& target, const TargetSpectrum& s,
                                              int n_rep = 1);

/// ceil(log(2/delta) / (2 eps^2)); dimension-independent sample count.
std::uint64_t hoeffding_sample_size(double eps, double delta);

struct ProtocolOptions {
    int K = 10;
    int L_max = 50;
    std::uint64_t shots = 10000; // 0 = exact probabilities
    bool rc = false;
    int rc_randomizations = 10;
    int n_rep = 1;
    int max_modes = 5; // 4 + 1 slack for the near-1 trivial mode
    double sv_threshold = 0.05;
};

struct RepetitionOutcome {
    FidelityEstimates estimates;
    UnitaryParamEstimates params;
    SubspaceDims dims;
    std::vector<PlanOutcome> plans;
    std::vector<std::string> flags;
    std::uint64_t shots_used = 0;
};

/// One full protocol pass: sample pairs, acquire signals, extract and match
/// modes, estimate fidelities and unitary parameters.
RepetitionOutcome run_repetition(const Circuit& target, const NoiseModel& noise,
                                 const ProtocolOptions& opt, Rng rng);

} // namespace csb
