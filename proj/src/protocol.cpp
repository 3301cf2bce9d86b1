#include "csb/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace csb {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPhaseTol = 1e-8;
} // namespace

SubspaceDims SubspaceDims::from_phases(const std::vector<double>& phases, double tol) {
    // phases are sorted ascending in (-pi, pi]; clusters may wrap at the
    // boundary, so the first and last cluster merge when they touch mod 2pi.
    const std::size_t d = phases.size();
    std::vector<Eigen::Index> mult;
    std::size_t i = 0;
    while (i < d) {
        std::size_t j = i + 1;
        while (j < d && std::abs(phases[j] - phases[j - 1]) <= tol) ++j;
        mult.push_back(static_cast<Eigen::Index>(j - i));
        i = j;
    }
    if (mult.size() > 1) {
        const double wrap_gap = (phases.front() + 2 * kPi) - phases.back();
        if (std::abs(wrap_gap) <= tol) {
            mult.front() += mult.back();
            mult.pop_back();
        }
    }
    SubspaceDims dims;
    for (Eigen::Index m : mult) dims.d_ts += m * m;
    const Eigen::Index d2 = static_cast<Eigen::Index>(d) * static_cast<Eigen::Index>(d);
    dims.d_ns = d2 - dims.d_ts;
    return dims;
}

namespace {

double pair_gap(const TargetSpectrum& s, Eigen::Index a, Eigen::Index b) {
    return wrap_angle(s.phases[static_cast<std::size_t>(a)] - s.phases[static_cast<std::size_t>(b)]);
}

} // namespace

std::vector<InitialStateSpec> sample_eigenpairs(const TargetSpectrum& s, int K, Rng rng) {
    if (K < 1) throw ValidationError("sample_eigenpairs: K must be >= 1");
    const Eigen::Index d = s.dim();

    if (s.width == 1) {
        if (std::abs(pair_gap(s, 0, 1)) <= kPhaseTol)
            throw DegeneracyError("sample_eigenpairs: fully degenerate spectrum; "
                                  "consider lift_degeneracy");
        // Superposition plus the higher-phase eigenstate; the paired signals
        // are summed downstream so all four noisy eigenvalues show up.
        return {make_pair_spec(s, 0, 1), make_single_spec(s, 1)};
    }

    std::vector<std::pair<Eigen::Index, Eigen::Index>> chosen;
    if (d <= 32) {
        std::vector<std::pair<Eigen::Index, Eigen::Index>> all;
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = a + 1; b < d; ++b)
                if (std::abs(pair_gap(s, a, b)) > kPhaseTol) all.emplace_back(a, b);
        if (all.empty())
            throw DegeneracyError("sample_eigenpairs: fully degenerate spectrum; "
                                  "consider lift_degeneracy");
        if (static_cast<int>(all.size()) <= K) {
            chosen = all;
        } else {
            for (int k = 0; k < K; ++k) {
                const std::size_t pick = k + rng.integer(all.size() - static_cast<std::size_t>(k));
                std::swap(all[static_cast<std::size_t>(k)], all[pick]);
                chosen.push_back(all[static_cast<std::size_t>(k)]);
            }
        }
    } else {
        std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
        std::size_t attempts = 0;
        while (static_cast<int>(chosen.size()) < K && attempts < 100000) {
            ++attempts;
            Eigen::Index a = static_cast<Eigen::Index>(rng.integer(static_cast<std::uint64_t>(d)));
            Eigen::Index b = static_cast<Eigen::Index>(rng.integer(static_cast<std::uint64_t>(d)));
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            if (std::abs(pair_gap(s, a, b)) <= kPhaseTol) continue;
            if (!seen.insert({a, b}).second) continue;
            chosen.emplace_back(a, b);
        }
        if (static_cast<int>(chosen.size()) < K)
            throw DegeneracyError("sample_eigenpairs: could not find enough unequal-phase pairs; "
                                  "consider lift_degeneracy");
    }

    std::vector<InitialStateSpec> specs;
    specs.reserve(chosen.size());
    for (const auto& [a, b] : chosen) specs.push_back(make_pair_spec(s, a, b));
    return specs;
}

std::vector<AcquisitionPlan> plan_acquisitions(const TargetSpectrum& s,
                                               std::vector<InitialStateSpec> specs) {
    std::vector<AcquisitionPlan> plans;
    if (s.width == 1) {
        AcquisitionPlan plan;
        for (auto& spec : specs) {
            if (spec.is_pair()) {
                plan.has_pair = true;
                plan.pair_a = spec.a;
                plan.pair_b = spec.b;
                plan.ideal_delta = pair_gap(s, spec.a, spec.b);
            }
            plan.circuits.push_back(std::move(spec));
        }
        plans.push_back(std::move(plan));
        return plans;
    }
    for (auto& spec : specs) {
        AcquisitionPlan plan;
        plan.has_pair = spec.is_pair();
        if (plan.has_pair) {
            plan.pair_a = spec.a;
            plan.pair_b = spec.b;
            plan.ideal_delta = pair_gap(s, spec.a, spec.b);
        }
        plan.circuits.push_back(std::move(spec));
        plans.push_back(std::move(plan));
    }
    return plans;
}

std::vector<BenchmarkCircuit> generate_benchmark_suite(const std::vector<AcquisitionPlan>& plans,
                                                       const Circuit& target, int L_max) {
    if (L_max < 8) throw ValidationError("generate_benchmark_suite: L_max must be >= 8");
    std::vector<BenchmarkCircuit> out;
    int spec_index = 0;
    for (const auto& plan : plans) {
        for (const auto& spec : plan.circuits) {
            for (int l = 0; l <= L_max; ++l) {
                BenchmarkCircuit bc;
                bc.spec_index = spec_index;
                bc.length = l;
                bc.circuit.width = target.width;
                bc.circuit.target_kind = target.target_kind;
                bc.circuit.layers = spec.prep.layers;
                for (int r = 0; r < l; ++r)
                    bc.circuit.layers.insert(bc.circuit.layers.end(), target.layers.begin(),
                                             target.layers.end());
                out.push_back(std::move(bc));
            }
            ++spec_index;
        }
    }
    return out;
}

namespace {

Vec ideal_prep_state(const InitialStateSpec& spec, int width) {
    Vec psi = zero_state(width);
    apply_to_statevector(spec.prep, psi);
    return psi;
}

std::vector<double> probabilities_incremental(const InitialStateSpec& spec, const Circuit& target,
                                              const NoiseModel* noise, int L_max) {
    const Vec psi = ideal_prep_state(spec, target.width);
    DensityState state(target.width);
    apply_compiled_ops(state, compile_noisy_ops(spec.prep, noise));
    const auto target_ops = fuse_diagonal_runs(compile_noisy_ops(target, noise), target.width);
    std::vector<double> probs(static_cast<std::size_t>(L_max) + 1);
    for (int l = 0; l <= L_max; ++l) {
        if (l > 0) apply_compiled_ops(state, target_ops);
        probs[static_cast<std::size_t>(l)] = std::clamp(state.expectation_projector(psi), 0.0, 1.0);
    }
    return probs;
}

double probability_of_circuit(const Circuit& circ, const NoiseModel* noise, const Vec& psi) {
    DensityState state(circ.width);
    apply_compiled_ops(state, compile_noisy_ops(circ, noise));
    return std::clamp(state.expectation_projector(psi), 0.0, 1.0);
}

} // namespace

Signal acquire_signal(const AcquisitionPlan& plan, const Circuit& target, const NoiseModel* noise,
                      int L_max, std::uint64_t shots, Rng rng, const RcOptions* rc) {
    if (plan.circuits.empty()) throw ValidationError("acquire_signal: empty plan");
    if (L_max < 8) throw ValidationError("acquire_signal: L_max must be >= 8");
    Signal signal;
    signal.values.assign(static_cast<std::size_t>(L_max) + 1, 0.0);
    signal.shots_per_point = shots;
    signal.summed_components = static_cast<int>(plan.circuits.size());

    if (rc != nullptr) {
        const int n_r = rc->randomizations;
        if (n_r < 1) throw ValidationError("acquire_signal: randomizations must be >= 1");
        if (shots % static_cast<std::uint64_t>(n_r) != 0)
            throw ValidationError("acquire_signal: shots must divide evenly across "
                                  "randomizations to keep the budget unchanged");
        const std::uint64_t per_run = shots / static_cast<std::uint64_t>(n_r);
        for (std::size_t ci = 0; ci < plan.circuits.size(); ++ci) {
            const auto& spec = plan.circuits[ci];
            const Vec psi = ideal_prep_state(spec, target.width);
            Rng circuit_rng = rng.child(ci);
            for (int l = 0; l <= L_max; ++l) {
                Circuit full;
                full.width = target.width;
                full.layers = spec.prep.layers;
                for (int r = 0; r < l; ++r)
                    full.layers.insert(full.layers.end(), target.layers.begin(),
                                       target.layers.end());
                Rng depth_rng = circuit_rng.child(static_cast<std::uint64_t>(l));
                const auto randomized = randomized_compile(full, n_r, depth_rng);
                double mean = 0.0;
                for (const auto& rcirc : randomized) {
                    const double p = probability_of_circuit(rcirc, noise, psi);
                    if (per_run == 0) {
                        mean += p;
                    } else {
                        mean += static_cast<double>(depth_rng.binomial(per_run, p)) /
                                static_cast<double>(per_run);
                    }
                }
                signal.values[static_cast<std::size_t>(l)] += mean / static_cast<double>(n_r);
            }
        }
        signal.validate();
        return signal;
    }

    for (std::size_t ci = 0; ci < plan.circuits.size(); ++ci) {
        const auto probs = probabilities_incremental(plan.circuits[ci], target, noise, L_max);
        Rng circuit_rng = rng.child(ci);
        for (int l = 0; l <= L_max; ++l) {
            const double p = probs[static_cast<std::size_t>(l)];
            if (shots == 0) {
                signal.values[static_cast<std::size_t>(l)] += p;
            } else {
                signal.values[static_cast<std::size_t>(l)] +=
                    static_cast<double>(circuit_rng.binomial(shots, p)) /
                    static_cast<double>(shots);
            }
        }
    }
    signal.validate();
    return signal;
}

std::vector<MatchedEigenvalue> match_modes(const ModeSet& m, bool has_pair, double ideal_delta) {
    if (m.empty()) throw ValidationError("match_modes: empty mode set");
    std::vector<MatchedEigenvalue> out;
    std::vector<bool> taken(m.modes.size(), false);

    auto wrapped_distance = [](const Mode& mode, double phase) {
        return std::abs(wrap_angle(std::arg(mode.z) - phase));
    };
    auto take_nearest = [&](double phase) -> int {
        int best = -1;
        double best_dist = 0.0;
        for (std::size_t i = 0; i < m.modes.size(); ++i) {
            if (taken[i]) continue;
            const double dist = wrapped_distance(m.modes[i], phase);
            if (best < 0 || dist < best_dist) {
                best = static_cast<int>(i);
                best_dist = dist;
            }
        }
        return best;
    };

    const double delta = wrap_angle(ideal_delta);
    if (has_pair && std::abs(delta) > 1e-12) {
        const double gap = std::abs(delta);
        for (const double phase : {delta, -delta}) {
            const int idx = take_nearest(phase);
            if (idx < 0) break;
            taken[static_cast<std::size_t>(idx)] = true;
            MatchedEigenvalue match;
            match.z = m.modes[static_cast<std::size_t>(idx)].z;
            match.g = std::abs(match.z);
            match.ideal_phase = phase;
            match.delta_lambda = wrap_angle(std::arg(match.z) - phase);
            match.trivial = false;
            match.flagged = std::abs(match.delta_lambda) >= gap / 2.0;
            out.push_back(match);
            if (std::abs(wrap_angle(2 * delta)) < 1e-12) {
                // delta == pi: the conjugate candidate coincides; the second
                // pass picks the next-closest mode at the same phase.
            }
        }
    }
    for (std::size_t i = 0; i < m.modes.size(); ++i) {
        if (taken[i]) continue;
        MatchedEigenvalue match;
        match.z = m.modes[i].z;
        match.g = std::abs(match.z);
        match.ideal_phase = 0.0;
        match.delta_lambda = wrap_angle(std::arg(match.z));
        match.trivial = true;
        match.flagged = false;
        out.push_back(match);
    }
    compute_diagonal_entries(out);
    return out;
}

void compute_diagonal_entries(std::vector<MatchedEigenvalue>& matches) {
    for (auto& match : matches) {
        if (match.trivial) {
            match.diag_entry = match.z; // ideal phase is 0
        } else {
            match.diag_entry = std::polar(match.g, match.delta_lambda);
        }
    }
}

FidelityEstimates estimate_fidelities(const std::vector<MatchedEigenvalue>& all,
                                      const SubspaceDims& dims) {
    std::vector<cd> trivial, nontrivial;
    std::vector<double> g_trivial, g_nontrivial;
    for (const auto& match : all) {
        const double g = std::min(match.g, 1.0); // estimators never exceed 1
        const cd entry = match.diag_entry * (match.g > 0 ? g / match.g : 1.0);
        if (match.trivial) {
            trivial.push_back(entry);
            g_trivial.push_back(g);
        } else {
            nontrivial.push_back(entry);
            g_nontrivial.push_back(g);
        }
    }
    if (nontrivial.empty() && dims.d_ns > 0)
        throw ValidationError("estimate_fidelities: empty non-trivial subspace sample");

    // Every CPTP map has the fixed-point eigenvalue 1; it replaces the
    // measured trivial mode nearest to 1 so it is counted exactly once.
    if (trivial.empty()) {
        trivial.push_back(1.0);
        g_trivial.push_back(1.0);
    } else {
        std::size_t best = 0;
        for (std::size_t i = 1; i < trivial.size(); ++i)
            if (std::abs(trivial[i] - cd(1.0)) < std::abs(trivial[best] - cd(1.0))) best = i;
        trivial[best] = 1.0;
        g_trivial[best] = 1.0;
    }

    auto mean_real = [](const std::vector<cd>& v) {
        double s = 0.0;
        for (const cd& x : v) s += x.real();
        return s / static_cast<double>(v.size());
    };
    auto mean_sq = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return s / static_cast<double>(v.size());
    };

    const double d2 = static_cast<double>(dims.d_squared());
    const double mean_nt = nontrivial.empty() ? 0.0 : mean_real(nontrivial);
    const double mean_nt_sq = g_nontrivial.empty() ? 0.0 : mean_sq(g_nontrivial);
    FidelityEstimates est;
    est.process = (static_cast<double>(dims.d_ts) * mean_real(trivial) +
                   static_cast<double>(dims.d_ns) * mean_nt) /
                  d2;
    est.stochastic = std::sqrt((static_cast<double>(dims.d_ts) * mean_sq(g_trivial) +
                                static_cast<double>(dims.d_ns) * mean_nt_sq) /
                               d2);
    est.process = std::clamp(est.process, 0.0, 1.0);
    est.stochastic = std::clamp(est.stochastic, 0.0, 1.0);
    return est;
}

namespace {

Eigen::Index slot_by_overlap(const TargetSpectrum& s, const Vec& reference) {
    Eigen::Index best = 0;
    double best_overlap = -1.0;
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
        const double overlap = std::abs(reference.adjoint().dot(s.eigenvector(i)));
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = i;
        }
    }
    return best;
}

const MatchedEigenvalue* forward_match(const PlanOutcome& outcome) {
    // The mode matched to e^{+i delta} (not the conjugate).
    for (const auto& match : outcome.matches)
        if (!match.trivial &&
            std::abs(wrap_angle(match.ideal_phase - outcome.plan.ideal_delta)) < 1e-12)
            return &match;
    return nullptr;
}

} // namespace

UnitaryParamEstimates estimate_unitary_params(const std::vector<PlanOutcome>& outcomes,
                                              const Circuit& target, const TargetSpectrum& s,
                                              int n_rep) {
    UnitaryParamEstimates est;
    if (target.target_kind == "rz") {
        const Gate& g = target.layers.front().front();
        const double theta = g.params[0];
        const PlanOutcome* pair_outcome = nullptr;
        for (const auto& o : outcomes)
            if (o.plan.has_pair) pair_outcome = &o;
        if (!pair_outcome) throw ValidationError("estimate_unitary_params: missing pair spec");
        const MatchedEigenvalue* match = forward_match(*pair_outcome);
        if (!match) throw ValidationError("estimate_unitary_params: missing matched mode");
        // lambda(|1>) - lambda(|0>) = +theta; sign depends on which basis
        // state the plan's first slot carries.
        const bool a_is_one = s.basis_index[static_cast<std::size_t>(pair_outcome->plan.pair_a)] == 1;
        const double slope = (a_is_one ? 1.0 : -1.0) * static_cast<double>(n_rep);
        const double dtheta = match->delta_lambda / slope;
        est.dtheta = dtheta;
        est.theta_hat = theta + dtheta;
        return est;
    }
    if (target.target_kind == "fsim") {
        const Gate& g = target.layers.front().front();
        const double theta = g.params[0], phi = g.params[1];
        const Eigen::Index d = s.dim();
        Vec v00 = Vec::Zero(d), v11 = Vec::Zero(d), vsp = Vec::Zero(d), vsm = Vec::Zero(d);
        v00(0) = 1.0;
        v11(3) = 1.0;
        vsp(1) = 1.0 / std::sqrt(2.0);
        vsp(2) = 1.0 / std::sqrt(2.0);
        vsm(1) = 1.0 / std::sqrt(2.0);
        vsm(2) = -1.0 / std::sqrt(2.0);
        const Eigen::Index idx00 = slot_by_overlap(s, v00);
        const Eigen::Index idx11 = slot_by_overlap(s, v11);
        const Eigen::Index idxsp = slot_by_overlap(s, vsp);
        const Eigen::Index idxsm = slot_by_overlap(s, vsm);

        const PlanOutcome* theta_outcome = nullptr;
        const PlanOutcome* phi_outcome = nullptr;
        for (const auto& o : outcomes) {
            if (!o.plan.has_pair) continue;
            const auto a = o.plan.pair_a, b = o.plan.pair_b;
            if ((a == idxsp && b == idxsm) || (a == idxsm && b == idxsp)) theta_outcome = &o;
            if ((a == idx00 && b == idx11) || (a == idx11 && b == idx00)) phi_outcome = &o;
        }
        if (theta_outcome) {
            const MatchedEigenvalue* match = forward_match(*theta_outcome);
            if (match) {
                // lambda(s+) - lambda(s-) = -2 theta
                const double slope = (theta_outcome->plan.pair_a == idxsp ? -2.0 : 2.0) *
                                     static_cast<double>(n_rep);
                est.dtheta = match->delta_lambda / slope;
                est.theta_hat = theta + *est.dtheta;
            }
        }
        if (phi_outcome) {
            const MatchedEigenvalue* match = forward_match(*phi_outcome);
            if (match) {
                // lambda(00) - lambda(11) = -phi
                const double slope = (phi_outcome->plan.pair_a == idx00 ? -1.0 : 1.0) *
                                     static_cast<double>(n_rep);
                est.dphi = match->delta_lambda / slope;
                est.phi_hat = phi + *est.dphi;
            }
        }
        if (!est.dtheta && !est.dphi)
            throw ValidationError("estimate_unitary_params: missing required pair for fsim");
        return est;
    }
    return est; // no parameter map for other target kinds
}

std::uint64_t hoeffding_sample_size(double eps, double delta) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("hoeffding_sample_size: eps outside (0, 1]");
    if (!(delta > 0.0 && delta < 1.0))
        throw ValidationError("hoeffding_sample_size: delta outside (0, 1)");
    const double k = std::log(2.0 / delta) / (2.0 * eps * eps);
    return static_cast<std::uint64_t>(std::ceil(k - 1e-12));
}

RepetitionOutcome run_repetition(const Circuit& target, const NoiseModel& noise,
                                 const ProtocolOptions& opt, Rng rng) {
    RepetitionOutcome out;
    const Circuit effective = opt.n_rep > 1 ? repeat_target(target, opt.n_rep) : target;
    const TargetSpectrum spectrum = spectrum_of(effective);
    out.dims = SubspaceDims::from_phases(spectrum.phases);

    auto specs = sample_eigenpairs(spectrum, opt.K, rng.child(0));
    auto plans = plan_acquisitions(spectrum, std::move(specs));

    RcOptions rc_options{opt.rc_randomizations};
    const RcOptions* rc = opt.rc ? &rc_options : nullptr;

    std::vector<MatchedEigenvalue> pooled;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        PlanOutcome outcome;
        outcome.plan = plans[i];
        outcome.signal = acquire_signal(plans[i], effective, &noise, opt.L_max, opt.shots,
                                        rng.child(i + 1), rc);
        out.shots_used += opt.shots * plans[i].circuits.size() *
                          (static_cast<std::uint64_t>(opt.L_max) + 1);
        outcome.modes = estimate_modes(outcome.signal, opt.max_modes, opt.sv_threshold);
        if (outcome.modes.empty()) {
            outcome.flags.push_back("spec " + std::to_string(i) + ": empty mode set (" +
                                    outcome.modes.diagnostic + ")");
        } else {
            outcome.matches = match_modes(outcome.modes, plans[i].has_pair, plans[i].ideal_delta);
            for (const auto& match : outcome.matches) {
                if (match.flagged)
                    outcome.flags.push_back(
                        "spec " + std::to_string(i) +
                        ": eigenvalue matching unreliable (|delta lambda| = " +
                        std::to_string(std::abs(match.delta_lambda)) + " vs gap " +
                        std::to_string(std::abs(plans[i].ideal_delta)) + "); consider RC");
                pooled.push_back(match);
            }
            const double components = static_cast<double>(outcome.signal.summed_components);
            const double shot_sigma =
                opt.shots == 0 ? 2.5e-7
                               : std::sqrt(0.25 * components / static_cast<double>(opt.shots));
            if (outcome.modes.residual > 4.0 * shot_sigma)
                outcome.flags.push_back("spec " + std::to_string(i) +
                                        ": reconstruction residual " +
                                        std::to_string(outcome.modes.residual) +
                                        " above shot-noise scale; many damping modes suspected");
        }
        for (const auto& f : outcome.flags) out.flags.push_back(f);
        out.plans.push_back(std::move(outcome));
    }

    out.estimates = estimate_fidelities(pooled, out.dims);
    if (!opt.rc && (target.target_kind == "rz" || target.target_kind == "fsim")) {
        try {
            out.params = estimate_unitary_params(out.plans, target, spectrum, opt.n_rep);
        } catch (const Error& e) {
            out.flags.push_back(std::string("unitary parameters unavailable: ") + e.what());
        }
    }
    return out;
}

} // namespace csb
