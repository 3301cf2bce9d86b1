#include "csb/noise.hpp"

#include <cmath>
#include <numbers>

namespace csb {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
}

NoiseModel::NoiseModel(double one_qubit_dp, double two_qubit_dp, double two_qubit_dtheta,
                       double two_qubit_dphi, double rotation_overshoot)
    : one_qubit_dp_(one_qubit_dp), two_qubit_dp_(two_qubit_dp),
      two_qubit_dtheta_(two_qubit_dtheta), two_qubit_dphi_(two_qubit_dphi),
      rotation_overshoot_(rotation_overshoot) {
    for (double dp : {one_qubit_dp_, two_qubit_dp_})
        if (dp < 0.0 || dp > 0.5)
            throw ValidationError("NoiseModel: damping probability " + std::to_string(dp) +
                                  " outside [0, 0.5]");
    for (double a : {two_qubit_dtheta_, two_qubit_dphi_, rotation_overshoot_})
        if (!(std::abs(a) < kHalfPi))
            throw ValidationError("NoiseModel: error angle magnitude must be < pi/2");
}

bool NoiseModel::is_zero() const {
    return one_qubit_dp_ == 0.0 && two_qubit_dp_ == 0.0 && two_qubit_dtheta_ == 0.0 &&
           two_qubit_dphi_ == 0.0 && rotation_overshoot_ == 0.0;
}

KrausSet make_damping_channels(double dp) {
    if (dp < 0.0 || dp > 0.5)
        throw ValidationError("make_damping_channels: dp " + std::to_string(dp) +
                              " outside [0, 0.5]");
    Mat a0(2, 2), a1(2, 2), p0(2, 2), p1(2, 2);
    a0 << 1, 0, 0, std::sqrt(1.0 - dp);
    a1 << 0, std::sqrt(dp), 0, 0;
    p0 << 1, 0, 0, std::sqrt(1.0 - dp);
    p1 << 0, 0, 0, std::sqrt(dp);
    KrausSet amplitude({a0, a1});
    KrausSet phase({p0, p1});
    return amplitude.compose_after(phase); // amplitude first, then phase
}

UnitaryMatrix make_coherent_error(CoherentErrorKind kind, double dtheta, double dphi) {
    if (!std::isfinite(dtheta) || !std::isfinite(dphi))
        throw ValidationError("make_coherent_error: non-finite angle");
    if (kind == CoherentErrorKind::Rz)
        return UnitaryMatrix(gate_matrix(make_gate(GateKind::RZ, {0}, {dtheta})));
    return UnitaryMatrix(gate_matrix(make_gate(GateKind::Fsim, {0, 1}, {dtheta, dphi})));
}

NoisyCircuit noisify_circuit(Circuit circ, NoiseModel model) {
    circ.validate();
    return NoisyCircuit{std::move(circ), model};
}

const char* oracle_method_name(OracleMethod m) {
    return m == OracleMethod::ExactChannel ? "exact-channel" : "product-of-components";
}

std::vector<Mat> CompiledOp::kraus_ops() const {
    switch (kind) {
    case Kind::Unitary1: return {Mat(u1)};
    case Kind::Unitary2: return {Mat(u2)};
    case Kind::Channel1: {
        std::vector<Mat> out;
        for (const auto& e : k1) out.emplace_back(e);
        return out;
    }
    case Kind::Diagonal: {
        Mat m = Mat::Zero(diag.size(), diag.size());
        for (Eigen::Index i = 0; i < diag.size(); ++i) m(i, i) = diag(i);
        return {m};
    }
    }
    return {};
}

std::vector<int> CompiledOp::qubits() const {
    switch (kind) {
    case Kind::Unitary1:
    case Kind::Channel1: return {q0};
    case Kind::Unitary2: return {q0, q1};
    case Kind::Diagonal: {
        int n = 0;
        while ((Eigen::Index(1) << n) < diag.size()) ++n;
        std::vector<int> qs(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) qs[static_cast<std::size_t>(q)] = q;
        return qs;
    }
    }
    return {};
}

namespace {

Gate implemented_gate(const Gate& g, const NoiseModel* model) {
    if (model == nullptr || !g.benchmarked || model->rotation_overshoot() == 0.0) return g;
    switch (g.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ: {
        Gate h = g;
        h.params[0] += model->rotation_overshoot();
        return h;
    }
    default: return g;
    }
}

} // namespace

std::vector<CompiledOp> compile_noisy_ops(const Circuit& circ, const NoiseModel* model) {
    const bool noisy = model != nullptr && !model->is_zero();
    std::vector<CompiledOp> ops;

    std::vector<Eigen::Matrix2cd> damp1, damp2;
    Eigen::Matrix4cd coherent2 = Eigen::Matrix4cd::Identity();
    bool has_coherent2 = false;
    if (noisy) {
        for (const auto& e : make_damping_channels(model->one_qubit_dp()).ops())
            damp1.emplace_back(e);
        for (const auto& e : make_damping_channels(model->two_qubit_dp()).ops())
            damp2.emplace_back(e);
        if (model->two_qubit_dtheta() != 0.0 || model->two_qubit_dphi() != 0.0) {
            coherent2 = make_coherent_error(CoherentErrorKind::Fsim, model->two_qubit_dtheta(),
                                            model->two_qubit_dphi())
                            .matrix();
            has_coherent2 = true;
        }
    }

    for (std::size_t li = 0; li < circ.layers.size(); ++li) {
        const auto& layer = circ.layers[li];
        if (layer.empty()) continue;
        const bool hard = circ.layer_is_hard(li);

        // Ideal (implemented) gates first; disjoint qubits commute with the
        // per-gate noise emitted afterwards.
        for (const auto& g : layer) {
            const Gate impl = implemented_gate(g, model);
            if (impl.arity() == 1) {
                if (impl.kind == GateKind::Id) continue;
                CompiledOp op;
                op.kind = CompiledOp::Kind::Unitary1;
                op.q0 = impl.qubits[0];
                op.u1 = gate_matrix(impl);
                ops.push_back(std::move(op));
            } else {
                CompiledOp op;
                op.kind = CompiledOp::Kind::Unitary2;
                op.q0 = impl.qubits[0];
                op.q1 = impl.qubits[1];
                op.u2 = gate_matrix(impl);
                ops.push_back(std::move(op));
            }
        }
        if (!noisy) continue;

        if (!hard) {
            // Full-width easy cycle: idle qubits damp like busy ones.
            std::vector<bool> seen(static_cast<std::size_t>(circ.width), false);
            for (const auto& g : layer) seen[static_cast<std::size_t>(g.qubits[0])] = true;
            for (int q = 0; q < circ.width; ++q) {
                CompiledOp op;
                op.kind = CompiledOp::Kind::Channel1;
                op.q0 = q;
                op.k1 = damp1;
                ops.push_back(std::move(op));
                (void)seen;
            }
        } else {
            for (const auto& g : layer) {
                for (int q : g.qubits) {
                    CompiledOp op;
                    op.kind = CompiledOp::Kind::Channel1;
                    op.q0 = q;
                    op.k1 = damp2;
                    ops.push_back(std::move(op));
                }
                if (has_coherent2 && g.arity() == 2) {
                    CompiledOp op;
                    op.kind = CompiledOp::Kind::Unitary2;
                    op.q0 = g.qubits[0];
                    op.q1 = g.qubits[1];
                    op.u2 = coherent2;
                    ops.push_back(std::move(op));
                }
            }
        }
    }
    return ops;
}

namespace {

bool op_is_diagonal(const CompiledOp& op) {
    if (op.kind == CompiledOp::Kind::Diagonal) return true;
    if (op.kind == CompiledOp::Kind::Unitary1)
        return std::abs(op.u1(0, 1)) < 1e-15 && std::abs(op.u1(1, 0)) < 1e-15;
    if (op.kind == CompiledOp::Kind::Unitary2) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j && std::abs(op.u2(i, j)) > 1e-15) return false;
        return true;
    }
    return false;
}

void fold_into_diag(Vec& diag, const CompiledOp& op, int width) {
    const Eigen::Index d = diag.size();
    if (op.kind == CompiledOp::Kind::Diagonal) {
        diag.array() *= op.diag.array();
        return;
    }
    if (op.kind == CompiledOp::Kind::Unitary1) {
        const int sh = width - 1 - op.q0;
        const cd a = op.u1(0, 0), b = op.u1(1, 1);
        for (Eigen::Index i = 0; i < d; ++i) diag(i) *= ((i >> sh) & 1) ? b : a;
        return;
    }
    const int sa = width - 1 - op.q0;
    const int sb = width - 1 - op.q1;
    for (Eigen::Index i = 0; i < d; ++i) {
        const int loc = static_cast<int>((((i >> sa) & 1) << 1) | ((i >> sb) & 1));
        diag(i) *= op.u2(loc, loc);
    }
}

} // namespace

std::vector<CompiledOp> fuse_diagonal_runs(std::vector<CompiledOp> ops, int width) {
    const Eigen::Index d = Eigen::Index(1) << width;
    std::vector<CompiledOp> out;
    std::vector<const CompiledOp*> run;
    auto flush = [&] {
        if (run.size() >= 2) {
            CompiledOp fused;
            fused.kind = CompiledOp::Kind::Diagonal;
            fused.diag = Vec::Ones(d);
            for (const auto* op : run) fold_into_diag(fused.diag, *op, width);
            out.push_back(std::move(fused));
        } else {
            for (const auto* op : run) out.push_back(*op);
        }
        run.clear();
    };
    for (const auto& op : ops) {
        if (op_is_diagonal(op)) {
            run.push_back(&op);
        } else {
            flush();
            out.push_back(op);
        }
    }
    flush();
    return out;
}

void apply_compiled_ops(DensityState& state, const std::vector<CompiledOp>& ops) {
    for (const auto& op : ops) {
        switch (op.kind) {
        case CompiledOp::Kind::Unitary1: state.apply_unitary1(op.u1, op.q0); break;
        case CompiledOp::Kind::Unitary2: state.apply_unitary2(op.u2, op.q0, op.q1); break;
        case CompiledOp::Kind::Channel1: state.apply_kraus1(op.k1, op.q0); break;
        case CompiledOp::Kind::Diagonal: state.apply_diagonal(op.diag); break;
        }
    }
}

GroundTruth oracle_fidelities(const Circuit& target, const NoiseModel& model) {
    GroundTruth truth;
    if (target.width <= kDensePtmWidthCap) {
        const PTM ideal = ptm_of_circuit(target, nullptr);
        const PTM noisy = ptm_of_circuit(target, &model);
        truth.process_fidelity = process_fidelity(ideal, noisy);
        truth.stochastic_fidelity = stochastic_fidelity_exact(noisy);
        truth.method = OracleMethod::ExactChannel;
        return truth;
    }
    // Per-gate product; counts actual gates, so it is exact only when noise
    // does not build up coherently across the circuit.
    double fproc = 1.0, fsto = 1.0;
    for (const auto& layer : target.layers) {
        for (const auto& g : layer) {
            Gate local = g;
            for (std::size_t i = 0; i < local.qubits.size(); ++i)
                local.qubits[i] = static_cast<int>(i);
            Circuit one;
            one.width = local.arity();
            one.append_gate(local);
            const PTM ideal = ptm_of_circuit(one, nullptr);
            const PTM noisy = ptm_of_circuit(one, &model);
            fproc *= process_fidelity(ideal, noisy);
            fsto *= stochastic_fidelity_exact(noisy);
        }
    }
    truth.process_fidelity = fproc;
    truth.stochastic_fidelity = fsto;
    truth.method = OracleMethod::ProductOfComponents;
    return truth;
}

} // namespace csb
