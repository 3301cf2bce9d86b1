#include "csb/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace csb {

namespace {
constexpr double kPi = std::numbers::pi;
}

Circuit build_rz_target(double theta) {
    if (!std::isfinite(theta)) throw ValidationError("build_rz_target: non-finite angle");
    Circuit c;
    c.width = 1;
    c.target_kind = "rz";
    Gate g = make_gate(GateKind::RZ, {0}, {theta});
    g.benchmarked = true;
    c.append_gate(g);
    return c;
}

Circuit build_fsim_target(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw ValidationError("build_fsim_target: non-finite angle");
    Circuit c;
    c.width = 2;
    c.target_kind = "fsim";
    c.append_gate(make_gate(GateKind::Fsim, {0, 1}, {theta, phi}));
    return c;
}

Circuit build_toffoli_target() {
    Circuit c;
    c.width = 3;
    c.target_kind = "toffoli";
    const int a = 0, b = 1, t = 2;
    c.append_layer({make_gate(GateKind::H, {t})});
    c.append_layer({make_gate(GateKind::CX, {b, t})});
    c.append_layer({make_gate(GateKind::Tdg, {t})});
    c.append_layer({make_gate(GateKind::CX, {a, t})});
    c.append_layer({make_gate(GateKind::T, {t})});
    c.append_layer({make_gate(GateKind::CX, {b, t})});
    c.append_layer({make_gate(GateKind::Tdg, {t})});
    c.append_layer({make_gate(GateKind::CX, {a, t})});
    c.append_layer({make_gate(GateKind::T, {b}), make_gate(GateKind::T, {t})});
    c.append_layer({make_gate(GateKind::H, {t})});
    c.append_layer({make_gate(GateKind::CX, {a, b})});
    c.append_layer({make_gate(GateKind::T, {a}), make_gate(GateKind::Tdg, {b})});
    c.append_layer({make_gate(GateKind::CX, {a, b})});
    return c;
}

double ising_energy(const IsingParams& p, std::size_t x) {
    auto spin = [&](int q) { return ((x >> (p.n - 1 - q)) & 1) ? -1.0 : 1.0; };
    double e = 0.0;
    for (int q = 0; q < p.n; ++q) e += p.fields[static_cast<std::size_t>(q)] * spin(q);
    const int edges = p.ring ? (p.n == 2 ? 1 : p.n) : p.n - 1;
    for (int q = 0; q < edges; ++q)
        e += p.couplings[static_cast<std::size_t>(q)] * spin(q) * spin((q + 1) % p.n);
    return e;
}

Circuit build_ising_target(const IsingParams& p) {
    if (p.n < 2) throw ValidationError("build_ising_target: n must be >= 2");
    if (static_cast<int>(p.fields.size()) != p.n)
        throw ValidationError("build_ising_target: need " + std::to_string(p.n) + " fields");
    const int edges = p.ring ? (p.n == 2 ? 1 : p.n) : p.n - 1;
    if (static_cast<int>(p.couplings.size()) != edges)
        throw ValidationError("build_ising_target: need " + std::to_string(edges) + " couplings");
    if (!std::isfinite(p.dt)) throw ValidationError("build_ising_target: non-finite dt");

    Circuit c;
    c.width = p.n;
    c.target_kind = "ising";
    // exp(-i h Z dt) = RZ(2 h dt); exp(-i J ZZ dt) = ZZ(2 J dt)
    std::vector<Gate> rz_layer;
    for (int q = 0; q < p.n; ++q)
        rz_layer.push_back(make_gate(GateKind::RZ, {q}, {2.0 * p.fields[static_cast<std::size_t>(q)] * p.dt}));
    c.append_layer(std::move(rz_layer));
    std::vector<Gate> even, odd;
    for (int q = 0; q < edges; ++q) {
        Gate g = make_gate(GateKind::ZZ, {q, (q + 1) % p.n},
                           {2.0 * p.couplings[static_cast<std::size_t>(q)] * p.dt});
        (q % 2 == 0 ? even : odd).push_back(std::move(g));
    }
    // A ring with odd n leaves the closing edge overlapping both parities;
    // give overlapping gates their own layers.
    auto place = [&c](std::vector<Gate>& gates) {
        std::vector<Gate> layer;
        std::set<int> used;
        for (auto& g : gates) {
            if (used.count(g.qubits[0]) || used.count(g.qubits[1])) {
                c.append_layer(layer);
                layer.clear();
                used.clear();
            }
            used.insert(g.qubits[0]);
            used.insert(g.qubits[1]);
            layer.push_back(std::move(g));
        }
        if (!layer.empty()) c.append_layer(std::move(layer));
    };
    place(even);
    place(odd);
    return c;
}

Circuit prepare_pair_state(const std::string& x, const std::string& y) {
    if (x.size() != y.size()) throw ValidationError("prepare_pair_state: length mismatch");
    const int n = static_cast<int>(x.size());
    if (n == 0) throw ValidationError("prepare_pair_state: empty bitstring");
    for (char ch : x + y)
        if (ch != '0' && ch != '1') throw ValidationError("prepare_pair_state: non-binary bitstring");

    Circuit c;
    c.width = n;
    std::vector<int> differ;
    for (int i = 0; i < n; ++i)
        if (x[static_cast<std::size_t>(i)] != y[static_cast<std::size_t>(i)]) differ.push_back(i);

    std::vector<Gate> ones;
    for (int i = 0; i < n; ++i)
        if (x[static_cast<std::size_t>(i)] == '1' && y[static_cast<std::size_t>(i)] == '1')
            ones.push_back(make_gate(GateKind::X, {i}));
    if (!ones.empty()) c.append_layer(std::move(ones));
    if (differ.empty()) return c;

    // Branch labeling is free for an unordered pair: use the string with a 0
    // on the leading differing qubit, so no X correction lands there.
    const int q0 = differ.front();
    const std::string& s = (x[static_cast<std::size_t>(q0)] == '0') ? x : y;
    c.append_layer({make_gate(GateKind::H, {q0})});
    for (std::size_t k = 1; k < differ.size(); ++k)
        c.append_layer({make_gate(GateKind::CX, {differ[k - 1], differ[k]})});
    std::vector<Gate> corrections;
    for (std::size_t k = 1; k < differ.size(); ++k)
        if (s[static_cast<std::size_t>(differ[k])] == '1')
            corrections.push_back(make_gate(GateKind::X, {differ[k]}));
    if (!corrections.empty()) c.append_layer(std::move(corrections));
    return c;
}

std::vector<Gate> toffoli_lift_layer() {
    return {make_gate(GateKind::RZ, {0}, {kPi / 2}), make_gate(GateKind::RZ, {1}, {2 * kPi / 3}),
            make_gate(GateKind::RX, {2}, {4 * kPi / 5})};
}

Circuit lift_degeneracy(const Circuit& target, const std::vector<Gate>& layer) {
    for (const auto& g : layer)
        if (g.arity() != 1)
            throw ValidationError("lift_degeneracy: layer must contain single-qubit gates only");
    Circuit out = target;
    bool merged = false;
    if (!out.layers.empty() && !out.layer_is_hard(out.layers.size() - 1)) {
        std::set<int> used;
        for (const auto& g : out.layers.back()) used.insert(g.qubits[0]);
        bool free = true;
        for (const auto& g : layer)
            if (used.count(g.qubits[0])) free = false;
        if (free) {
            for (const auto& g : layer) out.layers.back().push_back(g);
            merged = true;
        }
    }
    if (!merged) out.append_layer(layer);
    out.validate();
    return out;
}

Circuit repeat_target(const Circuit& circ, int n_rep) {
    if (n_rep < 1) throw ValidationError("repeat_target: n_rep must be >= 1");
    Circuit out = circ;
    for (int r = 1; r < n_rep; ++r)
        out.layers.insert(out.layers.end(), circ.layers.begin(), circ.layers.end());
    return out;
}

namespace {

Eigen::Matrix2cd pauli_1q(int p) {
    Eigen::Matrix2cd m;
    switch (p) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cd(0, -1), cd(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
    }
    return m;
}

GateKind pauli_kind(int p) {
    switch (p) {
    case 1: return GateKind::X;
    case 2: return GateKind::Y;
    case 3: return GateKind::Z;
    default: return GateKind::Id;
    }
}

bool is_identity2(const Eigen::Matrix2cd& u) {
    return phase_invariant_distance(Mat(u), Mat(Eigen::Matrix2cd::Identity())) < 1e-12;
}

// Try M = A (x) B with A, B unitary; operator Schmidt decomposition.
bool tensor_factor(const Eigen::Matrix4cd& m, Eigen::Matrix2cd& a, Eigen::Matrix2cd& b) {
    Mat r(4, 4); // r[(r0,c0),(r1,c1)] = M[(r0 r1),(c0 c1)]
    for (int r0 = 0; r0 < 2; ++r0)
        for (int c0 = 0; c0 < 2; ++c0)
            for (int r1 = 0; r1 < 2; ++r1)
                for (int c1 = 0; c1 < 2; ++c1)
                    r(2 * r0 + c0, 2 * r1 + c1) = m(2 * r0 + r1, 2 * c0 + c1);
    Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(1) > 1e-9) return false;
    const double s = svd.singularValues()(0);
    Vec u = svd.matrixU().col(0) * std::sqrt(s);
    Vec v = svd.matrixV().col(0).conjugate() * std::sqrt(s);
    a << u(0), u(1), u(2), u(3);
    b << v(0), v(1), v(2), v(3);
    // Distribute magnitude so both factors are unitary.
    const double na = std::sqrt(std::abs((a * a.adjoint()).trace().real()) / 2.0);
    if (na < 1e-12) return false;
    a /= na;
    b *= na;
    Eigen::Matrix4cd rebuilt;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) rebuilt.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    if ((rebuilt - m).cwiseAbs().maxCoeff() > 1e-9) return false;
    if ((a * a.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-9) return false;
    if ((b * b.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-9) return false;
    return true;
}

std::vector<Gate> cycle_variants(const Gate& g) {
    switch (g.kind) {
    case GateKind::ZZ: {
        Gate flipped = g;
        flipped.params[0] = -g.params[0];
        return {g, flipped};
    }
    case GateKind::Fsim: {
        Gate flipped = g;
        flipped.params[0] = -g.params[0];
        return {g, flipped};
    }
    default: return {g};
    }
}

struct CyclePush {
    Gate replacement;
    Eigen::Matrix2cd corr0, corr1;
};

// U_g P = corr U_g'  =>  corr = U_g P U_g'^dag must factor into 1q unitaries.
std::optional<CyclePush> push_pauli_through(const Gate& g, int p0, int p1) {
    const Eigen::Matrix4cd ug = gate_matrix(g);
    Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
    const Eigen::Matrix2cd pa = pauli_1q(p0), pb = pauli_1q(p1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) p.block<2, 2>(2 * i, 2 * j) = pa(i, j) * pb;
    for (const Gate& variant : cycle_variants(g)) {
        const Eigen::Matrix4cd uv = gate_matrix(variant);
        const Eigen::Matrix4cd m = ug * p * uv.adjoint();
        Eigen::Matrix2cd a, b;
        if (tensor_factor(m, a, b)) return CyclePush{variant, a, b};
    }
    return std::nullopt;
}

// Supported (p0, p1) twirl set for a hard-cycle gate, cached per gate kind
// and parameters within one randomized_compile call.
std::vector<std::pair<int, int>> supported_twirl_set(const Gate& g) {
    std::vector<std::pair<int, int>> out;
    for (int p0 = 0; p0 < 4; ++p0)
        for (int p1 = 0; p1 < 4; ++p1)
            if (push_pauli_through(g, p0, p1)) out.emplace_back(p0, p1);
    return out;
}

} // namespace

std::vector<Circuit> randomized_compile(const Circuit& circ, int n_r, Rng& rng) {
    if (n_r < 1) throw ValidationError("randomized_compile: n_r must be >= 1");
    circ.validate();

    std::vector<Circuit> out;
    out.reserve(static_cast<std::size_t>(n_r));
    for (int r = 0; r < n_r; ++r) {
        Rng stream = rng.child(static_cast<std::uint64_t>(r));
        Circuit rc;
        rc.width = circ.width;
        rc.target_kind = circ.target_kind;

        std::vector<Eigen::Matrix2cd> pending(static_cast<std::size_t>(circ.width),
                                              Eigen::Matrix2cd::Identity());
        bool pending_any = false;

        auto emit_easy = [&](const std::vector<Eigen::Matrix2cd>& frame,
                             const std::vector<Gate>* originals) {
            std::vector<Gate> layer;
            std::vector<const Gate*> by_qubit(static_cast<std::size_t>(circ.width), nullptr);
            if (originals)
                for (const auto& g : *originals) by_qubit[static_cast<std::size_t>(g.qubits[0])] = &g;
            for (int q = 0; q < circ.width; ++q) {
                Eigen::Matrix2cd u = frame[static_cast<std::size_t>(q)];
                const Gate* orig = by_qubit[static_cast<std::size_t>(q)];
                if (orig) u = Eigen::Matrix2cd(gate_matrix(*orig)) * u;
                if (is_identity2(u)) continue;
                if (orig && is_identity2(frame[static_cast<std::size_t>(q)])) {
                    layer.push_back(*orig); // untouched original gate keeps its kind and flags
                } else {
                    layer.push_back(make_u1q(q, u));
                }
            }
            if (!layer.empty()) rc.append_layer(std::move(layer));
        };

        std::size_t li = 0;
        while (li < circ.layers.size()) {
            const bool hard_here = circ.layer_is_hard(li);
            const std::vector<Gate>* easy_orig = nullptr;
            std::size_t hard_index = li;
            if (!hard_here) {
                if (li + 1 < circ.layers.size() && circ.layer_is_hard(li + 1)) {
                    easy_orig = &circ.layers[li];
                    hard_index = li + 1;
                } else {
                    emit_easy(pending, &circ.layers[li]);
                    pending.assign(static_cast<std::size_t>(circ.width),
                                   Eigen::Matrix2cd::Identity());
                    pending_any = false;
                    ++li;
                    continue;
                }
            }

            // Sample the twirl layer for this hard cycle.
            const auto& cycle = circ.layers[hard_index];
            std::vector<int> twirl(static_cast<std::size_t>(circ.width), 0);
            std::vector<Gate> replaced;
            std::vector<Eigen::Matrix2cd> corrections(static_cast<std::size_t>(circ.width),
                                                      Eigen::Matrix2cd::Identity());
            std::vector<bool> in_cycle(static_cast<std::size_t>(circ.width), false);
            for (const auto& g : cycle) {
                if (g.arity() == 1) { // tolerated: 1q gate inside a hard layer is easy cargo
                    replaced.push_back(g);
                    continue;
                }
                const auto options = supported_twirl_set(g);
                if (options.size() < 2)
                    throw UnsupportedCycleError(
                        std::string("randomized_compile: hard cycle gate ") + gate_name(g.kind) +
                        " does not carry a Pauli frame");
                const auto pick = options[stream.integer(options.size())];
                auto push = push_pauli_through(g, pick.first, pick.second);
                twirl[static_cast<std::size_t>(g.qubits[0])] = pick.first;
                twirl[static_cast<std::size_t>(g.qubits[1])] = pick.second;
                in_cycle[static_cast<std::size_t>(g.qubits[0])] = true;
                in_cycle[static_cast<std::size_t>(g.qubits[1])] = true;
                replaced.push_back(push->replacement);
                corrections[static_cast<std::size_t>(g.qubits[0])] = push->corr0;
                corrections[static_cast<std::size_t>(g.qubits[1])] = push->corr1;
            }
            for (int q = 0; q < circ.width; ++q) {
                if (in_cycle[static_cast<std::size_t>(q)]) continue;
                const int p = static_cast<int>(stream.integer(4));
                twirl[static_cast<std::size_t>(q)] = p;
                corrections[static_cast<std::size_t>(q)] = pauli_1q(p); // self-inverse
            }

            // Materialize: pending corrections, the original easy gates (if
            // any), and the fresh twirl, all in one easy layer.
            std::vector<Eigen::Matrix2cd> frame = pending;
            std::vector<Gate> merged_layer;
            {
                std::vector<const Gate*> by_qubit(static_cast<std::size_t>(circ.width), nullptr);
                if (easy_orig)
                    for (const auto& g : *easy_orig)
                        by_qubit[static_cast<std::size_t>(g.qubits[0])] = &g;
                for (int q = 0; q < circ.width; ++q) {
                    Eigen::Matrix2cd u = frame[static_cast<std::size_t>(q)];
                    if (by_qubit[static_cast<std::size_t>(q)])
                        u = Eigen::Matrix2cd(gate_matrix(*by_qubit[static_cast<std::size_t>(q)])) * u;
                    u = pauli_1q(twirl[static_cast<std::size_t>(q)]) * u;
                    if (is_identity2(u)) continue;
                    merged_layer.push_back(make_u1q(q, u));
                }
            }
            if (!merged_layer.empty()) rc.append_layer(std::move(merged_layer));
            rc.append_layer(replaced);
            pending = corrections;
            pending_any = true;
            li = hard_index + 1;
        }
        if (pending_any) {
            bool any = false;
            for (const auto& u : pending)
                if (!is_identity2(u)) any = true;
            if (any) {
                std::vector<Gate> tail;
                for (int q = 0; q < circ.width; ++q)
                    if (!is_identity2(pending[static_cast<std::size_t>(q)]))
                        tail.push_back(make_u1q(q, pending[static_cast<std::size_t>(q)]));
                rc.append_layer(std::move(tail));
            }
        }
        rc.validate();
        out.push_back(std::move(rc));
    }
    return out;
}

namespace {

// Multiplexed rotation: R_axis(angles[y]) on `target` controlled on the
// computational value y of `controls` (controls[0] = most significant).
void emit_ucr(Circuit& c, GateKind axis, const std::vector<double>& angles,
              const std::vector<int>& controls, int target) {
    if (controls.empty()) {
        if (std::abs(angles[0]) > 1e-14) c.append_gate(make_gate(axis, {target}, {angles[0]}));
        return;
    }
    bool all_zero = true;
    for (double a : angles)
        if (std::abs(a) > 1e-14) all_zero = false;
    if (all_zero) return;

    const std::size_t half = angles.size() / 2;
    std::vector<double> lo(half), hi(half);
    for (std::size_t i = 0; i < half; ++i) {
        lo[i] = (angles[i] + angles[i + half]) / 2.0;
        hi[i] = (angles[i] - angles[i + half]) / 2.0;
    }
    std::vector<int> rest(controls.begin() + 1, controls.end());
    emit_ucr(c, axis, lo, rest, target);
    c.append_gate(make_gate(GateKind::CX, {controls[0], target}));
    emit_ucr(c, axis, hi, rest, target);
    c.append_gate(make_gate(GateKind::CX, {controls[0], target}));
}

} // namespace

Circuit synthesize_state(const Vec& target_state, int n) {
    if (n > kSynthesisWidthCap)
        throw CapacityError("synthesize_state: width " + std::to_string(n) + " exceeds cap " +
                            std::to_string(kSynthesisWidthCap));
    const Eigen::Index d = Eigen::Index(1) << n;
    if (target_state.size() != d) throw ValidationError("synthesize_state: dimension mismatch");
    if (std::abs(target_state.norm() - 1.0) > 1e-9)
        throw ValidationError("synthesize_state: state not normalized");

    // Disentangle qubits n-1 .. 0 from the target amplitudes; the prep
    // circuit applies the recorded multiplexed rotations in reverse.
    std::vector<std::vector<double>> ry_table(static_cast<std::size_t>(n)),
        rz_table(static_cast<std::size_t>(n));
    std::vector<cd> amp(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) amp[static_cast<std::size_t>(i)] = target_state(i);
    for (int q = n - 1; q >= 0; --q) {
        const std::size_t m = amp.size() / 2;
        std::vector<cd> next(m);
        std::vector<double> betas(m), lambdas(m);
        for (std::size_t y = 0; y < m; ++y) {
            const cd a0 = amp[2 * y], a1 = amp[2 * y + 1];
            const double r = std::hypot(std::abs(a0), std::abs(a1));
            if (r < 1e-15) {
                betas[y] = 0.0;
                lambdas[y] = 0.0;
                next[y] = 0.0;
                continue;
            }
            const double arg0 = std::abs(a0) > 1e-15 ? std::arg(a0) : 0.0;
            const double arg1 = std::abs(a1) > 1e-15 ? std::arg(a1) : 0.0;
            betas[y] = 2.0 * std::atan2(std::abs(a1), std::abs(a0));
            lambdas[y] = arg1 - arg0;
            next[y] = std::polar(r, (arg0 + arg1) / 2.0);
        }
        ry_table[static_cast<std::size_t>(q)] = std::move(betas);
        rz_table[static_cast<std::size_t>(q)] = std::move(lambdas);
        amp = std::move(next);
    }

    Circuit c;
    c.width = n;
    for (int q = 0; q < n; ++q) {
        std::vector<int> controls(static_cast<std::size_t>(q));
        for (int k = 0; k < q; ++k) controls[static_cast<std::size_t>(k)] = k;
        emit_ucr(c, GateKind::RY, ry_table[static_cast<std::size_t>(q)], controls, q);
        emit_ucr(c, GateKind::RZ, rz_table[static_cast<std::size_t>(q)], controls, q);
    }
    return c;
}

Vec TargetSpectrum::eigenvector(Eigen::Index slot) const {
    if (diagonal) {
        Vec v = Vec::Zero(dim());
        v(static_cast<Eigen::Index>(basis_index[static_cast<std::size_t>(slot)])) = 1.0;
        return v;
    }
    return vectors.col(slot);
}

TargetSpectrum spectrum_of(const Circuit& target, int dense_cap) {
    target.validate();
    TargetSpectrum s;
    s.width = target.width;
    if (circuit_is_diagonal(target)) {
        s.diagonal = true;
        const auto phases = compose_diagonal_phases(target);
        const std::size_t d = phases.size();
        std::vector<std::size_t> order(d);
        for (std::size_t i = 0; i < d; ++i) order[i] = i;
        std::vector<double> wrapped(d);
        for (std::size_t i = 0; i < d; ++i) wrapped[i] = wrap_angle(phases[i]);
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            if (wrapped[i] != wrapped[j]) return wrapped[i] < wrapped[j];
            return i < j;
        });
        s.basis_index = order;
        s.phases.resize(d);
        for (std::size_t i = 0; i < d; ++i) s.phases[i] = wrapped[order[i]];
        return s;
    }
    if (target.width > dense_cap)
        throw CapacityError("spectrum_of: non-diagonal target of width " +
                            std::to_string(target.width) + " exceeds dense cap " +
                            std::to_string(dense_cap));
    const auto pairs = eig_unitary(UnitaryMatrix(compose_unitary(target, dense_cap)));
    s.diagonal = false;
    s.vectors = Mat(s.dim(), s.dim());
    s.phases.resize(static_cast<std::size_t>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        s.phases[i] = pairs[i].phase;
        s.vectors.col(static_cast<Eigen::Index>(i)) = pairs[i].vector;
    }
    return s;
}

namespace {

std::string bit_label(std::size_t x, int n) {
    std::string out(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q)
        if ((x >> (n - 1 - q)) & 1) out[static_cast<std::size_t>(q)] = '1';
    return out;
}

} // namespace

InitialStateSpec make_pair_spec(const TargetSpectrum& s, Eigen::Index a, Eigen::Index b) {
    InitialStateSpec spec;
    spec.a = a;
    spec.b = b;
    const double inv = 1.0 / std::sqrt(2.0);
    spec.ca = inv;
    spec.cb = inv;
    if (s.diagonal) {
        spec.prep = prepare_pair_state(bit_label(s.basis_index[static_cast<std::size_t>(a)], s.width),
                                       bit_label(s.basis_index[static_cast<std::size_t>(b)], s.width));
    } else {
        const Vec psi = inv * (s.eigenvector(a) + s.eigenvector(b));
        spec.prep = synthesize_state(psi / psi.norm(), s.width);
    }
    return spec;
}

InitialStateSpec make_single_spec(const TargetSpectrum& s, Eigen::Index a) {
    InitialStateSpec spec;
    spec.a = a;
    spec.b = a;
    spec.ca = 1.0;
    spec.cb = 0.0;
    if (s.diagonal) {
        const auto label = bit_label(s.basis_index[static_cast<std::size_t>(a)], s.width);
        spec.prep = prepare_pair_state(label, label);
    } else {
        spec.prep = synthesize_state(s.eigenvector(a), s.width);
    }
    return spec;
}

} // namespace csb
