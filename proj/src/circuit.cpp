#include "csb/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace csb {

namespace {
constexpr double kPi = std::numbers::pi;
const cd kI{0.0, 1.0};
} // namespace

const char* gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::Id: return "id";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::U1Q: return "u1q";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::ZZ: return "zz";
    case GateKind::Fsim: return "fsim";
    }
    return "?";
}

namespace {

int gate_arity_of(GateKind kind) {
    switch (kind) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::ZZ:
    case GateKind::Fsim: return 2;
    default: return 1;
    }
}

int param_count_of(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::ZZ: return 1;
    case GateKind::Fsim: return 2;
    default: return 0;
    }
}

} // namespace

Gate make_gate(GateKind kind, std::vector<int> qubits, std::vector<double> params) {
    Gate g;
    g.kind = kind;
    g.qubits = std::move(qubits);
    g.params = std::move(params);
    if (g.arity() != gate_arity_of(kind))
        throw ValidationError(std::string("gate ") + gate_name(kind) + ": expected " +
                              std::to_string(gate_arity_of(kind)) + " qubits, got " +
                              std::to_string(g.arity()));
    if (static_cast<int>(g.params.size()) != param_count_of(kind))
        throw ValidationError(std::string("gate ") + gate_name(kind) + ": expected " +
                              std::to_string(param_count_of(kind)) + " params, got " +
                              std::to_string(g.params.size()));
    return g;
}

Gate make_u1q(int qubit, const Eigen::Matrix2cd& u) {
    if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-9)
        throw ValidationError("u1q payload is not unitary");
    Gate g;
    g.kind = GateKind::U1Q;
    g.qubits = {qubit};
    g.matrix = u;
    return g;
}

Mat gate_matrix(const Gate& g) {
    const double th = g.params.empty() ? 0.0 : g.params[0];
    switch (g.kind) {
    case GateKind::Id: return Mat::Identity(2, 2);
    case GateKind::X: {
        Mat m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }
    case GateKind::Y: {
        Mat m(2, 2);
        m << 0, -kI, kI, 0;
        return m;
    }
    case GateKind::Z: {
        Mat m(2, 2);
        m << 1, 0, 0, -1;
        return m;
    }
    case GateKind::H: {
        Mat m(2, 2);
        m << 1, 1, 1, -1;
        return m / std::sqrt(2.0);
    }
    case GateKind::S: {
        Mat m = Mat::Identity(2, 2);
        m(1, 1) = kI;
        return m;
    }
    case GateKind::Sdg: {
        Mat m = Mat::Identity(2, 2);
        m(1, 1) = -kI;
        return m;
    }
    case GateKind::T: {
        Mat m = Mat::Identity(2, 2);
        m(1, 1) = std::exp(kI * (kPi / 4));
        return m;
    }
    case GateKind::Tdg: {
        Mat m = Mat::Identity(2, 2);
        m(1, 1) = std::exp(-kI * (kPi / 4));
        return m;
    }
    case GateKind::RX: {
        Mat m(2, 2);
        m << std::cos(th / 2), -kI * std::sin(th / 2), -kI * std::sin(th / 2), std::cos(th / 2);
        return m;
    }
    case GateKind::RY: {
        Mat m(2, 2);
        m << std::cos(th / 2), -std::sin(th / 2), std::sin(th / 2), std::cos(th / 2);
        return m;
    }
    case GateKind::RZ: {
        Mat m = Mat::Zero(2, 2);
        m(0, 0) = std::exp(-kI * (th / 2));
        m(1, 1) = std::exp(kI * (th / 2));
        return m;
    }
    case GateKind::U1Q: return g.matrix;
    case GateKind::CX: {
        Mat m = Mat::Zero(4, 4);
        m(0, 0) = 1;
        m(1, 1) = 1;
        m(2, 3) = 1;
        m(3, 2) = 1;
        return m;
    }
    case GateKind::CZ: {
        Mat m = Mat::Identity(4, 4);
        m(3, 3) = -1;
        return m;
    }
    case GateKind::ZZ: {
        Mat m = Mat::Zero(4, 4);
        const cd lo = std::exp(-kI * (th / 2)), hi = std::exp(kI * (th / 2));
        m(0, 0) = lo;
        m(1, 1) = hi;
        m(2, 2) = hi;
        m(3, 3) = lo;
        return m;
    }
    case GateKind::Fsim: {
        const double phi = g.params[1];
        Mat m = Mat::Zero(4, 4);
        m(0, 0) = 1;
        m(1, 1) = std::cos(th);
        m(1, 2) = -kI * std::sin(th);
        m(2, 1) = -kI * std::sin(th);
        m(2, 2) = std::cos(th);
        m(3, 3) = std::exp(kI * phi);
        return m;
    }
    }
    throw ValidationError("unknown gate kind");
}

bool gate_is_diagonal(const Gate& g) {
    switch (g.kind) {
    case GateKind::Id:
    case GateKind::Z:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::RZ:
    case GateKind::CZ:
    case GateKind::ZZ: return true;
    case GateKind::U1Q:
        return std::abs(g.matrix(0, 1)) < 1e-15 && std::abs(g.matrix(1, 0)) < 1e-15;
    default: return false;
    }
}

std::vector<double> gate_diagonal_phases(const Gate& g) {
    if (!gate_is_diagonal(g)) throw ValidationError("gate is not diagonal");
    const Mat m = gate_matrix(g);
    std::vector<double> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = std::arg(m(i, i));
    return out;
}

void Circuit::append_layer(std::vector<Gate> gates) { layers.push_back(std::move(gates)); }

void Circuit::append_gate(const Gate& g) { layers.push_back({g}); }

std::size_t Circuit::gate_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.size();
    return n;
}

bool Circuit::layer_is_hard(std::size_t index) const {
    for (const auto& g : layers[index])
        if (g.arity() > 1) return true;
    return false;
}

void Circuit::validate() const {
    for (std::size_t li = 0; li < layers.size(); ++li) {
        std::set<int> used;
        bool has_1q = false, has_2q = false;
        for (const auto& g : layers[li]) {
            (g.arity() > 1 ? has_2q : has_1q) = true;
            for (int q : g.qubits) {
                if (q < 0 || q >= width)
                    throw ValidationError("layer " + std::to_string(li) + ": qubit " +
                                          std::to_string(q) + " out of range for width " +
                                          std::to_string(width));
                if (!used.insert(q).second)
                    throw ValidationError("layer " + std::to_string(li) + ": qubit " +
                                          std::to_string(q) + " used twice");
            }
        }
        if (has_1q && has_2q)
            throw ValidationError("layer " + std::to_string(li) +
                                  " mixes single- and multi-qubit gates");
    }
}

Mat embed_unitary(const Mat& u, const std::vector<int>& qubits, int n) {
    const int k = static_cast<int>(qubits.size());
    const Eigen::Index d = Eigen::Index(1) << n;
    Mat full = Mat::Zero(d, d);
    const int dk = 1 << k;
    // local bit j of a gate = qubit qubits[j]; qubit q is bit (n-1-q) of the index
    std::vector<int> shift(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) shift[static_cast<std::size_t>(j)] = n - 1 - qubits[static_cast<std::size_t>(j)];
    long mask = 0;
    for (int j = 0; j < k; ++j) mask |= 1L << shift[static_cast<std::size_t>(j)];
    for (long rest = 0; rest < d; ++rest) {
        if (rest & mask) continue;
        for (int a = 0; a < dk; ++a) {
            long row = rest;
            for (int j = 0; j < k; ++j)
                if (a & (1 << (k - 1 - j))) row |= 1L << shift[static_cast<std::size_t>(j)];
            for (int b = 0; b < dk; ++b) {
                long col = rest;
                for (int j = 0; j < k; ++j)
                    if (b & (1 << (k - 1 - j))) col |= 1L << shift[static_cast<std::size_t>(j)];
                full(row, col) = u(a, b);
            }
        }
    }
    return full;
}

Mat compose_unitary(const Circuit& circ, int width_cap) {
    if (circ.width > width_cap)
        throw CapacityError("compose_unitary: width " + std::to_string(circ.width) +
                            " exceeds cap " + std::to_string(width_cap));
    const Eigen::Index d = Eigen::Index(1) << circ.width;
    Mat u = Mat::Identity(d, d);
    for (const auto& layer : circ.layers)
        for (const auto& g : layer) u = embed_unitary(gate_matrix(g), g.qubits, circ.width) * u;
    return u;
}

bool circuit_is_diagonal(const Circuit& circ) {
    for (const auto& layer : circ.layers)
        for (const auto& g : layer)
            if (!gate_is_diagonal(g)) return false;
    return true;
}

std::vector<double> compose_diagonal_phases(const Circuit& circ) {
    if (!circuit_is_diagonal(circ)) throw ValidationError("circuit is not diagonal");
    const std::size_t d = std::size_t(1) << circ.width;
    std::vector<double> phases(d, 0.0);
    for (const auto& layer : circ.layers) {
        for (const auto& g : layer) {
            const auto local = gate_diagonal_phases(g);
            if (g.arity() == 1) {
                const int sh = circ.width - 1 - g.qubits[0];
                for (std::size_t i = 0; i < d; ++i) phases[i] += local[(i >> sh) & 1];
            } else {
                const int sa = circ.width - 1 - g.qubits[0];
                const int sb = circ.width - 1 - g.qubits[1];
                for (std::size_t i = 0; i < d; ++i)
                    phases[i] += local[(((i >> sa) & 1) << 1) | ((i >> sb) & 1)];
            }
        }
    }
    return phases;
}

Vec zero_state(int n) {
    Vec psi = Vec::Zero(Eigen::Index(1) << n);
    psi(0) = 1.0;
    return psi;
}

void apply_to_statevector(const Circuit& circ, Vec& psi) {
    const int n = circ.width;
    const Eigen::Index d = psi.size();
    if (d != (Eigen::Index(1) << n)) throw ValidationError("statevector size mismatch");
    for (const auto& layer : circ.layers) {
        for (const auto& g : layer) {
            const Mat u = gate_matrix(g);
            if (g.arity() == 1) {
                const Eigen::Index s = Eigen::Index(1) << (n - 1 - g.qubits[0]);
                for (Eigen::Index base = 0; base < d; ++base) {
                    if (base & s) continue;
                    const cd a = psi(base), b = psi(base + s);
                    psi(base) = u(0, 0) * a + u(0, 1) * b;
                    psi(base + s) = u(1, 0) * a + u(1, 1) * b;
                }
            } else {
                const Eigen::Index s0 = Eigen::Index(1) << (n - 1 - g.qubits[0]);
                const Eigen::Index s1 = Eigen::Index(1) << (n - 1 - g.qubits[1]);
                for (Eigen::Index base = 0; base < d; ++base) {
                    if ((base & s0) || (base & s1)) continue;
                    Eigen::Vector4cd v;
                    v << psi(base), psi(base + s1), psi(base + s0), psi(base + s0 + s1);
                    Eigen::Vector4cd w = u * v;
                    psi(base) = w(0);
                    psi(base + s1) = w(1);
                    psi(base + s0) = w(2);
                    psi(base + s0 + s1) = w(3);
                }
            }
        }
    }
}

double wrap_angle(double a) {
    a = std::fmod(a, 2 * kPi);
    if (a <= -kPi) a += 2 * kPi;
    if (a > kPi) a -= 2 * kPi;
    return a;
}

double phase_invariant_distance(const Mat& a, const Mat& b) {
    const cd ip = (b.adjoint() * a).trace();
    cd phase = std::abs(ip) < 1e-300 ? cd(1.0, 0.0) : ip / std::abs(ip);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

} // namespace csb
