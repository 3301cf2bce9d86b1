#include "csb/qcore.hpp"

#include <algorithm>
#include <cmath>

#include "csb/noise.hpp"

namespace csb {

namespace {

bool is_power_of_two(Eigen::Index d) { return d > 0 && (d & (d - 1)) == 0; }

void require_power_of_two(Eigen::Index d, const char* what) {
    if (!is_power_of_two(d)) throw ValidationError(std::string(what) + ": dimension must be a power of two");
}

} // namespace

UnitaryMatrix::UnitaryMatrix(Mat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw ValidationError("UnitaryMatrix: not square");
    require_power_of_two(m_.rows(), "UnitaryMatrix");
    const double dev = (m_ * m_.adjoint() - Mat::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
        throw ValidationError("UnitaryMatrix: U U^dag deviates from identity by " + std::to_string(dev));
}

DensityMatrix::DensityMatrix(Mat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw ValidationError("DensityMatrix: not square");
    require_power_of_two(m_.rows(), "DensityMatrix");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - cd(1.0)) > 1e-10) throw ValidationError("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::pure(const Vec& psi) {
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-9) throw ValidationError("DensityMatrix::pure: state not normalized");
    return DensityMatrix(psi * psi.adjoint());
}

KrausSet::KrausSet(std::vector<Mat> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw ValidationError("KrausSet: empty");
    const Eigen::Index d = ops_.front().rows();
    require_power_of_two(d, "KrausSet");
    Mat sum = Mat::Zero(d, d);
    for (const auto& e : ops_) {
        if (e.rows() != d || e.cols() != d) throw ValidationError("KrausSet: inconsistent dims");
        sum += e.adjoint() * e;
    }
    if ((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("KrausSet: not trace preserving");
}

KrausSet KrausSet::identity(Eigen::Index dim) { return KrausSet({Mat::Identity(dim, dim)}); }

KrausSet KrausSet::from_unitary(const Mat& u) { return KrausSet({u}); }

KrausSet KrausSet::compose_after(const KrausSet& other) const {
    std::vector<Mat> out;
    for (const auto& b : other.ops_)
        for (const auto& a : ops_) {
            Mat p = b * a;
            if (p.cwiseAbs().maxCoeff() > 1e-14) out.push_back(std::move(p));
        }
    return KrausSet(std::move(out));
}

PTM::PTM(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw ValidationError("PTM: not square");
    Eigen::Index d2 = m_.rows();
    Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(d2))));
    if (d * d != d2 || !is_power_of_two(d)) throw ValidationError("PTM: dimension must be 4^n");
    if (std::abs(m_(0, 0) - 1.0) > 1e-10)
        throw ValidationError("PTM: entry (0,0) must be 1 for a trace-preserving map");
    for (Eigen::Index j = 1; j < d2; ++j)
        if (std::abs(m_(0, j)) > 1e-10)
            throw ValidationError("PTM: first row must be (1,0,...,0) for a trace-preserving map");
}

std::vector<Mat> pauli_basis(int n) {
    std::vector<Mat> one(4, Mat(2, 2));
    one[0] << 1, 0, 0, 1;
    one[1] << 0, 1, 1, 0;
    one[2] << 0, cd(0, -1), cd(0, 1), 0;
    one[3] << 1, 0, 0, -1;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (auto& p : one) p *= inv_sqrt2;

    std::vector<Mat> basis = {Mat::Ones(1, 1)};
    for (int q = 0; q < n; ++q) {
        std::vector<Mat> next;
        next.reserve(basis.size() * 4);
        for (const auto& b : basis)
            for (const auto& p : one) {
                Mat k(b.rows() * 2, b.cols() * 2);
                for (Eigen::Index i = 0; i < b.rows(); ++i)
                    for (Eigen::Index j = 0; j < b.cols(); ++j)
                        k.block(2 * i, 2 * j, 2, 2) = b(i, j) * p;
                next.push_back(std::move(k));
            }
        basis = std::move(next);
    }
    return basis;
}

std::vector<EigenPair> eig_unitary(const UnitaryMatrix& u) {
    const Mat& m = u.matrix();
    const Eigen::Index d = m.rows();
    const Mat a = (m + m.adjoint()) / 2.0;
    const Mat b = (m - m.adjoint()) / cd(0.0, 2.0);

    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    Mat vecs = es.eigenvectors();
    Eigen::VectorXd cosv = es.eigenvalues();

    // Split each cos-cluster with the commuting sine part; members of a
    // cluster share cos(lambda) but may have opposite-sign phases.
    std::vector<EigenPair> pairs;
    Eigen::Index start = 0;
    const double cluster_tol = 1e-7;
    while (start < d) {
        Eigen::Index stop = start + 1;
        while (stop < d && std::abs(cosv(stop) - cosv(start)) < cluster_tol) ++stop;
        const Eigen::Index k = stop - start;
        Mat v = vecs.middleCols(start, k);
        if (k > 1) {
            Mat sub = v.adjoint() * b * v;
            sub = (sub + sub.adjoint()) / 2.0;
            Eigen::SelfAdjointEigenSolver<Mat> es2(sub);
            v = v * es2.eigenvectors();
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            EigenPair p;
            p.vector = v.col(c);
            const cd rayleigh = p.vector.adjoint().dot((m * p.vector).eval()) /
                                p.vector.squaredNorm();
            p.phase = std::arg(rayleigh);
            pairs.push_back(std::move(p));
        }
        start = stop;
    }

    for (auto& p : pairs) {
        p.vector.normalize();
        Eigen::Index first = 0;
        while (first < d && std::abs(p.vector(first)) <= 1e-9) ++first;
        if (first < d) p.vector *= std::polar(1.0, -std::arg(p.vector(first)));
        const double residual =
            (m * p.vector - std::polar(1.0, p.phase) * p.vector).norm();
        if (residual > 1e-9)
            throw ValidationError("eig_unitary: eigenvector residual " + std::to_string(residual));
    }

    std::sort(pairs.begin(), pairs.end(), [](const EigenPair& x, const EigenPair& y) {
        if (x.phase != y.phase) return x.phase < y.phase;
        for (Eigen::Index i = 0; i < x.vector.size(); ++i) {
            const cd xi = x.vector(i), yi = y.vector(i);
            if (xi.real() != yi.real()) return xi.real() < yi.real();
            if (xi.imag() != yi.imag()) return xi.imag() < yi.imag();
        }
        return false;
    });
    return pairs;
}

std::vector<EigenPair> eig_unitary_checked(const Mat& m) {
    const double dev = (m * m.adjoint() - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-8)
        throw ValidationError("eig_unitary: input deviates from unitarity by " + std::to_string(dev));
    return eig_unitary(UnitaryMatrix(m));
}

PTM ptm_of_kraus(const KrausSet& kraus) {
    const Eigen::Index d = kraus.dim();
    int n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    const auto basis = pauli_basis(n);
    const Eigen::Index d2 = d * d;

    Mat superop = Mat::Zero(d2, d2);
    for (const auto& e : kraus.ops()) {
        Mat ec = e.conjugate();
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                superop.block(i * d, j * d, d, d) += ec(i, j) * e;
    }
    Mat bmat(d2, d2);
    for (Eigen::Index j = 0; j < d2; ++j)
        bmat.col(j) = Eigen::Map<const Vec>(basis[static_cast<std::size_t>(j)].data(), d2);
    Mat r = bmat.adjoint() * superop * bmat;
    if (r.imag().cwiseAbs().maxCoeff() > 1e-9)
        throw ValidationError("ptm_of_kraus: imaginary residue in PTM");
    return PTM(r.real());
}

PTM ptm_of_circuit(const Circuit& circ, const NoiseModel* noise, int width_cap) {
    if (circ.width > width_cap)
        throw CapacityError("ptm_of_circuit: width " + std::to_string(circ.width) +
                            " exceeds dense PTM cap " + std::to_string(width_cap));
    circ.validate();
    const Eigen::Index d2 = Eigen::Index(1) << (2 * circ.width);
    Eigen::MatrixXd total = Eigen::MatrixXd::Identity(d2, d2);
    const auto ops = compile_noisy_ops(circ, noise);
    for (const auto& op : ops) {
        std::vector<Mat> kraus;
        for (const auto& e : op.kraus_ops()) kraus.push_back(embed_unitary(e, op.qubits(), circ.width));
        total = ptm_of_kraus(KrausSet(std::move(kraus))).matrix() * total;
    }
    return PTM(std::move(total));
}

std::vector<cd> channel_eigenvalues(const PTM& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.matrix(), /*computeEigenvectors=*/false);
    std::vector<cd> vals(static_cast<std::size_t>(m.dim()));
    for (Eigen::Index i = 0; i < m.dim(); ++i) vals[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    std::sort(vals.begin(), vals.end(), [](const cd& x, const cd& y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax > ay;
        return std::arg(x) < std::arg(y);
    });
    return vals;
}

double process_fidelity(const PTM& ideal, const PTM& noisy) {
    if (ideal.dim() != noisy.dim()) throw ValidationError("process_fidelity: dimension mismatch");
    const double f = (ideal.matrix().transpose() * noisy.matrix()).trace() /
                     static_cast<double>(ideal.dim());
    return std::clamp(f, 0.0, 1.0);
}

double average_gate_fidelity(double process_fid, Eigen::Index d) {
    if (process_fid < 0.0 || process_fid > 1.0)
        throw ValidationError("average_gate_fidelity: f outside [0,1]");
    if (d < 2) throw ValidationError("average_gate_fidelity: d must be >= 2");
    return (static_cast<double>(d) * process_fid + 1.0) / (static_cast<double>(d) + 1.0);
}

double stochastic_fidelity_exact(const PTM& noisy) {
    const auto vals = channel_eigenvalues(noisy);
    double s = 0.0;
    for (const auto& z : vals) s += std::norm(z);
    return std::sqrt(s / static_cast<double>(noisy.dim()));
}

Eigen::VectorXd pauli_vector(const Mat& op, int n) {
    const auto basis = pauli_basis(n);
    Eigen::VectorXd r(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const cd t = (basis[i].adjoint() * op).trace();
        r(static_cast<Eigen::Index>(i)) = t.real();
    }
    return r;
}

DensityState::DensityState(int n) : n_(n) {
    const Eigen::Index d = Eigen::Index(1) << n;
    rho_ = Mat::Zero(d, d);
    rho_(0, 0) = 1.0;
}

DensityState DensityState::from_density(const Mat& rho, int n) {
    DensityState s(n);
    if (rho.rows() != s.rho_.rows() || rho.cols() != s.rho_.cols())
        throw ValidationError("DensityState: dimension mismatch");
    s.rho_ = rho;
    return s;
}

void DensityState::apply_gate_unitary(const Gate& g) {
    if (g.arity() == 1) {
        apply_unitary1(Eigen::Matrix2cd(gate_matrix(g)), g.qubits[0]);
    } else {
        apply_unitary2(Eigen::Matrix4cd(gate_matrix(g)), g.qubits[0], g.qubits[1]);
    }
}

namespace {

// Insert a zero bit at position `bit` (counting from LSB) of compact index k.
inline Eigen::Index expand_index(Eigen::Index k, Eigen::Index stride) {
    return ((k & ~(stride - 1)) << 1) | (k & (stride - 1));
}

} // namespace

void DensityState::apply_unitary1(const Eigen::Matrix2cd& u, int q) {
    const Eigen::Index d = rho_.rows();
    const Eigen::Index s = Eigen::Index(1) << (n_ - 1 - q);
    cd* data = rho_.data();
    const Eigen::Matrix2cd uc = u.conjugate();
    // rho <- U rho, then rho <- rho U^dag
    for (Eigen::Index j = 0; j < d; ++j) {
        cd* col = data + j * d;
        for (Eigen::Index k = 0; k < d / 2; ++k) {
            const Eigen::Index i0 = expand_index(k, s);
            const cd a = col[i0], b = col[i0 + s];
            col[i0] = u(0, 0) * a + u(0, 1) * b;
            col[i0 + s] = u(1, 0) * a + u(1, 1) * b;
        }
    }
    for (Eigen::Index k = 0; k < d / 2; ++k) {
        const Eigen::Index j0 = expand_index(k, s);
        cd* c0 = data + j0 * d;
        cd* c1 = data + (j0 + s) * d;
        for (Eigen::Index i = 0; i < d; ++i) {
            const cd a = c0[i], b = c1[i];
            c0[i] = uc(0, 0) * a + uc(0, 1) * b;
            c1[i] = uc(1, 0) * a + uc(1, 1) * b;
        }
    }
}

void DensityState::apply_unitary2(const Eigen::Matrix4cd& u, int q0, int q1) {
    const Eigen::Index d = rho_.rows();
    const Eigen::Index s0 = Eigen::Index(1) << (n_ - 1 - q0);
    const Eigen::Index s1 = Eigen::Index(1) << (n_ - 1 - q1);
    const Eigen::Index lo = std::min(s0, s1), hi = std::max(s0, s1);
    cd* data = rho_.data();
    const Eigen::Matrix4cd uc = u.conjugate();
    auto expand2 = [lo, hi](Eigen::Index k) {
        Eigen::Index t = expand_index(k, lo);
        return expand_index(t, hi);
    };
    for (Eigen::Index j = 0; j < d; ++j) {
        cd* col = data + j * d;
        for (Eigen::Index k = 0; k < d / 4; ++k) {
            const Eigen::Index base = expand2(k);
            Eigen::Vector4cd v(col[base], col[base + s1], col[base + s0], col[base + s0 + s1]);
            Eigen::Vector4cd w = u * v;
            col[base] = w(0);
            col[base + s1] = w(1);
            col[base + s0] = w(2);
            col[base + s0 + s1] = w(3);
        }
    }
    for (Eigen::Index k = 0; k < d / 4; ++k) {
        const Eigen::Index base = expand2(k);
        cd* c00 = data + base * d;
        cd* c01 = data + (base + s1) * d;
        cd* c10 = data + (base + s0) * d;
        cd* c11 = data + (base + s0 + s1) * d;
        for (Eigen::Index i = 0; i < d; ++i) {
            const Eigen::Vector4cd v(c00[i], c01[i], c10[i], c11[i]);
            Eigen::Vector4cd w = uc * v;
            c00[i] = w(0);
            c01[i] = w(1);
            c10[i] = w(2);
            c11[i] = w(3);
        }
    }
}

void DensityState::apply_kraus1(const std::vector<Eigen::Matrix2cd>& ops, int q) {
    // Fused superoperator on the (row bit, column bit) quadruple.
    Eigen::Matrix4cd s4 = Eigen::Matrix4cd::Zero();
    for (const auto& e : ops) {
        const Eigen::Matrix2cd ec = e.conjugate();
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) s4(2 * r + c, 2 * a + b) += e(r, a) * ec(c, b);
    }
    const Eigen::Index d = rho_.rows();
    const Eigen::Index s = Eigen::Index(1) << (n_ - 1 - q);
    cd* data = rho_.data();
    for (Eigen::Index kc = 0; kc < d / 2; ++kc) {
        const Eigen::Index j0 = expand_index(kc, s);
        cd* c0 = data + j0 * d;
        cd* c1 = data + (j0 + s) * d;
        for (Eigen::Index kr = 0; kr < d / 2; ++kr) {
            const Eigen::Index i0 = expand_index(kr, s);
            const Eigen::Vector4cd v(c0[i0], c1[i0], c0[i0 + s], c1[i0 + s]);
            const Eigen::Vector4cd w = s4 * v;
            c0[i0] = w(0);
            c1[i0] = w(1);
            c0[i0 + s] = w(2);
            c1[i0 + s] = w(3);
        }
    }
}

void DensityState::apply_kraus2(const std::vector<Eigen::Matrix4cd>& ops, int q0, int q1) {
    Mat out = Mat::Zero(rho_.rows(), rho_.cols());
    DensityState tmp(n_);
    for (const auto& e : ops) {
        tmp.rho_ = rho_;
        // E rho E^dag via the generic two-sided multiply (E need not be unitary)
        const Eigen::Index d = rho_.rows();
        const Eigen::Index s0 = Eigen::Index(1) << (n_ - 1 - q0);
        const Eigen::Index s1 = Eigen::Index(1) << (n_ - 1 - q1);
        const Eigen::Index lo = std::min(s0, s1), hi = std::max(s0, s1);
        auto expand2 = [lo, hi](Eigen::Index k) { return expand_index(expand_index(k, lo), hi); };
        cd* data = tmp.rho_.data();
        const Eigen::Matrix4cd ec = e.conjugate();
        for (Eigen::Index j = 0; j < d; ++j) {
            cd* col = data + j * d;
            for (Eigen::Index k = 0; k < d / 4; ++k) {
                const Eigen::Index base = expand2(k);
                Eigen::Vector4cd v(col[base], col[base + s1], col[base + s0], col[base + s0 + s1]);
                Eigen::Vector4cd w = e * v;
                col[base] = w(0);
                col[base + s1] = w(1);
                col[base + s0] = w(2);
                col[base + s0 + s1] = w(3);
            }
        }
        for (Eigen::Index k = 0; k < d / 4; ++k) {
            const Eigen::Index base = expand2(k);
            cd* c00 = data + base * d;
            cd* c01 = data + (base + s1) * d;
            cd* c10 = data + (base + s0) * d;
            cd* c11 = data + (base + s0 + s1) * d;
            for (Eigen::Index i = 0; i < d; ++i) {
                const Eigen::Vector4cd v(c00[i], c01[i], c10[i], c11[i]);
                Eigen::Vector4cd w = ec * v;
                c00[i] = w(0);
                c01[i] = w(1);
                c10[i] = w(2);
                c11[i] = w(3);
            }
        }
        out += tmp.rho_;
    }
    rho_ = std::move(out);
}

void DensityState::apply_diagonal(const Vec& phases) {
    const Eigen::Index d = rho_.rows();
    if (phases.size() != d) throw ValidationError("apply_diagonal: size mismatch");
    cd* data = rho_.data();
    for (Eigen::Index j = 0; j < d; ++j) {
        const cd pj = std::conj(phases(j));
        cd* col = data + j * d;
        for (Eigen::Index i = 0; i < d; ++i) col[i] *= phases(i) * pj;
    }
}

double DensityState::expectation_projector(const Vec& psi) const {
    const cd e = psi.adjoint().dot((rho_ * psi).eval());
    return e.real();
}

double evolve_and_measure(const DensityMatrix& rho, const Circuit& circ, const NoiseModel* noise,
                          const DensityMatrix& observable) {
    const Eigen::Index d = Eigen::Index(1) << circ.width;
    if (rho.dim() != d || observable.dim() != d)
        throw ValidationError("evolve_and_measure: width mismatch");
    // Extract |psi> from the projector observable.
    const Mat& o = observable.matrix();
    Eigen::Index best = 0;
    double best_norm = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
        const double nj = o.col(j).norm();
        if (nj > best_norm) {
            best_norm = nj;
            best = j;
        }
    }
    if (best_norm < 1e-12) throw ValidationError("evolve_and_measure: zero observable");
    Vec psi = o.col(best) / best_norm;
    psi *= std::polar(1.0, -std::arg(psi(best)));
    if ((o - psi * psi.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw ValidationError("evolve_and_measure: observable is not a rank-one projector");

    DensityState state = DensityState::from_density(rho.matrix(), circ.width);
    const auto ops = compile_noisy_ops(circ, noise);
    apply_compiled_ops(state, ops);
    const double p = state.expectation_projector(psi);
    if (p < -1e-9 || p > 1.0 + 1e-9)
        throw ValidationError("evolve_and_measure: probability " + std::to_string(p) + " out of range");
    return std::clamp(p, 0.0, 1.0);
}

} // namespace csb
