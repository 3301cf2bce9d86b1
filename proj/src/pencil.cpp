#include "csb/pencil.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace csb {

void Signal::validate() const {
    if (values.size() < 8) throw ValidationError("Signal: need at least 8 points");
    if (summed_components < 1) throw ValidationError("Signal: bad component count");
    const double hi = static_cast<double>(summed_components);
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("Signal: non-finite value");
        if (v < -1e-9 || v > hi + 1e-9)
            throw ValidationError("Signal: value " + std::to_string(v) + " outside [0, " +
                                  std::to_string(summed_components) + "]");
    }
}

ModeSet estimate_modes(const Signal& s, int max_modes, double sv_threshold) {
    s.validate();
    if (max_modes < 1 || max_modes > 6)
        throw ValidationError("estimate_modes: max_modes must be in [1, 6]");
    if (!(sv_threshold > 0.0 && sv_threshold < 1.0))
        throw ValidationError("estimate_modes: sv_threshold must be in (0, 1)");

    const int len = static_cast<int>(s.values.size());
    const int pencil = len / 2;
    const int rows = len - pencil;
    const int cols = pencil + 1;

    Eigen::MatrixXd hankel(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) hankel(i, j) = s.values[static_cast<std::size_t>(i + j)];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(hankel, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();

    ModeSet out;
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    if (sv(0) <= 1e-12) {
        out.diagnostic = "signal below noise floor; no singular value retained";
        return out;
    }
    int keep = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > sv_threshold * sv(0)) ++keep;
    keep = std::min({keep, max_modes, pencil});
    out.retained = keep;

    const Eigen::MatrixXd v = svd.matrixV().leftCols(keep);
    const Eigen::MatrixXd v1 = v.topRows(pencil);
    const Eigen::MatrixXd v2 = v.bottomRows(pencil);
    // z_k are the eigenvalues of pinv(V1) V2 on the signal subspace.
    const Eigen::MatrixXd a = v1.colPivHouseholderQr().solve(v2);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);

    std::vector<cd> zs;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const cd z = es.eigenvalues()(i);
        if (std::abs(z) > 1.0 + kUnitCircleTol) {
            out.diagnostic = "discarded mode outside unit disc tolerance";
            continue;
        }
        zs.push_back(z);
    }
    if (zs.empty()) {
        if (out.diagnostic.empty()) out.diagnostic = "no stable mode found";
        return out;
    }

    Mat vander(len, static_cast<Eigen::Index>(zs.size()));
    for (std::size_t k = 0; k < zs.size(); ++k) {
        cd p = 1.0;
        for (int l = 0; l < len; ++l) {
            vander(l, static_cast<Eigen::Index>(k)) = p;
            p *= zs[k];
        }
    }
    Vec rhs(len);
    for (int l = 0; l < len; ++l) rhs(l) = s.values[static_cast<std::size_t>(l)];
    const Vec coeff = vander.colPivHouseholderQr().solve(rhs);

    for (std::size_t k = 0; k < zs.size(); ++k)
        out.modes.push_back({zs[k], coeff(static_cast<Eigen::Index>(k))});
    std::sort(out.modes.begin(), out.modes.end(), [](const Mode& x, const Mode& y) {
        const double ax = std::abs(x.c), ay = std::abs(y.c);
        if (ax != ay) return ax > ay;
        return std::arg(x.z) < std::arg(y.z);
    });
    out.residual = reconstruct_residual(s, out);
    return out;
}

double reconstruct_residual(const Signal& s, const ModeSet& m) {
    double acc = 0.0;
    for (std::size_t l = 0; l < s.values.size(); ++l) {
        cd fit = 0.0;
        for (const auto& mode : m.modes) fit += mode.c * std::pow(mode.z, static_cast<double>(l));
        acc += std::norm(cd(s.values[l], 0.0) - fit);
    }
    return std::sqrt(acc / static_cast<double>(s.values.size()));
}

} // namespace csb
