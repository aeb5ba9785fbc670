#include "cfs/geometry.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace cfs {

SpinProjection spin_projection(const OperatorPoint& x, const OperatorPoint& y) {
    if (x.n != 1 || y.n != 1) throw NotSpinOneError("spin_projection is defined for n = 1");
    if (x.f != y.f) throw Error("operands disagree on f");

    Eigen::SelfAdjointEigenSolver<MatrixC> es(x.matrix);
    if (es.info() != Eigen::Success) throw EigensolverError("eigensolver failed on reference");
    const int f = x.f;
    const double nu_plus = es.eigenvalues()[f - 1];
    const double nu_minus = es.eigenvalues()[0];
    if (f > 2 && std::abs(nu_minus) < 1e-9) {
        std::ostringstream os;
        os << "reference image is not two-dimensional (nu- = " << nu_minus << ")";
        throw DegenerateImageError(os.str());
    }

    // Spin-space basis: descending eigenvalues, nu+ first.
    MatrixC basis(f, 2);
    basis.col(0) = es.eigenvectors().col(f - 1);
    basis.col(1) = es.eigenvectors().col(0);
    const Eigen::Matrix2cd block = basis.adjoint() * y.matrix * basis;

    SpinProjection proj;
    proj.ref_tau = nu_plus - nu_minus;
    proj.y0 = block.trace().real();
    proj.y1 = (block * pauli(1)).trace().real();
    proj.y2 = (block * pauli(2)).trace().real();
    proj.y3 = (block * pauli(3)).trace().real();
    return proj;
}

CausalClass cone_classify(const SpinProjection& proj) {
    const double tau = proj.ref_tau;
    const double transverse = (tau * tau - 1.0) * (proj.y1 * proj.y1 + proj.y2 * proj.y2);
    const double axial = proj.y3 + proj.y0 * tau;
    const double size = proj.y0 * proj.y0 + proj.y1 * proj.y1 + proj.y2 * proj.y2 +
                        proj.y3 * proj.y3;
    if (size < 1e-24) return CausalClass::Spacelike;  // annihilated: all lambda = 0

    const double gap = transverse - axial * axial;
    const double scale = std::max(transverse + axial * axial, 1e-300);
    if (gap > 1e-9 * scale) return CausalClass::Spacelike;
    if (gap < -1e-9 * scale) return CausalClass::Timelike;
    return CausalClass::Lightlike;
}

std::vector<PlotRow> plot_rows(const Configuration& config, int ref_index, bool rescale,
                               double exponent) {
    config.validate();
    if (config.n() != 1) throw NotSpinOneError("plot_rows is defined for n = 1");
    if (ref_index < 0 || ref_index >= config.size()) throw Error("ref_index out of range");

    const OperatorPoint& ref = config.points[ref_index];
    std::vector<PlotRow> rows;
    rows.reserve(config.size());
    for (int j = 0; j < config.size(); ++j) {
        const SpinProjection proj = spin_projection(ref, config.points[j]);
        const double tau = proj.ref_tau;

        PlotRow row;
        row.point_index = j;
        row.hat_y0 = proj.y3 + proj.y0 * tau;
        row.hat_r = std::sqrt(std::max(tau * tau - 1.0, 0.0)) *
                    std::hypot(proj.y1, proj.y2);
        row.causal_class = cone_classify(proj);
        row.weight = config.weights[j];
        row.is_reference = (j == ref_index);
        if (rescale) {
            const double denom = std::pow(std::abs(row.hat_y0), exponent);
            if (std::abs(row.hat_y0) < 1e-12) {
                row.singular = true;
            } else {
                row.hat_y0 /= denom;
                row.hat_r /= denom;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void write_plot_rows(std::ostream& out, const std::vector<PlotRow>& rows) {
    out << "index hat_y0 hat_r class weight is_reference singular\n";
    out.precision(17);
    for (const auto& r : rows) {
        out << r.point_index << ' ' << r.hat_y0 << ' ' << r.hat_r << ' '
            << to_string(r.causal_class) << ' ' << r.weight << ' '
            << (r.is_reference ? 1 : 0) << ' ' << (r.singular ? 1 : 0) << '\n';
    }
}

}  // namespace cfs
