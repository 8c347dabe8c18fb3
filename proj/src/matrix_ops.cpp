#include "nicadil/matrix_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nicadil {

double op_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Symmetrized hermitian_part(const CMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeMismatch("hermitian_part of a non-square matrix");
    Symmetrized out;
    out.matrix = 0.5 * (m + m.adjoint());
    out.defect = op_norm(m - out.matrix);
    return out;
}

EigenFloor eigen_floor(const CMatrix& m) {
    EigenFloor out;
    auto sym = hermitian_part(m);
    out.herm_defect = sym.defect;
    if (m.size() == 0) return out;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sym.matrix, Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success) {
        out.min_eigenvalue = es.eigenvalues().minCoeff();
        out.max_eigenvalue = es.eigenvalues().maxCoeff();
    } else {
        const auto eig = hermitian_eig(sym.matrix);
        out.min_eigenvalue = eig.eigenvalues.minCoeff();
        out.max_eigenvalue = eig.eigenvalues.maxCoeff();
    }
    return out;
}

HermitianEig hermitian_eig(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    if (es.info() == Eigen::Success) return {es.eigenvalues(), es.eigenvectors()};

    // The QL iteration on the tridiagonal form can stagnate when the spectrum
    // is very degenerate. The singular vectors of a Hermitian matrix are an
    // eigenbasis up to sign; Rayleigh quotients recover the eigenvalues.
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU);
    const Eigen::Index n = m.rows();
    const CMatrix u = svd.matrixU();
    Eigen::VectorXd evals(n);
    for (Eigen::Index i = 0; i < n; ++i)
        evals(i) = std::real(Complex((u.col(i).adjoint() * (m * u.col(i)))(0, 0)));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return evals(a) < evals(b); });
    HermitianEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues(i) = evals(order[static_cast<std::size_t>(i)]);
        out.eigenvectors.col(i) = u.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

double Rng::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(engine_);
}

Complex Rng::gaussian() {
    std::normal_distribution<double> dist(0.0, 1.0);
    const double re = dist(engine_);
    const double im = dist(engine_);
    return Complex(re, im) / std::sqrt(2.0);
}

int Rng::uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return dist(engine_);
}

CMatrix Rng::ginibre(Eigen::Index rows, Eigen::Index cols) {
    CMatrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = gaussian();
    return g;
}

CMatrix Rng::haar_unitary(Eigen::Index n) {
    const CMatrix g = ginibre(n, n);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is Haar.
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0) ? d / a : Complex(1, 0);
    }
    return q;
}

CMatrix Rng::random_contraction(Eigen::Index n) {
    return uniform() * haar_unitary(n);
}

CMatrix Rng::random_psd(Eigen::Index n) {
    const CMatrix g = ginibre(n, n);
    CMatrix p = g.adjoint() * g;
    const double norm = op_norm(p);
    if (norm > 0) p /= norm;
    return p;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace nicadil
