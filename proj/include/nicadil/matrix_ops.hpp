#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nicadil/errors.hpp"

namespace nicadil {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Spectral norm (largest singular value).
double op_norm(const CMatrix& m);

inline double commutator_norm(const CMatrix& a, const CMatrix& b) {
    return op_norm(a * b - b * a);
}

CMatrix kron(const CMatrix& a, const CMatrix& b);

// (m + m^H)/2 together with the spectral norm of the discarded part.
struct Symmetrized {
    CMatrix matrix;
    double defect = 0.0;
};
Symmetrized hermitian_part(const CMatrix& m);

// Eigenvalue floor of the Hermitian part; `defect` records the asymmetry.
struct EigenFloor {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double herm_defect = 0.0;
};
EigenFloor eigen_floor(const CMatrix& m);

// Full Hermitian eigendecomposition (input assumed Hermitian), eigenvalues
// ascending. Falls back to an SVD route when the tridiagonal iteration
// stagnates, which happens on highly degenerate Gram matrices.
struct HermitianEig {
    Eigen::VectorXd eigenvalues;
    CMatrix eigenvectors;
};
HermitianEig hermitian_eig(const CMatrix& m);

// Deterministic RNG stream; one per sample so reductions are order-free.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    Complex gaussian();
    int uniform_int(int lo, int hi);

    // Haar-distributed unitary via QR of a complex Ginibre matrix.
    CMatrix haar_unitary(Eigen::Index n);
    // Haar unitary scaled by a uniform radius in [0, 1]: a random contraction.
    CMatrix random_contraction(Eigen::Index n);
    // Random matrix with independent complex Gaussian entries.
    CMatrix ginibre(Eigen::Index rows, Eigen::Index cols);
    // Random PSD matrix g^H g, normalized to unit spectral norm when nonzero.
    CMatrix random_psd(Eigen::Index n);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

// Derives an independent stream for a subtask (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace nicadil
