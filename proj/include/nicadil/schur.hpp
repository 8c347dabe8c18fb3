#pragma once

#include <vector>

#include "nicadil/matrix_ops.hpp"

namespace nicadil {

// Operator-valued Schur products A □ B = [A_{ij} B_{ij}] and the explicit
// lift-and-compress identity R^*(Ã B̃)R = A □ B used to certify that the
// Schur product of commuting-entry positive block matrices stays positive.

struct BlockMatrix {
    Eigen::Index m = 0;          // blocks per side
    Eigen::Index block_dim = 0;  // entry dimension
    std::vector<CMatrix> blocks; // row-major, m*m entries

    CMatrix& block(Eigen::Index i, Eigen::Index j) {
        return blocks.at(static_cast<std::size_t>(i * m + j));
    }
    const CMatrix& block(Eigen::Index i, Eigen::Index j) const {
        return blocks.at(static_cast<std::size_t>(i * m + j));
    }

    CMatrix assemble() const;
    static BlockMatrix from_matrix(const CMatrix& big, Eigen::Index m);
    // max over (i,j) of ‖block(j,i) - block(i,j)^H‖.
    double hermitian_defect() const;
};

BlockMatrix schur_product(const BlockMatrix& a, const BlockMatrix& b);

// Ã = diag(A, ..., A) on H^(m²), B̃ = [B_{ij} ⊗ I_m], both built explicitly.
CMatrix lift_block_diag(const BlockMatrix& a);
CMatrix lift_entrywise(const BlockMatrix& b);

// The 0/1 isometry R: H^(m) -> H^(m²) mapping the i-th block to copy m·i + i.
CMatrix selection_isometry(Eigen::Index m, Eigen::Index block_dim);

struct LiftCompressResult {
    CMatrix compressed;       // R^* (Ã B̃) R
    CMatrix schur;            // A □ B
    double defect = 0.0;      // ‖compressed - schur‖
    double max_commutator = 0.0;
};

inline constexpr Eigen::Index kLiftCompressSizeCap = 12;

// Verifies the lift-and-compress identity. The commutation hypothesis
// (every A entry commutes with every B entry) is checked pairwise, O(m⁴)
// products, and violations above tol raise NonCommutingEntries.
LiftCompressResult lift_compress_check(const BlockMatrix& a, const BlockMatrix& b,
                                       double tol = 1e-9,
                                       Eigen::Index size_cap = kLiftCompressSizeCap);

struct BlockPositivity {
    double min_eigenvalue = 0.0;
    double herm_defect = 0.0;
    bool positive = false;
};

// Eigenvalue floor with verdict at -tol_psd. Throws NotHermitian when the
// blockwise Hermitian defect exceeds tol.
BlockPositivity check_positive(const BlockMatrix& m, double tol_psd = 1e-8, double tol = 1e-9);

} // namespace nicadil
