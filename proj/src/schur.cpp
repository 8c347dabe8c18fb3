#include "nicadil/schur.hpp"

namespace nicadil {

namespace {

void check_consistent(const BlockMatrix& a, const std::string& where) {
    if (a.m <= 0 || a.block_dim <= 0)
        throw ShapeMismatch(where + ": empty block matrix");
    if (a.blocks.size() != static_cast<std::size_t>(a.m * a.m))
        throw ShapeMismatch(where + ": block count does not match m");
    for (const auto& blk : a.blocks)
        if (blk.rows() != a.block_dim || blk.cols() != a.block_dim)
            throw ShapeMismatch(where + ": block dimension mismatch");
}

} // namespace

CMatrix BlockMatrix::assemble() const {
    check_consistent(*this, "assemble");
    CMatrix big(m * block_dim, m * block_dim);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            big.block(i * block_dim, j * block_dim, block_dim, block_dim) = block(i, j);
    return big;
}

BlockMatrix BlockMatrix::from_matrix(const CMatrix& big, Eigen::Index m) {
    if (m <= 0 || big.rows() != big.cols() || big.rows() % m != 0)
        throw ShapeMismatch("from_matrix: matrix does not split into m x m blocks");
    BlockMatrix out;
    out.m = m;
    out.block_dim = big.rows() / m;
    out.blocks.resize(static_cast<std::size_t>(m * m));
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            out.block(i, j) =
                big.block(i * out.block_dim, j * out.block_dim, out.block_dim, out.block_dim);
    return out;
}

double BlockMatrix::hermitian_defect() const {
    check_consistent(*this, "hermitian_defect");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            worst = std::max(worst, op_norm(block(j, i) - block(i, j).adjoint()));
    return worst;
}

BlockMatrix schur_product(const BlockMatrix& a, const BlockMatrix& b) {
    check_consistent(a, "schur_product lhs");
    check_consistent(b, "schur_product rhs");
    if (a.m != b.m || a.block_dim != b.block_dim)
        throw ShapeMismatch("schur_product: operand shapes differ");
    BlockMatrix out;
    out.m = a.m;
    out.block_dim = a.block_dim;
    out.blocks.resize(a.blocks.size());
    for (Eigen::Index i = 0; i < a.m; ++i)
        for (Eigen::Index j = 0; j < a.m; ++j)
            out.block(i, j) = a.block(i, j) * b.block(i, j);
    return out;
}

CMatrix lift_block_diag(const BlockMatrix& a) {
    check_consistent(a, "lift_block_diag");
    const CMatrix big = a.assemble();
    const Eigen::Index n = big.rows();
    CMatrix out = CMatrix::Zero(a.m * n, a.m * n);
    for (Eigen::Index c = 0; c < a.m; ++c) out.block(c * n, c * n, n, n) = big;
    return out;
}

CMatrix lift_entrywise(const BlockMatrix& b) {
    check_consistent(b, "lift_entrywise");
    const Eigen::Index d = b.block_dim;
    const Eigen::Index n = b.m * d;
    CMatrix out = CMatrix::Zero(b.m * n, b.m * n);
    // Copy (i, c) of H^(m²) holds index i*m + c; entry ((i,c), (j,c)) is B_{ij}.
    for (Eigen::Index i = 0; i < b.m; ++i)
        for (Eigen::Index j = 0; j < b.m; ++j)
            for (Eigen::Index c = 0; c < b.m; ++c)
                out.block((i * b.m + c) * d, (j * b.m + c) * d, d, d) = b.block(i, j);
    return out;
}

CMatrix selection_isometry(Eigen::Index m, Eigen::Index block_dim) {
    CMatrix r = CMatrix::Zero(m * m * block_dim, m * block_dim);
    for (Eigen::Index i = 0; i < m; ++i)
        r.block((i * m + i) * block_dim, i * block_dim, block_dim, block_dim) =
            CMatrix::Identity(block_dim, block_dim);
    return r;
}

LiftCompressResult lift_compress_check(const BlockMatrix& a, const BlockMatrix& b, double tol,
                                       Eigen::Index size_cap) {
    check_consistent(a, "lift_compress lhs");
    check_consistent(b, "lift_compress rhs");
    if (a.m != b.m || a.block_dim != b.block_dim)
        throw ShapeMismatch("lift_compress_check: operand shapes differ");
    if (a.m > size_cap)
        throw ShapeMismatch("lift_compress_check: m exceeds the commutation-check cap");

    LiftCompressResult out;
    for (const auto& ablk : a.blocks)
        for (const auto& bblk : b.blocks)
            out.max_commutator = std::max(out.max_commutator, commutator_norm(ablk, bblk));
    if (out.max_commutator > tol)
        throw NonCommutingEntries("lift_compress_check: entries do not commute, defect " +
                                  std::to_string(out.max_commutator));

    const CMatrix lifted_a = lift_block_diag(a);
    const CMatrix lifted_b = lift_entrywise(b);
    const CMatrix r = selection_isometry(a.m, a.block_dim);
    out.compressed = r.adjoint() * (lifted_a * lifted_b) * r;
    out.schur = schur_product(a, b).assemble();
    out.defect = op_norm(out.compressed - out.schur);
    return out;
}

BlockPositivity check_positive(const BlockMatrix& m, double tol_psd, double tol) {
    const double defect = m.hermitian_defect();
    if (defect > tol)
        throw NotHermitian("check_positive: blockwise Hermitian defect " + std::to_string(defect));
    BlockPositivity out;
    const auto floor = eigen_floor(m.assemble());
    out.min_eigenvalue = floor.min_eigenvalue;
    out.herm_defect = std::max(defect, floor.herm_defect);
    out.positive = out.min_eigenvalue >= -tol_psd;
    return out;
}

} // namespace nicadil
