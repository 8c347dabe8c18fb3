#include <doctest.h>

#include "nicadil/schur.hpp"

using namespace nicadil;

namespace {

BlockMatrix scalar_blocks(const CMatrix& entries) {
    BlockMatrix out;
    out.m = entries.rows();
    out.block_dim = 1;
    out.blocks.resize(static_cast<std::size_t>(out.m * out.m));
    for (Eigen::Index i = 0; i < out.m; ++i)
        for (Eigen::Index j = 0; j < out.m; ++j) {
            CMatrix b(1, 1);
            b(0, 0) = entries(i, j);
            out.block(i, j) = b;
        }
    return out;
}

// A entries on the left tensor leg, B entries on the right: commuting by
// construction.
std::pair<BlockMatrix, BlockMatrix> tensor_structured(Rng& rng, Eigen::Index m,
                                                      Eigen::Index dx, Eigen::Index dy) {
    const BlockMatrix a0 = BlockMatrix::from_matrix(rng.random_psd(m * dx), m);
    const BlockMatrix b0 = BlockMatrix::from_matrix(rng.random_psd(m * dy), m);
    BlockMatrix a, b;
    a.m = b.m = m;
    a.block_dim = b.block_dim = dx * dy;
    a.blocks.resize(static_cast<std::size_t>(m * m));
    b.blocks.resize(static_cast<std::size_t>(m * m));
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            a.block(i, j) = kron(a0.block(i, j), CMatrix::Identity(dy, dy));
            b.block(i, j) = kron(CMatrix::Identity(dx, dx), b0.block(i, j));
        }
    return {a, b};
}

} // namespace

TEST_CASE("schur product of all-ones with the identity is the identity") {
    CMatrix ones = CMatrix::Ones(2, 2);
    CMatrix eye = CMatrix::Identity(2, 2);
    const auto prod = schur_product(scalar_blocks(ones), scalar_blocks(eye));
    CHECK(op_norm(prod.assemble() - eye) < 1e-15);
}

TEST_CASE("identity blocks are a schur unit") {
    Rng rng(3);
    BlockMatrix a = BlockMatrix::from_matrix(rng.random_psd(6), 3);
    BlockMatrix ones;
    ones.m = 3;
    ones.block_dim = 2;
    ones.blocks.assign(9, CMatrix::Identity(2, 2));
    const auto prod = schur_product(a, ones);
    CHECK(op_norm(prod.assemble() - a.assemble()) < 1e-15);
}

TEST_CASE("classical Schur product theorem on random scalar PSD matrices") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix p = rng.random_psd(3);
        const CMatrix q = rng.random_psd(3);
        const auto prod = schur_product(scalar_blocks(p), scalar_blocks(q));
        const auto floor = eigen_floor(prod.assemble());
        CHECK(floor.min_eigenvalue >= -1e-12);
    }
}

TEST_CASE("shape mismatches are rejected") {
    Rng rng(9);
    BlockMatrix a = BlockMatrix::from_matrix(rng.random_psd(4), 2);
    BlockMatrix b = BlockMatrix::from_matrix(rng.random_psd(6), 3);
    CHECK_THROWS_AS(schur_product(a, b), ShapeMismatch);
}

TEST_CASE("selection isometry has the proof's shape and R^H R = I") {
    for (Eigen::Index m : {2, 3, 5}) {
        for (Eigen::Index d : {1, 3}) {
            const CMatrix r = selection_isometry(m, d);
            CHECK(r.rows() == m * m * d);
            CHECK(r.cols() == m * d);
            CHECK(op_norm(r.adjoint() * r - CMatrix::Identity(m * d, m * d)) < 1e-15);
        }
    }
}

TEST_CASE("lift and compress reproduces the schur product for scalar entries") {
    Rng rng(29);
    BlockMatrix a = scalar_blocks(rng.ginibre(4, 4));
    BlockMatrix b = scalar_blocks(rng.ginibre(4, 4));
    const auto result = lift_compress_check(a, b);
    CHECK(result.defect <= 1e-12);
}

TEST_CASE("lift and compress with scalar-multiple-of-identity A blocks") {
    Rng rng(31);
    const CMatrix coeffs = rng.ginibre(3, 3);
    BlockMatrix a;
    a.m = 3;
    a.block_dim = 2;
    a.blocks.resize(9);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            a.block(i, j) = coeffs(i, j) * CMatrix::Identity(2, 2);
    BlockMatrix b = BlockMatrix::from_matrix(rng.ginibre(6, 6), 3);
    const auto result = lift_compress_check(a, b);
    CHECK(result.defect <= 1e-12);
}

TEST_CASE("tensor-structured positive pairs: identity and positivity") {
    Rng rng(37);
    for (int trial = 0; trial < 12; ++trial) {
        const Eigen::Index m = 2 + rng.uniform_int(0, 2);
        const auto [a, b] = tensor_structured(rng, m, 2, 2);
        const auto result = lift_compress_check(a, b, 1e-9);
        CHECK(result.defect <= 1e-10);
        const auto floor = eigen_floor(result.schur);
        CHECK(floor.min_eigenvalue >= -1e-10);
    }
}

TEST_CASE("the commutation-check size cap is enforced") {
    BlockMatrix a = scalar_blocks(CMatrix::Identity(13, 13));
    CHECK_THROWS_AS(lift_compress_check(a, a), ShapeMismatch);
}

TEST_CASE("non-commuting entries are detected") {
    BlockMatrix a, b;
    a.m = b.m = 1;
    a.block_dim = b.block_dim = 2;
    CMatrix x = CMatrix::Zero(2, 2);
    x(0, 1) = 1.0;
    a.blocks = {x};
    b.blocks = {x.adjoint()};
    CHECK_THROWS_AS(lift_compress_check(a, b), NonCommutingEntries);
}

TEST_CASE("hermitian_eig reconstructs degenerate matrices") {
    Rng rng(53);
    // A projection-like matrix with a single huge eigenvalue cluster.
    const CMatrix u = rng.haar_unitary(12);
    Eigen::VectorXd spec(12);
    for (int i = 0; i < 12; ++i) spec(i) = (i < 4) ? 3.0 : 0.0;
    const CMatrix m = u * spec.asDiagonal() * u.adjoint();
    const auto sym = hermitian_part(m);
    const auto eig = hermitian_eig(sym.matrix);
    CMatrix back = eig.eigenvectors *
                   eig.eigenvalues.asDiagonal() * eig.eigenvectors.adjoint();
    CHECK(op_norm(back - sym.matrix) <= 1e-12);
    for (Eigen::Index i = 1; i < eig.eigenvalues.size(); ++i)
        CHECK(eig.eigenvalues(i - 1) <= eig.eigenvalues(i));
}

TEST_CASE("check_positive verdicts") {
    BlockMatrix eye = BlockMatrix::from_matrix(CMatrix::Identity(4, 4), 2);
    const auto good = check_positive(eye);
    CHECK(good.positive);
    CHECK(good.min_eigenvalue == doctest::Approx(1.0));

    CMatrix indef = CMatrix::Zero(2, 2);
    indef(0, 0) = 1.0;
    indef(1, 1) = -1.0;
    const auto bad = check_positive(scalar_blocks(indef));
    CHECK_FALSE(bad.positive);
    CHECK(bad.min_eigenvalue == doctest::Approx(-1.0));

    CMatrix skew = CMatrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    skew(1, 0) = 2.0;
    CHECK_THROWS_AS(check_positive(scalar_blocks(skew)), NotHermitian);
}
