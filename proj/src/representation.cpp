#include "nicadil/representation.hpp"

#include <map>

#include "nicadil/schur.hpp"

namespace nicadil {

namespace {

void check_square(const CMatrix& m, const std::string& where) {
    if (m.rows() != m.cols()) throw ShapeMismatch(where + ": generator matrix is not square");
}

void check_contraction(const CMatrix& m, double tol, const std::string& where) {
    const double n = op_norm(m);
    if (n > 1.0 + tol)
        throw NormExceeded(where + ": generator norm " + std::to_string(n) + " exceeds 1");
}

} // namespace

NicaRep NicaRep::tensor(LatticeSpecPtr spec, std::vector<std::vector<CMatrix>> leg_generators,
                        RepOptions options) {
    if (!spec) throw ShapeMismatch("tensor rep without lattice spec");
    if (leg_generators.size() != spec->factor_count())
        throw ShapeMismatch("tensor rep: one generator list per factor required");

    NicaRep rep;
    rep.mode_ = Mode::Tensor;
    rep.spec_ = std::move(spec);
    rep.options_ = options;
    rep.dim_ = 1;
    for (std::size_t i = 0; i < leg_generators.size(); ++i) {
        const auto& factor = rep.spec_->factor(i);
        const auto& mats = leg_generators[i];
        if (mats.size() != factor.generators.size())
            throw ShapeMismatch("tensor rep: generator count mismatch in factor '" +
                                factor.label + "'");
        const Eigen::Index leg = mats.front().rows();
        for (const auto& m : mats) {
            check_square(m, "factor '" + factor.label + "'");
            if (m.rows() != leg)
                throw ShapeMismatch("tensor rep: inconsistent leg dimension in factor '" +
                                    factor.label + "'");
            check_contraction(m, options.tol, "factor '" + factor.label + "'");
        }
        // Within one factor the generators share a leg and must commute for
        // T to be well defined on the factor monoid.
        for (std::size_t a = 0; a < mats.size(); ++a)
            for (std::size_t b = a + 1; b < mats.size(); ++b) {
                const double d = commutator_norm(mats[a], mats[b]);
                if (d > options.tol)
                    throw NonCommutingEntries("factor '" + factor.label +
                                              "': leg generators do not commute, defect " +
                                              std::to_string(d));
            }
        rep.leg_dims_.push_back(leg);
        rep.dim_ *= leg;
    }
    rep.gens_ = std::move(leg_generators);
    return rep;
}

NicaRep NicaRep::direct(LatticeSpecPtr spec, std::vector<std::vector<CMatrix>> generators,
                        RepOptions options) {
    if (!spec) throw ShapeMismatch("direct rep without lattice spec");
    if (generators.size() != spec->factor_count())
        throw ShapeMismatch("direct rep: one generator list per factor required");

    NicaRep rep;
    rep.mode_ = Mode::Direct;
    rep.spec_ = std::move(spec);
    rep.options_ = options;

    Eigen::Index dim = -1;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const auto& factor = rep.spec_->factor(i);
        if (generators[i].size() != factor.generators.size())
            throw ShapeMismatch("direct rep: generator count mismatch in factor '" +
                                factor.label + "'");
        for (const auto& m : generators[i]) {
            check_square(m, "factor '" + factor.label + "'");
            if (dim < 0) dim = m.rows();
            if (m.rows() != dim)
                throw ShapeMismatch("direct rep: generators act on different dimensions");
            check_contraction(m, options.tol, "factor '" + factor.label + "'");
        }
    }
    if (dim < 0) throw ShapeMismatch("direct rep has no generators");
    rep.dim_ = dim;
    rep.gens_ = std::move(generators);
    return rep;
}

Eigen::Index NicaRep::leg_dim(std::size_t factor) const {
    if (mode_ != Mode::Tensor) throw ShapeMismatch("leg_dim is only defined for tensor reps");
    return leg_dims_.at(factor);
}

ValidationReport NicaRep::validate() const {
    ValidationReport report;
    report.tol = options_.tol;

    NicaWitness worst_norm, worst_within, worst_cross;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        for (std::size_t j = 0; j < gens_[i].size(); ++j) {
            const double excess = op_norm(gens_[i][j]) - 1.0;
            if (excess > report.max_norm_excess) {
                report.max_norm_excess = excess;
                worst_norm = {"norm", i, j, i, j, excess};
            }
            for (std::size_t b = j + 1; b < gens_[i].size(); ++b) {
                const CMatrix& x = gens_[i][j];
                const CMatrix& y = gens_[i][b];
                const double d = commutator_norm(x, y);
                if (d > report.max_within_factor_defect) {
                    report.max_within_factor_defect = d;
                    worst_within = {"within-factor", i, j, i, b, d};
                }
            }
        }
    }

    // Cross-factor doubly commuting requirement; tensor legs satisfy it by
    // construction, so the full-space products are checked only in direct mode.
    if (mode_ == Mode::Direct) {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            for (std::size_t j = 0; j < gens_[i].size(); ++j)
                for (std::size_t a = i + 1; a < gens_.size(); ++a)
                    for (std::size_t b = 0; b < gens_[a].size(); ++b) {
                        const CMatrix& x = gens_[i][j];
                        const CMatrix& y = gens_[a][b];
                        const double d = std::max(op_norm(x.adjoint() * y - y * x.adjoint()),
                                                  commutator_norm(x, y));
                        if (d > report.max_cross_factor_defect) {
                            report.max_cross_factor_defect = d;
                            worst_cross = {"cross-factor", i, j, a, b, d};
                        }
                    }
    }

    if (report.max_norm_excess > 0) report.witnesses.push_back(worst_norm);
    if (report.max_within_factor_defect > 0) report.witnesses.push_back(worst_within);
    if (report.max_cross_factor_defect > 0) report.witnesses.push_back(worst_cross);
    report.passed = report.max_norm_excess <= options_.tol &&
                    report.max_within_factor_defect <= options_.tol &&
                    report.max_cross_factor_defect <= options_.tol;
    return report;
}

CMatrix NicaRep::generator_power(std::size_t factor, std::size_t gen, std::int64_t e) const {
    const CMatrix& base = gens_.at(factor).at(gen);
    CMatrix acc = CMatrix::Identity(base.rows(), base.cols());
    for (std::int64_t k = 0; k < e; ++k) acc = acc * base;
    return acc;
}

CMatrix NicaRep::monoid_value(const GroupElement& s) const {
    if (s.spec().get() != spec_.get())
        throw ShapeMismatch("element belongs to a different lattice spec");
    if (!s.in_monoid())
        throw NotInMonoid("element " + s.to_string() +
                          " is not in the monoid generated by the declared generators");

    if (mode_ == Mode::Tensor) {
        CMatrix acc = CMatrix::Identity(1, 1);
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            CMatrix leg = CMatrix::Identity(leg_dims_[i], leg_dims_[i]);
            for (std::size_t j = 0; j < gens_[i].size(); ++j)
                if (s.coeffs()[i][j] > 0) leg = leg * generator_power(i, j, s.coeffs()[i][j]);
            acc = kron(acc, leg);
        }
        return acc;
    }
    CMatrix acc = CMatrix::Identity(dim_, dim_);
    for (std::size_t i = 0; i < gens_.size(); ++i)
        for (std::size_t j = 0; j < gens_[i].size(); ++j)
            if (s.coeffs()[i][j] > 0) acc = acc * generator_power(i, j, s.coeffs()[i][j]);
    return acc;
}

CMatrix NicaRep::value_at(const GroupElement& g) const {
    auto [plus, minus] = decompose_parts(g);
    return monoid_value(minus).adjoint() * monoid_value(plus);
}

CMatrix NicaRep::factor_value_at(std::size_t factor, const GroupElement& g) const {
    CoeffVector c;
    for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
        if (i == factor)
            c.push_back(g.coeffs()[i]);
        else
            c.emplace_back(g.coeffs()[i].size(), 0);
    }
    return value_at(GroupElement(g.spec(), std::move(c)));
}

NicaRep NicaRep::phase_scaled(const std::vector<std::vector<double>>& theta) const {
    if (theta.size() != gens_.size())
        throw ShapeMismatch("phase vector count does not match factor count");
    NicaRep out = *this;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (theta[i].size() != gens_[i].size())
            throw ShapeMismatch("phase vector length mismatch in factor " + std::to_string(i));
        for (std::size_t j = 0; j < gens_[i].size(); ++j)
            out.gens_[i][j] = std::polar(1.0, theta[i][j]) * gens_[i][j];
    }
    return out;
}

namespace {

// Kernel assembly revisits the same differences many times on grid supports;
// memoize on the coefficient vector.
class ValueCache {
public:
    explicit ValueCache(const NicaRep& rep) : rep_(rep) {}

    const CMatrix& at(const GroupElement& g) {
        auto it = cache_.find(g.coeffs());
        if (it == cache_.end()) it = cache_.emplace(g.coeffs(), rep_.value_at(g)).first;
        return it->second;
    }

private:
    const NicaRep& rep_;
    std::map<CoeffVector, CMatrix> cache_;
};

} // namespace

KernelMatrix regular_kernel(const NicaRep& rep, const std::vector<GroupElement>& points) {
    if (points.empty()) throw ShapeMismatch("regular_kernel needs at least one point");
    for (std::size_t i = 0; i < points.size(); ++i) {
        // Points live in the cone S; evaluability of their differences is
        // decided when the blocks are assembled.
        if (!points[i].in_cone())
            throw NotInMonoid("kernel point " + points[i].to_string() + " is not in the cone");
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j])
                throw ShapeMismatch("kernel points must be distinct");
    }

    const Eigen::Index d = rep.dim();
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    CMatrix big(n * d, n * d);
    ValueCache cache(rep);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            big.block(i * d, j * d, d, d) = cache.at(points[j] - points[i]);

    KernelMatrix out;
    out.points = points;
    out.block_dim = d;
    auto sym = hermitian_part(big);
    out.assembled = std::move(sym.matrix);
    out.herm_defect = sym.defect;
    return out;
}

PositivityResult kernel_positivity(const NicaRep& rep, const std::vector<GroupElement>& points,
                                   bool with_factorization) {
    const KernelMatrix kernel = regular_kernel(rep, points);
    PositivityResult out;
    out.herm_defect = kernel.herm_defect;
    const auto floor = eigen_floor(kernel.assembled);
    out.min_eigenvalue = floor.min_eigenvalue;
    out.positive = floor.min_eigenvalue >= -rep.options().tol_psd;

    if (with_factorization) {
        // The kernel factors as the blockwise Schur product of the per-factor
        // kernels [T^{(l)}_{s_j^{(l)} - s_i^{(l)}}].
        FactorizationCheck check;
        const Eigen::Index d = rep.dim();
        const Eigen::Index n = static_cast<Eigen::Index>(points.size());
        BlockMatrix product;
        for (std::size_t l = 0; l < rep.spec()->factor_count(); ++l) {
            BlockMatrix factor_kernel;
            factor_kernel.m = n;
            factor_kernel.block_dim = d;
            factor_kernel.blocks.resize(static_cast<std::size_t>(n * n));
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    factor_kernel.block(i, j) = rep.factor_value_at(l, points[j] - points[i]);
            check.factor_min_eigs.push_back(eigen_floor(factor_kernel.assemble()).min_eigenvalue);
            product = (l == 0) ? factor_kernel : schur_product(product, factor_kernel);
        }
        check.recompose_defect = op_norm(product.assemble() - kernel.assembled);
        out.factorization = std::move(check);
    }
    return out;
}

} // namespace nicadil
