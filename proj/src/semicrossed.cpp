#include "nicadil/semicrossed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nicadil {

namespace {

CVector vectorize(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

} // namespace

MatrixAlgebra MatrixAlgebra::full(Eigen::Index d) {
    std::vector<CMatrix> basis;
    basis.reserve(static_cast<std::size_t>(d * d));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            CMatrix e = CMatrix::Zero(d, d);
            e(i, j) = 1.0;
            basis.push_back(std::move(e));
        }
    return from_basis(std::move(basis));
}

MatrixAlgebra MatrixAlgebra::from_basis(std::vector<CMatrix> basis) {
    if (basis.empty()) throw ShapeMismatch("algebra basis is empty");
    MatrixAlgebra out;
    out.dim_ = basis.front().rows();
    for (const auto& b : basis)
        if (b.rows() != out.dim_ || b.cols() != out.dim_)
            throw ShapeMismatch("algebra basis elements must be square of equal dimension");
    out.vectorized_.resize(out.dim_ * out.dim_, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k)
        out.vectorized_.col(static_cast<Eigen::Index>(k)) = vectorize(basis[k]);
    out.solver_.compute(out.vectorized_);
    if (out.solver_.rank() != out.vectorized_.cols())
        throw ShapeMismatch("algebra basis is linearly dependent");
    out.basis_ = std::move(basis);
    return out;
}

CVector MatrixAlgebra::coordinates(const CMatrix& a, double tol, double* residual) const {
    if (a.rows() != dim_ || a.cols() != dim_)
        throw ShapeMismatch("matrix dimension does not match the algebra");
    const CVector rhs = vectorize(a);
    const CVector x = solver_.solve(rhs);
    const double res = (vectorized_ * x - rhs).norm();
    if (residual) *residual = res;
    if (res > tol * std::max(1.0, rhs.norm()))
        throw ShapeMismatch("matrix is not in the declared algebra (residual " +
                            std::to_string(res) + ")");
    return x;
}

CMatrix DynSystem::action_unitary(const GroupElement& s) const {
    if (!s.in_monoid())
        throw NotInMonoid("action is only defined for monoid elements, got " + s.to_string());
    const Eigen::Index d = algebra.dim();
    CMatrix u = CMatrix::Identity(d, d);
    for (std::size_t i = 0; i < action_unitaries.size(); ++i)
        for (std::size_t j = 0; j < action_unitaries[i].size(); ++j)
            for (std::int64_t k = 0; k < s.coeffs()[i][j]; ++k)
                u = u * action_unitaries[i][j];
    return u;
}

CMatrix DynSystem::act(const GroupElement& s, const CMatrix& a) const {
    const CMatrix u = action_unitary(s);
    return u * a * u.adjoint();
}

DynSystem make_dyn_system(LatticeSpecPtr spec, MatrixAlgebra algebra,
                          std::vector<std::vector<CMatrix>> action_unitaries) {
    if (!spec) throw ShapeMismatch("dynamical system without lattice spec");
    if (action_unitaries.size() != spec->factor_count())
        throw ShapeMismatch("one action-unitary list per factor required");
    for (std::size_t i = 0; i < action_unitaries.size(); ++i) {
        if (action_unitaries[i].size() != spec->factor(i).generators.size())
            throw ShapeMismatch("action-unitary count mismatch in factor " + std::to_string(i));
        for (const auto& u : action_unitaries[i])
            if (u.rows() != algebra.dim() || u.cols() != algebra.dim())
                throw ShapeMismatch("action unitary dimension does not match the algebra");
    }
    DynSystem sys;
    sys.spec = std::move(spec);
    sys.algebra = std::move(algebra);
    sys.action_unitaries = std::move(action_unitaries);
    return sys;
}

SystemReport validate_system(const DynSystem& sys, double tol) {
    SystemReport report;
    report.tol = tol;
    const Eigen::Index d = sys.algebra.dim();
    const CMatrix eye = CMatrix::Identity(d, d);

    std::vector<const CMatrix*> all;
    for (const auto& fac : sys.action_unitaries)
        for (const auto& u : fac) all.push_back(&u);

    for (const CMatrix* u : all) {
        report.max_unitarity_defect =
            std::max(report.max_unitarity_defect, op_norm(u->adjoint() * (*u) - eye));
        report.max_unitality_defect =
            std::max(report.max_unitality_defect, op_norm((*u) * eye * u->adjoint() - eye));
    }
    // Conjugations must commute on the algebra even when the unitaries only
    // commute up to phase.
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            for (const auto& basis_el : sys.algebra.basis()) {
                const CMatrix& u = *all[a];
                const CMatrix& w = *all[b];
                const CMatrix uw = u * (w * basis_el * w.adjoint()) * u.adjoint();
                const CMatrix wu = w * (u * basis_el * u.adjoint()) * w.adjoint();
                report.max_conjugation_commute_defect =
                    std::max(report.max_conjugation_commute_defect, op_norm(uw - wu));
            }

    report.passed = report.max_unitarity_defect <= tol &&
                    report.max_conjugation_commute_defect <= tol &&
                    report.max_unitality_defect <= tol;
    return report;
}

SigmaRep::SigmaRep(const MatrixAlgebra& algebra, std::vector<CMatrix> images) {
    if (images.size() != algebra.basis().size())
        throw ShapeMismatch("sigma needs one image per algebra basis element");
    dim_ = images.front().rows();
    for (const auto& m : images)
        if (m.rows() != dim_ || m.cols() != dim_)
            throw ShapeMismatch("sigma images must be square of equal dimension");
    images_ = std::move(images);
}

SigmaRep SigmaRep::multiplicity(const MatrixAlgebra& algebra, Eigen::Index m) {
    std::vector<CMatrix> images;
    images.reserve(algebra.basis().size());
    const CMatrix eye = CMatrix::Identity(m, m);
    for (const auto& b : algebra.basis()) images.push_back(kron(b, eye));
    return SigmaRep(algebra, std::move(images));
}

CMatrix SigmaRep::apply(const MatrixAlgebra& algebra, const CMatrix& a) const {
    const CVector x = algebra.coordinates(a);
    CMatrix out = CMatrix::Zero(dim_, dim_);
    for (Eigen::Index k = 0; k < x.size(); ++k)
        out += x(k) * images_[static_cast<std::size_t>(k)];
    return out;
}

double SigmaRep::star_defect(const MatrixAlgebra& algebra) const {
    double worst = 0.0;
    const auto& basis = algebra.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        worst = std::max(worst, op_norm(apply(algebra, basis[i].adjoint()) -
                                        images_[i].adjoint()));
        for (std::size_t j = 0; j < basis.size(); ++j)
            worst = std::max(worst, op_norm(apply(algebra, basis[i] * basis[j]) -
                                            images_[i] * images_[j]));
    }
    const CMatrix eye_alg = CMatrix::Identity(algebra.dim(), algebra.dim());
    worst = std::max(worst, op_norm(apply(algebra, eye_alg) - CMatrix::Identity(dim_, dim_)));
    return worst;
}

PairReport validate_covariance(const CovariantPair& pair, double tol) {
    PairReport report;
    report.tol = tol;
    if (pair.sigma.dim() != pair.rep.dim())
        throw ShapeMismatch("sigma and T act on different dimensions");

    report.rep_report = pair.rep.validate();
    report.sigma_star_defect = pair.sigma.star_defect(pair.system.algebra);

    const auto& basis = pair.system.algebra.basis();
    const auto& gens = pair.rep.generator_matrices();
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const CMatrix sig_a = pair.sigma.apply(pair.system.algebra, basis[k]);
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t j = 0; j < gens[i].size(); ++j) {
                // Generator value of T as a full-space matrix.
                CoeffVector c;
                for (std::size_t f = 0; f < pair.rep.spec()->factor_count(); ++f)
                    c.emplace_back(pair.rep.spec()->factor(f).generators.size(), 0);
                c[i][j] = 1;
                const CMatrix t_gen =
                    pair.rep.monoid_value(GroupElement(pair.rep.spec(), c));
                const CMatrix u = pair.system.action_unitaries[i][j];
                const CMatrix alpha_a = u * basis[k] * u.adjoint();
                const double defect = op_norm(
                    sig_a * t_gen - t_gen * pair.sigma.apply(pair.system.algebra, alpha_a));
                if (defect > report.max_covariance_defect) {
                    report.max_covariance_defect = defect;
                    report.witness = CovarianceWitness{k, i, j, defect};
                }
            }
    }
    report.passed = report.max_covariance_defect <= tol && report.rep_report.passed &&
                    report.sigma_star_defect <= tol;
    return report;
}

Polynomial make_polynomial(std::vector<std::pair<GroupElement, CMatrix>> terms,
                           const MatrixAlgebra& algebra, double tol) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (!terms[i].first.in_cone())
            throw NotInMonoid("polynomial exponent " + terms[i].first.to_string() +
                              " is not in the cone");
        (void)algebra.coordinates(terms[i].second, tol);
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            if (terms[i].first == terms[j].first)
                throw ShapeMismatch("polynomial terms must have distinct exponents");
    }
    Polynomial p;
    p.terms = std::move(terms);
    return p;
}

CMatrix eval_polynomial(const CovariantPair& pair, const Polynomial& p) {
    const Eigen::Index n = pair.sigma.dim();
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto& [s, a] : p.terms)
        out += pair.rep.monoid_value(s) * pair.sigma.apply(pair.system.algebra, a);
    return out;
}

namespace {

// Raw-coordinate operator (π₀(A) f)(t) = σ(α_t(A)) f(t): block diagonal over
// the support.
CMatrix pi_raw(const CovariantPair& pair, const SupportSet& support, const CMatrix& a) {
    const Eigen::Index d = pair.sigma.dim();
    CMatrix out = CMatrix::Zero(support.size() * d, support.size() * d);
    for (Eigen::Index t = 0; t < support.size(); ++t) {
        const CMatrix alpha_a =
            pair.system.act(support.elements[static_cast<std::size_t>(t)], a);
        out.block(t * d, t * d, d, d) = pair.sigma.apply(pair.system.algebra, alpha_a);
    }
    return out;
}

CMatrix pi_compressed(const CovariantPair& pair, const DilationSpace& dil, const CMatrix& a) {
    return dil.factor() * pi_raw(pair, dil.support(), a) * dil.factor_pinv();
}

} // namespace

CMatrix CovariantDilation::pi(const MatrixAlgebra& alg, const CMatrix& a) const {
    const CVector x = alg.coordinates(a);
    CMatrix out = CMatrix::Zero(dil.rank(), dil.rank());
    for (Eigen::Index k = 0; k < x.size(); ++k)
        out += x(k) * pi_basis[static_cast<std::size_t>(k)];
    return out;
}

CovariantDilation dilate_covariant_pair(const CovariantPair& pair, const SupportSet& support,
                                        const DilationOptions& options) {
    CovariantDilation out;
    out.algebra = pair.system.algebra;
    out.dil = build_dilation(pair.rep, support, options);

    const auto& basis = pair.system.algebra.basis();
    out.pi_basis.reserve(basis.size());
    for (const auto& b : basis) out.pi_basis.push_back(pi_compressed(pair, out.dil, b));

    // (1) π(A)|_H = σ(A).
    const CMatrix embed = out.dil.embed_h();
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const CMatrix restricted = embed.adjoint() * out.pi_basis[k] * embed;
        out.restriction_defect =
            std::max(out.restriction_defect,
                     op_norm(restricted - pair.sigma.apply(pair.system.algebra, basis[k])));
    }

    // (2) π(A) V_s = V_s π(α_s(A)) on K, per generator.
    const auto& spec = pair.rep.spec();
    for (std::size_t i = 0; i < spec->factor_count(); ++i)
        for (std::size_t j = 0; j < spec->factor(i).generators.size(); ++j) {
            CoeffVector c;
            for (std::size_t f = 0; f < spec->factor_count(); ++f)
                c.emplace_back(spec->factor(f).generators.size(), 0);
            c[i][j] = 1;
            const GroupElement gen(spec, c);
            const DilationSpace target = build_dilation(
                pair.rep, support_union(support, shift_support(support, gen)), options);
            const CMatrix v = shift_matrix(out.dil, target, gen);
            for (const auto& b : basis) {
                const CMatrix lhs = pi_compressed(pair, target, b) * v;
                const CMatrix rhs = v * pi_compressed(pair, out.dil, pair.system.act(gen, b));
                out.covariance_defect = std::max(out.covariance_defect, op_norm(lhs - rhs));
            }
        }

    // (3) π is a *-homomorphism on the basis.
    for (std::size_t i = 0; i < basis.size(); ++i) {
        out.star_defect = std::max(
            out.star_defect,
            op_norm(out.pi(pair.system.algebra, basis[i].adjoint()) - out.pi_basis[i].adjoint()));
        for (std::size_t j = 0; j < basis.size(); ++j)
            out.star_defect =
                std::max(out.star_defect, op_norm(out.pi(pair.system.algebra,
                                                         basis[i] * basis[j]) -
                                                  out.pi_basis[i] * out.pi_basis[j]));
    }
    return out;
}

InducedResult induced_representation(const DynSystem& sys, const SigmaRep& sigma0,
                                     const SupportSet& support) {
    const Eigen::Index d0 = sigma0.dim();
    const Eigen::Index n = support.size();
    const Eigen::Index dim = d0 * n;
    const auto& spec = sys.spec;

    // σ̃(A) = diag over t of σ₀(α_t(A)).
    std::vector<CMatrix> images;
    images.reserve(sys.algebra.basis().size());
    for (const auto& b : sys.algebra.basis()) {
        CMatrix big = CMatrix::Zero(dim, dim);
        for (Eigen::Index t = 0; t < n; ++t)
            big.block(t * d0, t * d0, d0, d0) = sigma0.apply(
                sys.algebra, sys.act(support.elements[static_cast<std::size_t>(t)], b));
        images.push_back(std::move(big));
    }

    // W_gen: δ_t ⊗ h ↦ δ_{t+gen} ⊗ h, truncated at the support boundary.
    std::vector<std::vector<CMatrix>> gens;
    std::vector<std::vector<std::vector<bool>>> interior;  // per factor, gen, column
    for (std::size_t i = 0; i < spec->factor_count(); ++i) {
        gens.emplace_back();
        interior.emplace_back();
        for (std::size_t j = 0; j < spec->factor(i).generators.size(); ++j) {
            CoeffVector c;
            for (std::size_t f = 0; f < spec->factor_count(); ++f)
                c.emplace_back(spec->factor(f).generators.size(), 0);
            c[i][j] = 1;
            const GroupElement gen(spec, c);
            CMatrix w = CMatrix::Zero(dim, dim);
            std::vector<bool> cols(static_cast<std::size_t>(n), false);
            for (Eigen::Index t = 0; t < n; ++t) {
                const Eigen::Index idx =
                    support.index_of(support.elements[static_cast<std::size_t>(t)] + gen);
                if (idx >= 0) {
                    w.block(idx * d0, t * d0, d0, d0) = CMatrix::Identity(d0, d0);
                    cols[static_cast<std::size_t>(t)] = true;
                }
            }
            gens.back().push_back(std::move(w));
            interior.back().push_back(std::move(cols));
        }
    }

    InducedResult out;
    out.support = support;
    out.pair.system = sys;
    out.pair.sigma = SigmaRep(sys.algebra, std::move(images));
    out.pair.rep = NicaRep::direct(spec, gens);

    const auto& wmats = out.pair.rep.generator_matrices();
    std::vector<const CMatrix*> flat;
    std::vector<const std::vector<bool>*> flat_interior;
    for (std::size_t i = 0; i < wmats.size(); ++i)
        for (std::size_t j = 0; j < wmats[i].size(); ++j) {
            flat.push_back(&wmats[i][j]);
            flat_interior.push_back(&interior[i][j]);
        }

    // Covariance holds on the whole truncation.
    for (const auto& b : sys.algebra.basis()) {
        const CMatrix sig_b = out.pair.sigma.apply(sys.algebra, b);
        std::size_t g = 0;
        for (std::size_t i = 0; i < wmats.size(); ++i)
            for (std::size_t j = 0; j < wmats[i].size(); ++j, ++g) {
                CoeffVector c;
                for (std::size_t f = 0; f < spec->factor_count(); ++f)
                    c.emplace_back(spec->factor(f).generators.size(), 0);
                c[i][j] = 1;
                const GroupElement gen(spec, c);
                const CMatrix rhs =
                    (*flat[g]) * out.pair.sigma.apply(sys.algebra, sys.act(gen, b));
                out.covariance_defect =
                    std::max(out.covariance_defect, op_norm(sig_b * (*flat[g]) - rhs));
            }
    }

    // Isometry and Nica relations hold away from the boundary columns.
    Eigen::Index boundary = 0;
    for (std::size_t g = 0; g < flat.size(); ++g) {
        const CMatrix& w = *flat[g];
        CMatrix defect = w.adjoint() * w - CMatrix::Identity(dim, dim);
        for (Eigen::Index t = 0; t < n; ++t) {
            if ((*flat_interior[g])[static_cast<std::size_t>(t)]) continue;
            defect.middleCols(t * d0, d0).setZero();
            ++boundary;
        }
        out.interior_isometry_defect = std::max(out.interior_isometry_defect, op_norm(defect));
    }
    out.boundary_columns = boundary;

    for (std::size_t a = 0; a < flat.size(); ++a)
        for (std::size_t b = a + 1; b < flat.size(); ++b) {
            const CMatrix& ws = *flat[a];
            const CMatrix& wt = *flat[b];
            CMatrix defect = ws.adjoint() * wt - wt * ws.adjoint();
            for (Eigen::Index t = 0; t < n; ++t)
                if (!(*flat_interior[a])[static_cast<std::size_t>(t)] ||
                    !(*flat_interior[b])[static_cast<std::size_t>(t)])
                    defect.middleCols(t * d0, d0).setZero();
            out.interior_nica_defect = std::max(out.interior_nica_defect, op_norm(defect));
        }
    return out;
}

namespace {

// Covariant contraction for an inner action: T_gen = u_gen^* ⊗ C_gen, with the
// C legs drawn from a commuting family per factor.
struct SampledPair {
    CovariantPair pair;
};

SampledPair sample_pair(const DynSystem& sys, Rng& rng, int max_multiplicity) {
    const auto& spec = sys.spec;

    std::vector<Eigen::Index> leg_dims;
    std::vector<std::vector<CMatrix>> legs;  // contraction of generator j on leg i
    for (std::size_t i = 0; i < spec->factor_count(); ++i) {
        const Eigen::Index m = rng.uniform_int(1, max_multiplicity);
        leg_dims.push_back(m);
        legs.emplace_back();
        const std::size_t gen_count = spec->factor(i).generators.size();
        if (gen_count == 1) {
            legs.back().push_back(rng.random_contraction(m));
            continue;
        }
        // Several generators share a leg and must commute: draw them from a
        // common random eigenbasis.
        const CMatrix w = rng.haar_unitary(m);
        for (std::size_t j = 0; j < gen_count; ++j) {
            CVector phases(m);
            for (Eigen::Index q = 0; q < m; ++q)
                phases(q) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
            const CMatrix diag = phases.asDiagonal();
            legs.back().push_back(rng.uniform() * (w * diag * w.adjoint()));
        }
    }

    Eigen::Index mult = 1;
    for (Eigen::Index m : leg_dims) mult *= m;

    std::vector<std::vector<CMatrix>> gens;
    for (std::size_t i = 0; i < spec->factor_count(); ++i) {
        gens.emplace_back();
        for (std::size_t j = 0; j < spec->factor(i).generators.size(); ++j) {
            CMatrix leg_part = CMatrix::Identity(1, 1);
            for (std::size_t f = 0; f < leg_dims.size(); ++f) {
                const Eigen::Index m = leg_dims[f];
                leg_part = kron(leg_part,
                                (f == i) ? legs[i][j] : CMatrix::Identity(m, m));
            }
            gens.back().push_back(kron(sys.action_unitaries[i][j].adjoint(), leg_part));
        }
    }

    SampledPair out;
    out.pair.system = sys;
    out.pair.sigma = SigmaRep::multiplicity(sys.algebra, mult);
    out.pair.rep = NicaRep::direct(spec, std::move(gens));
    return out;
}

} // namespace

NormEstimate estimate_norms(const DynSystem& sys, const Polynomial& p,
                            const SamplerConfig& config) {
    // The tensor-form samples are Nica-covariant only when the action
    // unitaries commute genuinely, not merely up to phase.
    std::vector<const CMatrix*> all;
    for (const auto& fac : sys.action_unitaries)
        for (const auto& u : fac) all.push_back(&u);
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            if (commutator_norm(*all[a], *all[b]) > config.tol)
                throw SamplerExhausted(
                    "norm sampler requires genuinely commuting action unitaries");

    GridSet grid = enumerate_grid(sys.spec, config.support_depth);
    const SupportSet base = grid_support(grid);
    SupportSet extended = base;
    for (const auto& [s, a] : p.terms)
        extended = support_union(extended, shift_support(base, s));

    NormEstimate out;
    out.seed = config.seed;
    out.min_gap = std::numeric_limits<double>::infinity();

    DilationOptions dopt;
    dopt.max_gram_dim = config.max_gram_dim;

    for (int k = 0; k < config.samples; ++k) {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(k)));
        SampledPair sample = sample_pair(sys, rng, config.max_multiplicity);
        const PairReport report = validate_covariance(sample.pair, config.tol);
        if (!report.passed) {
            ++out.samples_rejected;
            continue;
        }

        const double value_c = op_norm(eval_polynomial(sample.pair, p));

        const DilationSpace dil0 = build_dilation(sample.pair.rep, base, dopt);
        const DilationSpace dil1 = build_dilation(sample.pair.rep, extended, dopt);
        CMatrix dilated = CMatrix::Zero(dil1.rank(), dil0.rank());
        for (const auto& [s, a] : p.terms) {
            const CMatrix v = shift_matrix(dil0, dil1, s);
            dilated += v * pi_compressed(sample.pair, dil0, a);
        }
        const double value_iso = op_norm(dilated);

        out.contractive_sup = std::max(out.contractive_sup, value_c);
        out.isometric_sup = std::max(out.isometric_sup, value_iso);
        out.min_gap = std::min(out.min_gap, value_iso - value_c);
        ++out.samples_used;
    }
    if (out.samples_used == 0)
        throw SamplerExhausted("all sampled pairs failed validation");
    return out;
}

Complex character_value(const LatticeSpecPtr& spec,
                        const std::vector<std::vector<double>>& theta, const GroupElement& s) {
    if (theta.size() != spec->factor_count())
        throw ShapeMismatch("character phase vector count does not match factor count");
    double angle = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (theta[i].size() != spec->factor(i).generators.size())
            throw ShapeMismatch("character phase vector length mismatch in factor " +
                                std::to_string(i));
        for (std::size_t j = 0; j < theta[i].size(); ++j)
            angle += theta[i][j] * static_cast<double>(s.coeffs()[i][j]);
    }
    return std::polar(1.0, angle);
}

Polynomial gauge_transform(const Polynomial& p,
                           const std::vector<std::vector<double>>& theta) {
    Polynomial out;
    out.terms.reserve(p.terms.size());
    for (const auto& [s, a] : p.terms) {
        const Complex gamma = character_value(s.spec(), theta, s);
        out.terms.emplace_back(s, gamma * a);
    }
    return out;
}

} // namespace nicadil
