#include "nicadil/dilation.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace nicadil {

Eigen::Index SupportSet::index_of(const GroupElement& g) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), g,
                               GroupElement::deterministic_less);
    if (it != elements.end() && *it == g) return static_cast<Eigen::Index>(it - elements.begin());
    return -1;
}

SupportSet make_support(std::vector<GroupElement> elements) {
    if (elements.empty()) throw ShapeMismatch("empty support set");
    for (const auto& g : elements)
        if (!g.in_cone())
            throw NotInMonoid("support element " + g.to_string() + " is not in the cone");
    std::sort(elements.begin(), elements.end(), GroupElement::deterministic_less);
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    SupportSet out;
    out.elements = std::move(elements);
    return out;
}

SupportSet support_union(const SupportSet& a, const SupportSet& b) {
    std::vector<GroupElement> all = a.elements;
    all.insert(all.end(), b.elements.begin(), b.elements.end());
    return make_support(std::move(all));
}

SupportSet shift_support(const SupportSet& s, const GroupElement& by) {
    std::vector<GroupElement> all;
    all.reserve(s.elements.size());
    for (const auto& g : s.elements) all.push_back(g + by);
    return make_support(std::move(all));
}

SupportSet grid_support(const GridSet& grid) {
    return make_support(grid.elements);
}

KernelMatrix gram_form(const NicaRep& rep, const SupportSet& support) {
    return regular_kernel(rep, support.elements);
}

DilationSpace build_dilation(const NicaRep& rep, const SupportSet& support,
                             const DilationOptions& options) {
    const std::size_t gram_side =
        static_cast<std::size_t>(support.elements.size()) * static_cast<std::size_t>(rep.dim());
    if (gram_side > options.max_gram_dim)
        throw GridOverflow("support extension would produce a " + std::to_string(gram_side) +
                           "-dimensional Gram matrix (cap " +
                           std::to_string(options.max_gram_dim) + ")");

    KernelMatrix kernel = gram_form(rep, support);

    DilationSpace dil;
    dil.rep_ = rep;
    dil.support_ = support;
    dil.options_ = options;
    dil.gram_ = std::move(kernel.assembled);
    dil.herm_defect_ = kernel.herm_defect;

    const HermitianEig es = hermitian_eig(dil.gram_);
    const Eigen::VectorXd& evals = es.eigenvalues;
    dil.min_eig_ = evals.minCoeff();
    dil.max_eig_ = evals.maxCoeff();

    if (dil.min_eig_ < -options.tol_psd * std::max(1.0, dil.max_eig_))
        throw GramNotPSD("Gram form is not positive semidefinite (min eigenvalue " +
                         std::to_string(dil.min_eig_) + "); the representation is not a valid "
                         "Nica-covariant contraction at this tolerance");

    const double rank_tol = options.rank_tol_rel * dil.max_eig_;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals(i) > rank_tol) keep.push_back(i);
    dil.rank_ = static_cast<Eigen::Index>(keep.size());

    const Eigen::Index n = dil.gram_.rows();
    dil.q_.resize(dil.rank_, n);
    dil.qpinv_.resize(n, dil.rank_);
    for (Eigen::Index r = 0; r < dil.rank_; ++r) {
        const double lam = evals(keep[static_cast<std::size_t>(r)]);
        const CVector u = es.eigenvectors.col(keep[static_cast<std::size_t>(r)]);
        dil.q_.row(r) = std::sqrt(lam) * u.adjoint();
        dil.qpinv_.col(r) = u / std::sqrt(lam);
    }
    return dil;
}

CMatrix DilationSpace::point_map(const GroupElement& t) const {
    const Eigen::Index idx = support_.index_of(t);
    if (idx < 0)
        throw ShapeMismatch("point " + t.to_string() + " is outside the dilation support");
    return q_.middleCols(idx * rep_.dim(), rep_.dim());
}

CMatrix DilationSpace::embed_h() const {
    return point_map(GroupElement::zero(rep_.spec()));
}

double DilationSpace::embed_defect() const {
    const CMatrix e = embed_h();
    return op_norm(e.adjoint() * e - CMatrix::Identity(rep_.dim(), rep_.dim()));
}

CMatrix shift_matrix(const DilationSpace& from, const DilationSpace& to, const GroupElement& s) {
    const Eigen::Index d = from.rep().dim();
    if (to.rep().dim() != d) throw ShapeMismatch("shift between dilations of different reps");
    // Q_to · RawShift has column block t equal to Q_to's block at t + s.
    CMatrix shifted(to.rank(), from.support().size() * d);
    for (Eigen::Index t = 0; t < from.support().size(); ++t) {
        const GroupElement target = from.support().elements[static_cast<std::size_t>(t)] + s;
        const Eigen::Index idx = to.support().index_of(target);
        if (idx < 0)
            throw ShapeMismatch("target support does not contain " + target.to_string());
        shifted.middleCols(t * d, d) = to.factor().middleCols(idx * d, d);
    }
    return shifted * from.factor_pinv();
}

CompressedShift compressed_shift(const DilationSpace& dil, const GroupElement& s) {
    if (!s.in_cone())
        throw NotInMonoid("shift parameter " + s.to_string() + " is not in the cone");
    CompressedShift out;
    out.target = build_dilation(dil.rep(),
                                support_union(dil.support(), shift_support(dil.support(), s)),
                                dil.options());
    out.matrix = shift_matrix(dil, out.target, s);
    return out;
}

double verify_isometry(const DilationSpace& dil, const GroupElement& s) {
    const CompressedShift vs = compressed_shift(dil, s);
    return op_norm(vs.matrix.adjoint() * vs.matrix -
                   CMatrix::Identity(dil.rank(), dil.rank()));
}

double verify_regularity(const DilationSpace& dil, const GroupElement& g) {
    auto [plus, minus] = decompose_parts(g);
    const GroupElement zero = GroupElement::zero(dil.rep().spec());

    const SupportSet base =
        support_union(dil.support(), make_support({zero, plus, minus}));
    const DilationSpace dil0 = build_dilation(dil.rep(), base, dil.options());
    const DilationSpace dil1 = build_dilation(
        dil.rep(), support_union(base, shift_support(base, minus)), dil.options());

    const CMatrix v_minus = shift_matrix(dil0, dil1, minus);
    // ⟨V_{g-}^* V_{g+} ĥ, k̂⟩ with the adjoint realized between truncations.
    const CMatrix pairing = dil0.embed_h().adjoint() * (v_minus.adjoint() * dil1.point_map(plus));
    return op_norm(pairing - dil.rep().value_at(g));
}

NicaDilationCheck verify_nica_dilation(const DilationSpace& dil, const GroupElement& s,
                                       const GroupElement& t, const GroupElement& mu,
                                       const GroupElement& nu) {
    const auto fs = s.single_factor();
    const auto ft = t.single_factor();
    if (s.is_zero() || t.is_zero()) {
        // Degenerate parameters: the identity is trivial but still computable.
    } else {
        if (!fs || !ft)
            throw ShapeMismatch("verify_nica_dilation: s and t must be single-factor elements");
        if (*fs == *ft)
            throw ShapeMismatch("verify_nica_dilation: s and t must lie in different factors");
    }
    for (const GroupElement* g : {&s, &t, &mu, &nu})
        if (!g->in_cone())
            throw NotInMonoid("verify_nica_dilation parameter " + g->to_string() +
                              " is not in the cone");

    const GroupElement zero = GroupElement::zero(dil.rep().spec());
    // mu with the s-factor component removed: disjoint from s by construction.
    CoeffVector mu_disjoint_coeffs = mu.coeffs();
    if (fs)
        std::fill(mu_disjoint_coeffs[*fs].begin(), mu_disjoint_coeffs[*fs].end(), 0);
    const GroupElement mu_disjoint(mu.spec(), mu_disjoint_coeffs);

    auto mu_minus_s = decompose_parts(mu - s);
    auto nu_minus_t = decompose_parts(nu - t);

    // Base support: the pairing identities below are exact provided these
    // points are present (the adjoint compressions then act as identities on
    // everything that gets paired).
    const SupportSet base = support_union(
        dil.support(), make_support({zero, mu, nu, t + mu, s + nu, mu_minus_s.first,
                                     nu_minus_t.first, mu_disjoint}));
    const DilationSpace dil0 = build_dilation(dil.rep(), base, dil.options());

    auto extended = [&](const GroupElement& by) {
        return build_dilation(dil.rep(), support_union(base, shift_support(base, by)),
                              dil.options());
    };
    const DilationSpace dil_s = extended(s);
    const DilationSpace dil_t = extended(t);
    const DilationSpace dil_m = extended(mu_disjoint);

    const CMatrix v_s = shift_matrix(dil0, dil_s, s);
    const CMatrix v_t = shift_matrix(dil0, dil_t, t);
    const CMatrix v_m = shift_matrix(dil0, dil_m, mu_disjoint);

    NicaDilationCheck out;
    // ⟨V_s^* V_t V_mu ĥ, V_nu k̂⟩ = ⟨V_{t+mu} ĥ, V_s V_nu k̂⟩.
    const CMatrix lhs = dil0.point_map(nu).adjoint() * (v_s.adjoint() * dil_s.point_map(t + mu));
    // ⟨V_t V_s^* V_mu ĥ, V_nu k̂⟩ with both operators as truncation matrices.
    const CMatrix xi = v_s.adjoint() * dil_s.point_map(mu);
    const CMatrix rhs = dil_t.point_map(nu).adjoint() * (v_t * xi);
    out.defect = op_norm(lhs - rhs);

    // Restricted identity with the disjoint part of mu.
    const CMatrix lhs_r =
        dil0.point_map(nu).adjoint() * (v_s.adjoint() * dil_s.point_map(mu_disjoint));
    const CMatrix xi_r = v_s.adjoint() * dil_s.point_map(zero);
    const CMatrix rhs_r = dil_m.point_map(nu).adjoint() * (v_m * xi_r);
    out.restricted_defect = op_norm(lhs_r - rhs_r);
    return out;
}

UniquenessCheck compare_minimal_dilations(
    const DilationSpace& a, const DilationSpace& b,
    const std::vector<std::pair<GroupElement, GroupElement>>& pairs) {
    if (a.rep().dim() != b.rep().dim())
        throw ShapeMismatch("compare_minimal_dilations: different representations");
    UniquenessCheck out;
    for (const auto& [mu, nu] : pairs) {
        const CMatrix expected = a.rep().value_at(mu - nu);
        const CMatrix got_a = a.point_map(nu).adjoint() * a.point_map(mu);
        const CMatrix got_b = b.point_map(nu).adjoint() * b.point_map(mu);
        out.defect_a = std::max(out.defect_a, op_norm(got_a - expected));
        out.defect_b = std::max(out.defect_b, op_norm(got_b - expected));
    }
    return out;
}

} // namespace nicadil
