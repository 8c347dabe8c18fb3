#pragma once

#include <utility>
#include <vector>

#include "nicadil/representation.hpp"

namespace nicadil {

// Finite truncations of the minimal isometric Nica-covariant dilation, built
// from the Gram form ⟨δ_t ⊗ h, δ_s ⊗ k⟩ = ⟨T_{t-s} h, k⟩ on finitely
// supported H-valued functions. The quotient by the null space and the
// isometric coordinates come from the eigendecomposition of the Gram matrix.
//
// Every verification below is computed through Gram pairings on supports
// extended far enough that the sums in the corresponding identities are
// finite and exact; shift operators between two truncations are honest
// matrices and adjoints are matrix adjoints.

struct SupportSet {
    std::vector<GroupElement> elements;  // sorted, distinct monoid elements

    Eigen::Index size() const { return static_cast<Eigen::Index>(elements.size()); }
    Eigen::Index index_of(const GroupElement& g) const;  // -1 when absent
    bool contains(const GroupElement& g) const { return index_of(g) >= 0; }
};

SupportSet make_support(std::vector<GroupElement> elements);
SupportSet support_union(const SupportSet& a, const SupportSet& b);
SupportSet shift_support(const SupportSet& s, const GroupElement& by);
SupportSet grid_support(const GridSet& grid);

struct DilationOptions {
    double rank_tol_rel = 1e-10;       // eigenvalues ≤ rel·max are the null space
    double tol_psd = 1e-8;
    std::size_t max_gram_dim = 2000;   // cap on assembled Gram side length
};

// Gram matrix of {δ_t ⊗ e_p : t in support}; block (s, t) equals T_{t-s}.
KernelMatrix gram_form(const NicaRep& rep, const SupportSet& support);

class DilationSpace {
public:
    const NicaRep& rep() const { return rep_; }
    const SupportSet& support() const { return support_; }
    const CMatrix& gram() const { return gram_; }
    double herm_defect() const { return herm_defect_; }
    double gram_min_eig() const { return min_eig_; }
    double gram_max_eig() const { return max_eig_; }
    Eigen::Index rank() const { return rank_; }
    Eigen::Index dim_h() const { return rep_.dim(); }
    const DilationOptions& options() const { return options_; }

    // Isometric coordinates: factor() is Q with Q^H Q = gram (rank rows).
    const CMatrix& factor() const { return q_; }
    // Right inverse of Q (maps quotient coordinates to raw representatives).
    const CMatrix& factor_pinv() const { return qpinv_; }

    // Columns are the quotient coordinates of δ_t ⊗ e_p, p = 0..dim-1.
    CMatrix point_map(const GroupElement& t) const;
    // Embedding of H at δ_0; columns are ĥ for the standard basis.
    CMatrix embed_h() const;
    // ‖(embed_h)^H (embed_h) - I‖: the isometric-embedding defect.
    double embed_defect() const;

    friend DilationSpace build_dilation(const NicaRep& rep, const SupportSet& support,
                                        const DilationOptions& options);

private:
    NicaRep rep_;
    SupportSet support_;
    CMatrix gram_;
    CMatrix q_, qpinv_;
    double herm_defect_ = 0.0, min_eig_ = 0.0, max_eig_ = 0.0;
    Eigen::Index rank_ = 0;
    DilationOptions options_;
};

// Throws GramNotPSD when the Gram floor breaches tolerance (an invalid rep).
DilationSpace build_dilation(const NicaRep& rep, const SupportSet& support,
                             const DilationOptions& options = {});

// Matrix of V_s from `from` quotient coordinates to `to` quotient
// coordinates; requires from.support + s ⊆ to.support.
CMatrix shift_matrix(const DilationSpace& from, const DilationSpace& to, const GroupElement& s);

struct CompressedShift {
    CMatrix matrix;        // rank(target) x rank(source)
    DilationSpace target;  // dilation on support ∪ (s + support)
};
CompressedShift compressed_shift(const DilationSpace& dil, const GroupElement& s);

// ‖V_s^H V_s - I‖ over the automatically extended target support.
double verify_isometry(const DilationSpace& dil, const GroupElement& s);

// ‖P_H V_{g-}^* V_{g+} |_H - T_g‖ via Gram pairings.
double verify_regularity(const DilationSpace& dil, const GroupElement& g);

struct NicaDilationCheck {
    double defect = 0.0;             // |⟨V_s^*V_tV_mu ĥ, V_nu k̂⟩ - ⟨V_tV_s^*V_mu ĥ, V_nu k̂⟩|
    double restricted_defect = 0.0;  // V_s^*V_mu'|_H = V_mu'V_s^*|_H with mu' ⊥ s's factor
};

// s and t must be supported in different single factors; mu, nu in the monoid.
NicaDilationCheck verify_nica_dilation(const DilationSpace& dil, const GroupElement& s,
                                       const GroupElement& t, const GroupElement& mu,
                                       const GroupElement& nu);

struct UniquenessCheck {
    double defect_a = 0.0;
    double defect_b = 0.0;
};

// Gram criterion for uniqueness: ⟨V_mu ĥ, V_nu k̂⟩ = ⟨T_{mu-nu} h, k⟩ in both
// truncations, maximized over the given (mu, nu) pairs and basis vectors.
UniquenessCheck compare_minimal_dilations(const DilationSpace& a, const DilationSpace& b,
                                          const std::vector<std::pair<GroupElement, GroupElement>>& pairs);

} // namespace nicadil
