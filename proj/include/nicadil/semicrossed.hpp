#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nicadil/dilation.hpp"

namespace nicadil {

// Semigroup dynamical systems over matrix algebras with inner actions,
// covariant pairs (σ, T), their isometric Nica-covariant dilations (π, V),
// induced representations, polynomial evaluation and seeded norm sampling.

class MatrixAlgebra {
public:
    static MatrixAlgebra full(Eigen::Index d);
    static MatrixAlgebra from_basis(std::vector<CMatrix> basis);

    Eigen::Index dim() const { return dim_; }
    const std::vector<CMatrix>& basis() const { return basis_; }

    // Least-squares coordinates of A in the basis; residual is the distance
    // from the span. Throws ShapeMismatch when the residual exceeds tol.
    CVector coordinates(const CMatrix& a, double tol = 1e-8, double* residual = nullptr) const;

private:
    Eigen::Index dim_ = 0;
    std::vector<CMatrix> basis_;
    Eigen::ColPivHouseholderQR<CMatrix> solver_;
    CMatrix vectorized_;
};

struct DynSystem {
    LatticeSpecPtr spec;
    MatrixAlgebra algebra;
    // action_unitaries[i][j]: the unitary implementing the generator-j action
    // of factor i by conjugation A ↦ u A u^*.
    std::vector<std::vector<CMatrix>> action_unitaries;

    // Ordered product of generator powers for a monoid element.
    CMatrix action_unitary(const GroupElement& s) const;
    // α_s(A) = u_s A u_s^*.
    CMatrix act(const GroupElement& s, const CMatrix& a) const;
};

DynSystem make_dyn_system(LatticeSpecPtr spec, MatrixAlgebra algebra,
                          std::vector<std::vector<CMatrix>> action_unitaries);

struct SystemReport {
    double max_unitarity_defect = 0.0;
    double max_conjugation_commute_defect = 0.0;
    double max_unitality_defect = 0.0;
    double tol = 0.0;
    bool passed = false;
};
SystemReport validate_system(const DynSystem& sys, double tol = 1e-9);

// *-representation of the algebra given by images of the basis elements.
class SigmaRep {
public:
    SigmaRep() = default;
    SigmaRep(const MatrixAlgebra& algebra, std::vector<CMatrix> images);
    // A ↦ A ⊗ I_m on the full matrix algebra.
    static SigmaRep multiplicity(const MatrixAlgebra& algebra, Eigen::Index m);

    Eigen::Index dim() const { return dim_; }
    const std::vector<CMatrix>& images() const { return images_; }
    CMatrix apply(const MatrixAlgebra& algebra, const CMatrix& a) const;
    // Max *-homomorphism defect over basis pairs (products, adjoints, unit).
    double star_defect(const MatrixAlgebra& algebra) const;

private:
    Eigen::Index dim_ = 0;
    std::vector<CMatrix> images_;
};

struct CovariantPair {
    DynSystem system;
    SigmaRep sigma;
    NicaRep rep;
};

struct CovarianceWitness {
    std::size_t basis_index = 0;
    std::size_t factor = 0, gen = 0;
    double defect = 0.0;
};

struct PairReport {
    double max_covariance_defect = 0.0;  // ‖σ(A)T_s - T_s σ(α_s(A))‖
    std::optional<CovarianceWitness> witness;
    ValidationReport rep_report;
    double sigma_star_defect = 0.0;
    double tol = 0.0;
    bool passed = false;
};
PairReport validate_covariance(const CovariantPair& pair, double tol = 1e-9);

struct Polynomial {
    std::vector<std::pair<GroupElement, CMatrix>> terms;  // distinct s values
};

Polynomial make_polynomial(std::vector<std::pair<GroupElement, CMatrix>> terms,
                           const MatrixAlgebra& algebra, double tol = 1e-8);

// (σ × T)(p) = Σ T_{s_i} σ(A_{s_i}).
CMatrix eval_polynomial(const CovariantPair& pair, const Polynomial& p);

struct CovariantDilation {
    DilationSpace dil;
    std::vector<CMatrix> pi_basis;       // π on quotient coordinates, per basis element
    double restriction_defect = 0.0;     // ‖π(A)|_H - σ(A)‖
    double covariance_defect = 0.0;      // ‖π(A)V_s - V_s π(α_s(A))‖ on K
    double star_defect = 0.0;            // π multiplicative/adjoint on the basis

    CMatrix pi(const MatrixAlgebra& algebra, const CMatrix& a) const;

    // kept for pi(); mirrors CovariantPair.system.algebra
    MatrixAlgebra algebra;
};

CovariantDilation dilate_covariant_pair(const CovariantPair& pair, const SupportSet& support,
                                        const DilationOptions& options = {});

struct InducedResult {
    CovariantPair pair;                 // (σ̃, W) on H₀ ⊗ ℓ²(support)
    SupportSet support;
    double covariance_defect = 0.0;     // exact on the whole truncation
    double interior_nica_defect = 0.0;  // Nica defect away from the boundary
    double interior_isometry_defect = 0.0;
    Eigen::Index boundary_columns = 0;  // columns where some shift leaves the support
};

// The truncated induced representation; `support` should be downward closed
// (a grid) for the interior/boundary split to be meaningful.
InducedResult induced_representation(const DynSystem& sys, const SigmaRep& sigma0,
                                     const SupportSet& support);

struct SamplerConfig {
    std::uint64_t seed = 0;
    int samples = 100;
    int max_multiplicity = 2;
    int support_depth = 1;
    double tol = 1e-8;
    std::size_t max_gram_dim = 2000;
};

struct NormEstimate {
    double contractive_sup = 0.0;   // lower bound on ‖p‖
    double isometric_sup = 0.0;     // lower bound on ‖p‖_iso
    double min_gap = 0.0;           // min over samples of (dilated - contractive)
    int samples_used = 0;
    int samples_rejected = 0;
    std::uint64_t seed = 0;
};

// Seeded sampling of covariant contractive Nica pairs (σ, T) of the system:
// σ = id ⊗ I_m and T_gen = u_gen^* ⊗ C_gen with per-factor commuting random
// contraction legs. Every sample is validated; per sample the compression
// inequality ‖(σ×T)(p)‖ ≤ ‖(π×V)(p)‖ is recorded via min_gap.
NormEstimate estimate_norms(const DynSystem& sys, const Polynomial& p,
                            const SamplerConfig& config);

// Character value γ(s) = exp(i Σ θ_{ij} c_{ij}(s)) for the phase vector θ.
Complex character_value(const LatticeSpecPtr& spec,
                        const std::vector<std::vector<double>>& theta, const GroupElement& s);

// τ_γ p: scales the s-term coefficient by γ(s).
Polynomial gauge_transform(const Polynomial& p,
                           const std::vector<std::vector<double>>& theta);

} // namespace nicadil
