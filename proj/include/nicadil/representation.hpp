#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nicadil/lattice.hpp"
#include "nicadil/matrix_ops.hpp"

namespace nicadil {

// A contractive representation T of the monoid generated by the declared
// lattice generators, with the Nica-covariance requirement
//   T_s^* T_t = T_t T_s^*  whenever s and t live in different factors.
// Extended to group elements by T_g = T_{g_-}^* T_{g_+}.
//
// Tensor mode assigns each factor a tensor leg and each generator a
// contraction on its leg; the full space is the tensor product of the legs and
// Nica-covariance across factors holds by construction. Direct mode assigns
// each generator a contraction on the full space and defers all structure
// checks to validate().

struct RepOptions {
    double tol = 1e-9;       // algebraic identity tolerance
    double tol_psd = 1e-8;   // eigenvalue floor tolerance
};

struct NicaWitness {
    std::string kind;        // "norm", "within-factor", "cross-factor"
    std::size_t factor_a = 0, gen_a = 0;
    std::size_t factor_b = 0, gen_b = 0;
    double defect = 0.0;
};

struct ValidationReport {
    double max_norm_excess = 0.0;          // max over generators of ‖X‖ - 1
    double max_within_factor_defect = 0.0; // ‖XY - YX‖ within one factor
    double max_cross_factor_defect = 0.0;  // max(‖X*Y - YX*‖, ‖XY - YX‖) across factors
    std::vector<NicaWitness> witnesses;    // worst witness of each category
    double tol = 0.0;
    bool passed = false;
};

class NicaRep {
public:
    enum class Mode { Tensor, Direct };

    NicaRep() = default;  // inert; populate via tensor() or direct()

    // Leg generator matrices: leg_generators[i][j] acts on leg i and
    // represents generator j of factor i. Throws NormExceeded or
    // NonCommutingEntries (within-factor) at construction.
    static NicaRep tensor(LatticeSpecPtr spec,
                          std::vector<std::vector<CMatrix>> leg_generators,
                          RepOptions options = {});

    // generators[i][j] acts on the full dim-dimensional space. Only the norm
    // bound is enforced here.
    static NicaRep direct(LatticeSpecPtr spec,
                          std::vector<std::vector<CMatrix>> generators,
                          RepOptions options = {});

    Mode mode() const { return mode_; }
    Eigen::Index dim() const { return dim_; }
    const LatticeSpecPtr& spec() const { return spec_; }
    const RepOptions& options() const { return options_; }
    const std::vector<std::vector<CMatrix>>& generator_matrices() const { return gens_; }
    Eigen::Index leg_dim(std::size_t factor) const;

    ValidationReport validate() const;

    // T_s for s in the generated monoid. Throws NotInMonoid otherwise.
    CMatrix monoid_value(const GroupElement& s) const;

    // T_g = T_{g_-}^* T_{g_+}; both parts must be monoid elements.
    CMatrix value_at(const GroupElement& g) const;

    // Restriction to factor `i`, extended to G_i: acts as T on the factor-i
    // component of g and ignores the rest.
    CMatrix factor_value_at(std::size_t factor, const GroupElement& g) const;

    // Rescales generator (i, j) by the unimodular factor exp(i·theta[i][j]);
    // the result represents s ↦ γ(s)·T_s for the character γ determined by
    // the phase vector.
    NicaRep phase_scaled(const std::vector<std::vector<double>>& theta) const;

private:
    CMatrix generator_power(std::size_t factor, std::size_t gen, std::int64_t e) const;

    Mode mode_ = Mode::Direct;
    LatticeSpecPtr spec_;
    std::vector<std::vector<CMatrix>> gens_;  // tensor: on leg; direct: on full space
    std::vector<Eigen::Index> leg_dims_;      // tensor mode only
    Eigen::Index dim_ = 0;
    RepOptions options_;
};

struct KernelMatrix {
    std::vector<GroupElement> points;
    Eigen::Index block_dim = 0;
    CMatrix assembled;      // symmetrized (n·dim)², block (i,j) = T_{s_j - s_i}
    double herm_defect = 0.0;
};

// The regular-dilation positivity kernel [T_{s_j - s_i}].
KernelMatrix regular_kernel(const NicaRep& rep, const std::vector<GroupElement>& points);

struct FactorizationCheck {
    double recompose_defect = 0.0;          // ‖□-product of factor kernels - kernel‖
    std::vector<double> factor_min_eigs;    // eigenvalue floor per factor kernel
};

struct PositivityResult {
    double min_eigenvalue = 0.0;
    double herm_defect = 0.0;
    bool positive = false;
    std::optional<FactorizationCheck> factorization;
};

// Eigenvalue floor of the kernel, optionally with the per-factor Schur
// factorization of the kernel as a cross-check.
PositivityResult kernel_positivity(const NicaRep& rep,
                                   const std::vector<GroupElement>& points,
                                   bool with_factorization = false);

} // namespace nicadil
