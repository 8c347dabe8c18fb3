#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nicadil/errors.hpp"

namespace nicadil {

// Exact arithmetic for the lattice-ordered group G = ⊕_i G_i generated by a
// direct sum of totally ordered factors. Each factor is either
//   * cyclic: one positive rational generator q, so G_i = Z·q ≅ Z, or
//   * real:   m generators declared rationally independent, so G_i ≅ Z^m
//             ordered by the real value of the combination.
// Generator values are exact rationals (a decimal string stands for the
// rational it spells); a real generator additionally carries an uncertainty
// radius, since the declared value is only an approximation of the intended
// irrational. Sign queries use the induced interval and refuse to guess.

using Rational = boost::multiprecision::cpp_rational;

enum class FactorKind { Cyclic, Real };

struct Generator {
    Rational value;   // exact center
    Rational radius;  // half-width of the uncertainty interval, 0 for exact
};

struct FactorSpec {
    FactorKind kind = FactorKind::Cyclic;
    std::vector<Generator> generators;
    std::string label;
};

// Parses "p/q", integer, or decimal strings into an exact rational.
Rational parse_rational(const std::string& text);

// Default half-width for real-factor generators: 2^-60.
Rational default_sign_radius();

class LatticeSpec;
using LatticeSpecPtr = std::shared_ptr<const LatticeSpec>;

class LatticeSpec {
public:
    explicit LatticeSpec(std::vector<FactorSpec> factors);

    static LatticeSpecPtr create(std::vector<FactorSpec> factors) {
        return std::make_shared<const LatticeSpec>(std::move(factors));
    }

    std::size_t factor_count() const { return factors_.size(); }
    const FactorSpec& factor(std::size_t i) const { return factors_.at(i); }
    const std::vector<FactorSpec>& factors() const { return factors_; }
    // Total number of generators over all factors.
    std::size_t generator_count() const { return total_generators_; }

private:
    std::vector<FactorSpec> factors_;
    std::size_t total_generators_ = 0;
};

enum class Sign { Negative, Zero, Positive };

using CoeffVector = std::vector<std::vector<std::int64_t>>;

class GroupElement {
public:
    GroupElement() = default;
    GroupElement(LatticeSpecPtr spec, CoeffVector coeffs);

    static GroupElement zero(LatticeSpecPtr spec);

    const LatticeSpecPtr& spec() const { return spec_; }
    const CoeffVector& coeffs() const { return coeffs_; }

    // Exact center value and uncertainty radius of factor i.
    const Rational& value(std::size_t i) const { return values_.at(i); }
    const Rational& radius(std::size_t i) const { return radii_.at(i); }
    double value_approx(std::size_t i) const;

    // Sign of factor i with the interval semantics described above. Throws
    // IndeterminateSign when the interval straddles zero for a nonzero
    // coefficient vector, or when the center is exactly zero even though the
    // coefficients are not (declared independence violated).
    Sign factor_sign(std::size_t i) const;

    bool is_zero() const;
    // g ∈ S iff every factor value is ≥ 0.
    bool in_cone() const;
    // g lies in the monoid generated by the declared generators.
    bool in_monoid() const;
    // True when the element is supported in exactly one factor; returns it.
    std::optional<std::size_t> single_factor() const;

    GroupElement operator+(const GroupElement& other) const;
    GroupElement operator-(const GroupElement& other) const;
    GroupElement operator-() const;

    bool operator==(const GroupElement& other) const;

    // Deterministic order: factorwise exact center values, then coefficients.
    static bool deterministic_less(const GroupElement& a, const GroupElement& b);

    std::string to_string() const;

private:
    void evaluate();

    LatticeSpecPtr spec_;
    CoeffVector coeffs_;
    std::vector<Rational> values_;
    std::vector<Rational> radii_;
};

GroupElement parse_element(const LatticeSpecPtr& spec, const CoeffVector& coeffs);

// Order comparison of components within one (totally ordered) factor.
// Throws IndeterminateSign when the order cannot be decided.
Sign compare_factor(const GroupElement& g, const GroupElement& h, std::size_t i);

GroupElement lattice_meet(const GroupElement& g, const GroupElement& h);
GroupElement lattice_join(const GroupElement& g, const GroupElement& h);

// g = g_plus - g_minus with meet(g_plus, g_minus) = 0.
std::pair<GroupElement, GroupElement> decompose_parts(const GroupElement& g);

// True when h - g lies in the cone.
bool cone_leq(const GroupElement& g, const GroupElement& h);

struct GridSet {
    std::vector<GroupElement> elements;  // sorted, distinct, contains 0
    int depth = 0;
};

inline constexpr std::size_t kDefaultGridCap = 20000;

// All nonnegative combinations with per-generator coefficients ≤ depth.
GridSet enumerate_grid(const LatticeSpecPtr& spec, int depth,
                       std::size_t size_cap = kDefaultGridCap);

} // namespace nicadil
