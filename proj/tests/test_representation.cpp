#include <doctest.h>

#include "nicadil/representation.hpp"

using namespace nicadil;

namespace {

LatticeSpecPtr z_power(std::size_t k) {
    std::vector<FactorSpec> factors;
    for (std::size_t i = 0; i < k; ++i) {
        FactorSpec f;
        f.kind = FactorKind::Cyclic;
        f.generators.push_back({Rational(1), Rational(0)});
        f.label = "z" + std::to_string(i);
        factors.push_back(std::move(f));
    }
    return LatticeSpec::create(std::move(factors));
}

CMatrix scalar(Complex v) {
    CMatrix m(1, 1);
    m(0, 0) = v;
    return m;
}

GroupElement el(const LatticeSpecPtr& spec, CoeffVector c) {
    return GroupElement(spec, std::move(c));
}

const CMatrix kJordan = [] {
    CMatrix j = CMatrix::Zero(2, 2);
    j(0, 1) = 1.0;
    return j;
}();

} // namespace

TEST_CASE("tensor rep of scalars multiplies leg values") {
    auto z2 = z_power(2);
    auto rep = NicaRep::tensor(z2, {{scalar(0.5)}, {scalar(0.3)}});
    CHECK(rep.dim() == 1);
    const CMatrix t11 = rep.monoid_value(el(z2, {{1}, {1}}));
    CHECK(std::abs(t11(0, 0) - Complex(0.15)) < 1e-15);
}

TEST_CASE("identity legs represent everything as the identity") {
    auto z = z_power(1);
    auto rep = NicaRep::tensor(z, {{CMatrix::Identity(3, 3)}});
    for (int n = 0; n < 4; ++n) {
        const CMatrix t = rep.monoid_value(el(z, {{n}}));
        CHECK(op_norm(t - CMatrix::Identity(3, 3)) < 1e-15);
    }
}

TEST_CASE("tensor reps validate as Nica-covariant") {
    auto z2 = z_power(2);
    Rng rng(7);
    auto rep = NicaRep::tensor(z2, {{rng.random_contraction(2)}, {rng.random_contraction(2)}});
    const auto report = rep.validate();
    CHECK(report.passed);
    CHECK(report.max_cross_factor_defect <= 1e-12);
    CHECK(report.max_within_factor_defect <= 1e-12);

    // Independent of the by-construction argument: assemble full-space
    // matrices for cross-factor samples and check X^*Y = YX^* directly.
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b) {
            const CMatrix x = rep.monoid_value(el(z2, {{a}, {0}}));
            const CMatrix y = rep.monoid_value(el(z2, {{0}, {b}}));
            CHECK(op_norm(x.adjoint() * y - y * x.adjoint()) <= 1e-12);
            CHECK(op_norm(x * y - y * x) <= 1e-12);
        }
}

TEST_CASE("unitary scalar reps validate") {
    auto z2 = z_power(2);
    auto rep = NicaRep::direct(
        z2, {{scalar(std::polar(1.0, 0.3))}, {scalar(std::polar(1.0, 1.1))}});
    CHECK(rep.validate().passed);
}

TEST_CASE("norm violations are rejected at construction") {
    auto z = z_power(1);
    CHECK(NicaRep::direct(z, {{scalar(0.9)}}).validate().passed);
    CHECK_THROWS_AS(NicaRep::direct(z, {{scalar(1.2)}}), NormExceeded);
    CHECK_THROWS_AS(NicaRep::tensor(z, {{1.2 * CMatrix::Identity(2, 2)}}), NormExceeded);
}

TEST_CASE("non-commuting leg generators are rejected") {
    FactorSpec f;
    f.kind = FactorKind::Real;
    f.generators.push_back({Rational(1), default_sign_radius()});
    f.generators.push_back({parse_rational("1.41421356237309504880"), default_sign_radius()});
    auto spec = LatticeSpec::create({f});
    CMatrix x = kJordan;
    CMatrix y = kJordan.adjoint();
    CHECK_THROWS_AS(NicaRep::tensor(spec, {{x, y}}), NonCommutingEntries);
}

TEST_CASE("a commuting but not doubly commuting pair fails validation") {
    auto z2 = z_power(2);
    auto rep = NicaRep::direct(z2, {{kJordan}, {kJordan}});
    const auto report = rep.validate();
    CHECK_FALSE(report.passed);
    // ‖J^*J - JJ^*‖ = ‖diag(-1, 1)‖ = 1.
    CHECK(report.max_cross_factor_defect == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.max_within_factor_defect <= 1e-15);
    REQUIRE_FALSE(report.witnesses.empty());
    CHECK(report.witnesses.back().kind == "cross-factor");
}

TEST_CASE("evaluate_at extends to the group") {
    auto z = z_power(1);
    auto rep = NicaRep::direct(z, {{scalar(0.5)}});

    CHECK(op_norm(rep.value_at(el(z, {{0}})) - CMatrix::Identity(1, 1)) < 1e-15);
    CHECK(std::abs(rep.value_at(el(z, {{2}}))(0, 0) - Complex(0.25)) < 1e-15);
    // g = -s gives T_s^*.
    Rng rng(11);
    auto mrep = NicaRep::direct(z, {{rng.random_contraction(3)}});
    const CMatrix ts = mrep.monoid_value(el(z, {{2}}));
    CHECK(op_norm(mrep.value_at(el(z, {{-2}})) - ts.adjoint()) < 1e-14);
}

TEST_CASE("evaluate_at rejects cone points outside the monoid") {
    FactorSpec f;
    f.kind = FactorKind::Real;
    f.generators.push_back({Rational(1), default_sign_radius()});
    f.generators.push_back({parse_rational("1.41421356237309504880"), default_sign_radius()});
    auto spec = LatticeSpec::create({f});
    auto rep = NicaRep::tensor(spec, {{scalar(0.5), scalar(0.25)}});
    // sqrt(2) - 1 is in the cone but not in the monoid.
    CHECK_THROWS_AS(rep.value_at(el(spec, {{-1, 1}})), NotInMonoid);
}

TEST_CASE("the two evaluation orders agree for validated reps") {
    // T_{g-}^* T_{g+} = T_{g+} T_{g-}^*: the parts live in disjoint factors.
    Rng rng(37);
    auto z2 = z_power(2);
    auto rep = NicaRep::tensor(z2, {{rng.random_contraction(2)}, {rng.random_contraction(2)}});
    REQUIRE(rep.validate().passed);
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            const GroupElement g = el(z2, {{a}, {b}});
            auto [plus, minus] = decompose_parts(g);
            const CMatrix left = rep.monoid_value(minus).adjoint() * rep.monoid_value(plus);
            const CMatrix right = rep.monoid_value(plus) * rep.monoid_value(minus).adjoint();
            CHECK(op_norm(left - right) <= 1e-9);
            CHECK(op_norm(rep.value_at(g) - left) == 0.0);
        }
}

TEST_CASE("semigroup, adjoint and contraction laws on a grid") {
    auto z2 = z_power(2);
    Rng rng(23);
    auto rep = NicaRep::tensor(z2, {{rng.random_contraction(2)}, {rng.random_contraction(3)}});
    auto grid = enumerate_grid(z2, 2);
    for (const auto& s : grid.elements)
        for (const auto& t : grid.elements) {
            const CMatrix prod = rep.monoid_value(s) * rep.monoid_value(t);
            CHECK(op_norm(rep.monoid_value(s + t) - prod) <= 1e-9);
            const GroupElement diff = s - t;
            CHECK(op_norm(rep.value_at(-diff) - rep.value_at(diff).adjoint()) <= 1e-9);
            CHECK(op_norm(rep.value_at(diff)) <= 1.0 + 1e-9);
        }
}

TEST_CASE("regular_kernel matches the scalar oracle") {
    auto z = z_power(1);
    auto rep = NicaRep::direct(z, {{scalar(0.5)}});
    auto kernel = regular_kernel(rep, {el(z, {{0}}), el(z, {{1}})});
    CMatrix expected(2, 2);
    expected << 1.0, 0.5, 0.5, 1.0;
    CHECK(op_norm(kernel.assembled - expected) < 1e-15);
    CHECK(kernel.herm_defect < 1e-15);

    auto single = regular_kernel(rep, {el(z, {{3}})});
    CHECK(op_norm(single.assembled - CMatrix::Identity(1, 1)) < 1e-15);
}

TEST_CASE("unitary scalar kernel is the rank-one outer product") {
    auto z = z_power(1);
    const double theta = 0.7;
    auto rep = NicaRep::direct(z, {{scalar(std::polar(1.0, theta))}});
    std::vector<GroupElement> points;
    std::vector<int> s = {0, 1, 2, 3};
    for (int v : s) points.push_back(el(z, {{v}}));
    auto kernel = regular_kernel(rep, points);

    CVector x(4);
    for (int i = 0; i < 4; ++i) x(i) = std::polar(1.0, -s[static_cast<std::size_t>(i)] * theta);
    CHECK(op_norm(kernel.assembled - x * x.adjoint()) < 1e-12);

    const auto floor = eigen_floor(kernel.assembled);
    CHECK(floor.min_eigenvalue >= -1e-12);
    CHECK(floor.max_eigenvalue == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("kernel_positivity on the scalar oracle") {
    auto z = z_power(1);
    auto rep = NicaRep::direct(z, {{scalar(0.5)}});
    const auto result = kernel_positivity(rep, {el(z, {{0}}), el(z, {{1}})});
    CHECK(result.positive);
    CHECK(result.min_eigenvalue == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("validated tensor reps have positive kernels") {
    Rng rng(41);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, 1));
        auto spec = z_power(k);
        std::vector<std::vector<CMatrix>> legs;
        for (std::size_t i = 0; i < k; ++i)
            legs.push_back({rng.random_contraction(1 + rng.uniform_int(0, 2))});
        auto rep = NicaRep::tensor(spec, std::move(legs));
        REQUIRE(rep.validate().passed);

        auto grid = enumerate_grid(spec, 2);
        std::vector<GroupElement> points;
        for (const auto& g : grid.elements) {
            if (points.size() >= 5) break;
            points.push_back(g);
        }
        const auto result = kernel_positivity(rep, points, true);
        CHECK(result.min_eigenvalue >= -1e-10);
        REQUIRE(result.factorization.has_value());
        CHECK(result.factorization->recompose_defect <= 1e-10);
        for (double m : result.factorization->factor_min_eigs) CHECK(m >= -1e-10);
    }
}

TEST_CASE("the commuting non-Nica pair has a non-positive kernel") {
    auto z2 = z_power(2);
    auto rep = NicaRep::direct(z2, {{kJordan}, {kJordan}});
    std::vector<GroupElement> points = {el(z2, {{0}, {0}}), el(z2, {{1}, {0}}),
                                        el(z2, {{0}, {1}}), el(z2, {{1}, {1}})};
    const auto result = kernel_positivity(rep, points);
    CHECK_FALSE(result.positive);
    // min eigenvalue is 1 - sqrt(2)
    CHECK(result.min_eigenvalue == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("randomized search finds commuting families with negative kernels") {
    // Commuting pairs (X, Y = X) with X strictly upper triangular: never
    // doubly commuting unless X = 0, and for enough of them the regular
    // kernel on the unit square dips below -1e-6.
    auto z2 = z_power(2);
    std::vector<GroupElement> square = {el(z2, {{0}, {0}}), el(z2, {{1}, {0}}),
                                        el(z2, {{0}, {1}}), el(z2, {{1}, {1}})};
    Rng rng(71);
    int found = 0;
    for (int trial = 0; trial < 40; ++trial) {
        CMatrix x = CMatrix::Zero(3, 3);
        for (Eigen::Index i = 0; i < 3; ++i)
            for (Eigen::Index j = i + 1; j < 3; ++j) x(i, j) = rng.gaussian();
        const double norm = op_norm(x);
        if (norm > 0) x /= norm;  // strict contraction boundary
        auto rep = NicaRep::direct(z2, {{x}, {x}});
        const auto result = kernel_positivity(rep, square);
        if (result.min_eigenvalue < -1e-6) {
            CHECK_FALSE(result.positive);
            ++found;
        }
    }
    CHECK(found > 0);
}

TEST_CASE("kernel rejects duplicate or non-cone points") {
    auto z = z_power(1);
    auto rep = NicaRep::direct(z, {{scalar(0.5)}});
    CHECK_THROWS_AS(regular_kernel(rep, {el(z, {{1}}), el(z, {{1}})}), ShapeMismatch);
    CHECK_THROWS_AS(regular_kernel(rep, {el(z, {{-1}})}), NotInMonoid);
}

TEST_CASE("cone points outside the monoid work when differences are evaluable") {
    FactorSpec f;
    f.kind = FactorKind::Real;
    f.generators.push_back({Rational(1), default_sign_radius()});
    f.generators.push_back({parse_rational("1.41421356237309504880"), default_sign_radius()});
    auto spec = LatticeSpec::create({f});
    auto rep = NicaRep::tensor(spec, {{scalar(0.5), scalar(0.25)}});

    // sqrt(2) - 1 is in the cone; alone, the only difference is 0.
    auto kernel = regular_kernel(rep, {el(spec, {{-1, 1}})});
    CHECK(op_norm(kernel.assembled - CMatrix::Identity(1, 1)) < 1e-15);

    // Paired with 0 the difference itself must be evaluated and is rejected.
    CHECK_THROWS_AS(regular_kernel(rep, {el(spec, {{0, 0}}), el(spec, {{-1, 1}})}),
                    NotInMonoid);
}

TEST_CASE("phase_scaled rescales by a unimodular character") {
    auto z2 = z_power(2);
    Rng rng(5);
    auto rep = NicaRep::tensor(z2, {{rng.random_contraction(2)}, {rng.random_contraction(2)}});
    const std::vector<std::vector<double>> theta = {{0.4}, {1.9}};
    auto scaled = rep.phase_scaled(theta);
    auto g = el(z2, {{2}, {1}});
    const Complex gamma = std::polar(1.0, 0.4 * 2 + 1.9 * 1);
    CHECK(op_norm(scaled.monoid_value(g) - gamma * rep.monoid_value(g)) < 1e-14);
    CHECK(scaled.validate().passed);
}
