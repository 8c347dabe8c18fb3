#include <doctest.h>

#include "nicadil/lattice.hpp"

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

LatticeSpecPtr sqrt2_factor() {
    FactorSpec f;
    f.kind = FactorKind::Real;
    f.generators.push_back({parse_rational("1"), default_sign_radius()});
    f.generators.push_back(
        {parse_rational("1.41421356237309504880"), default_sign_radius()});
    f.label = "irr";
    return LatticeSpec::create({f});
}

GroupElement el(const LatticeSpecPtr& spec, CoeffVector c) {
    return GroupElement(spec, std::move(c));
}

} // namespace

TEST_CASE("parse_rational handles integers, fractions and decimals") {
    CHECK(parse_rational("3/2") == Rational(3, 2));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("-0.5") == Rational(-1, 2));
    CHECK(parse_rational("1.25") == Rational(5, 4));
    CHECK(parse_rational("1.41421356237309504880") ==
          Rational(boost::multiprecision::cpp_int("141421356237309504880"),
                   boost::multiprecision::cpp_int("100000000000000000000")));
    CHECK_THROWS_AS(parse_rational("1/0"), ShapeMismatch);
    CHECK_THROWS_AS(parse_rational("1.2.3"), ShapeMismatch);
}

TEST_CASE("parse_element evaluates values and cone membership") {
    auto z = z_power(1);
    auto g = parse_element(z, {{3}});
    CHECK(g.value_approx(0) == doctest::Approx(3.0));
    CHECK(g.in_cone());
    CHECK(g.in_monoid());

    auto zero = parse_element(z, {{0}});
    CHECK(zero.is_zero());
    CHECK(zero.in_cone());

    auto s = sqrt2_factor();
    auto w = parse_element(s, {{-1, 1}});  // sqrt(2) - 1
    CHECK(w.value_approx(0) == doctest::Approx(0.41421356237309504880).epsilon(1e-14));
    CHECK(w.in_cone());
    CHECK_FALSE(w.in_monoid());

    CHECK_THROWS_AS(parse_element(z, {{1, 2}}), ShapeMismatch);
}

TEST_CASE("indeterminate signs are refused, not guessed") {
    // Exactly dependent generators declared as a real factor: 2 - 2*1 = 0.
    FactorSpec f;
    f.kind = FactorKind::Real;
    f.generators.push_back({Rational(1), Rational(0)});
    f.generators.push_back({Rational(2), Rational(0)});
    auto spec = LatticeSpec::create({f});
    CHECK_THROWS_AS(parse_element(spec, {{-2, 1}}), IndeterminateSign);

    // Overlapping uncertainty intervals.
    FactorSpec fuzzy;
    fuzzy.kind = FactorKind::Real;
    fuzzy.generators.push_back({Rational(1), Rational(1, 4)});
    fuzzy.generators.push_back({parse_rational("1.000000001"), Rational(1, 4)});
    auto fuzzy_spec = LatticeSpec::create({fuzzy});
    CHECK_THROWS_AS(parse_element(fuzzy_spec, {{1, -1}}), IndeterminateSign);
    // The same difference with exact generators is decidable.
    CHECK(parse_element(fuzzy_spec, {{1, 1}}).in_cone());
}

TEST_CASE("meet and join on Z^2 are componentwise min and max") {
    auto z2 = z_power(2);
    auto g = el(z2, {{1}, {3}});
    auto h = el(z2, {{2}, {1}});
    CHECK(lattice_meet(g, h) == el(z2, {{1}, {1}}));
    CHECK(lattice_join(g, h) == el(z2, {{2}, {3}}));

    auto zero = GroupElement::zero(z2);
    CHECK(lattice_meet(g, zero) == zero);  // 0 <= g for g in the cone
}

TEST_CASE("meet on a real factor compares evaluated values") {
    auto s = sqrt2_factor();
    auto a = el(s, {{-1, 1}});  // ~0.414
    auto b = el(s, {{1, 0}});   // 1
    CHECK(lattice_meet(a, b) == a);
    CHECK(lattice_join(a, b) == b);
}

TEST_CASE("decompose_parts splits positives and negatives") {
    auto z2 = z_power(2);
    auto g = el(z2, {{1}, {-2}});
    auto [plus, minus] = decompose_parts(g);
    CHECK(plus == el(z2, {{1}, {0}}));
    CHECK(minus == el(z2, {{0}, {2}}));

    auto cone_el = el(z2, {{2}, {3}});
    auto [p2, m2] = decompose_parts(cone_el);
    CHECK(p2 == cone_el);
    CHECK(m2.is_zero());

    auto s = sqrt2_factor();
    auto w = el(s, {{1, -1}});  // 1 - sqrt(2) < 0
    auto [p3, m3] = decompose_parts(w);
    CHECK(p3.is_zero());
    CHECK(m3 == el(s, {{-1, 1}}));
}

TEST_CASE("enumerate_grid produces sorted deduplicated cones") {
    auto z = z_power(1);
    auto grid = enumerate_grid(z, 3);
    REQUIRE(grid.elements.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(grid.elements[i] == el(z, {{i}}));

    auto z2 = z_power(2);
    auto grid2 = enumerate_grid(z2, 1);
    CHECK(grid2.elements.size() == 4);
    CHECK(grid2.elements.front().is_zero());

    auto s = sqrt2_factor();
    auto sgrid = enumerate_grid(s, 1);
    REQUIRE(sgrid.elements.size() == 4);
    CHECK(sgrid.elements[0].is_zero());
    CHECK(sgrid.elements[1] == el(s, {{1, 0}}));
    CHECK(sgrid.elements[2] == el(s, {{0, 1}}));
    CHECK(sgrid.elements[3] == el(s, {{1, 1}}));

    CHECK_THROWS_AS(enumerate_grid(z2, 200), GridOverflow);

    auto trivial = enumerate_grid(z2, 0);
    REQUIRE(trivial.elements.size() == 1);
    CHECK(trivial.elements.front().is_zero());
}

TEST_CASE("grid monotone in depth") {
    auto z2 = z_power(2);
    auto small = enumerate_grid(z2, 2);
    auto large = enumerate_grid(z2, 3);
    for (const auto& g : small.elements) {
        CHECK(std::find(large.elements.begin(), large.elements.end(), g) !=
              large.elements.end());
    }
}

TEST_CASE("lattice laws hold exactly on integer grids") {
    auto z2 = z_power(2);
    auto grid = enumerate_grid(z2, 2);
    // Differences of cone elements cover a window of the full group.
    std::vector<GroupElement> window;
    for (const auto& a : grid.elements)
        for (const auto& b : grid.elements) window.push_back(a - b);

    for (const auto& g : window)
        for (const auto& h : window) {
            auto meet = lattice_meet(g, h);
            auto join = lattice_join(g, h);
            CHECK(meet == lattice_meet(h, g));
            CHECK(join == lattice_join(h, g));
            CHECK(lattice_meet(g, g) == g);
            CHECK(lattice_join(meet, g) == g);   // absorption
            CHECK((meet + join) == (g + h));     // l-group identity
            CHECK(cone_leq(meet, g));
            CHECK(cone_leq(g, join));
        }
}

TEST_CASE("decompose reconstruction over a window of differences") {
    auto z3 = z_power(3);
    auto grid = enumerate_grid(z3, 1);
    for (const auto& a : grid.elements)
        for (const auto& b : grid.elements) {
            auto g = a - b;
            auto [plus, minus] = decompose_parts(g);
            CHECK((plus - minus) == g);
            CHECK(lattice_meet(plus, minus).is_zero());
            CHECK(plus.in_cone());
            CHECK(minus.in_cone());
        }
}

TEST_CASE("order compatibility: g <= h iff h - g in cone") {
    auto s = sqrt2_factor();
    auto grid = enumerate_grid(s, 2);
    for (const auto& a : grid.elements)
        for (const auto& b : grid.elements) {
            const bool leq = cone_leq(a, b);
            const bool join_is_b = lattice_join(a, b) == b;
            CHECK(leq == join_is_b);
        }
}

TEST_CASE("deterministic order breaks value ties lexicographically") {
    FactorSpec f;
    f.kind = FactorKind::Real;
    f.generators.push_back({Rational(1), Rational(0)});
    f.generators.push_back({Rational(2), Rational(0)});
    auto spec = LatticeSpec::create({f});
    auto a = el(spec, {{0, 1}});  // value 2
    auto b = el(spec, {{2, 0}});  // value 2
    CHECK(GroupElement::deterministic_less(a, b));
    CHECK_FALSE(GroupElement::deterministic_less(b, a));
}
