#include "nicadil/lattice.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace nicadil {

namespace {

using boost::multiprecision::cpp_int;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw GridOverflow("integer coefficient overflow");
    return out;
}

std::int64_t checked_neg(std::int64_t a) {
    if (a == std::numeric_limits<std::int64_t>::min())
        throw GridOverflow("integer coefficient overflow");
    return -a;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw ShapeMismatch("empty rational literal");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        cpp_int num(s.substr(0, slash));
        cpp_int den(s.substr(slash + 1));
        if (den == 0) throw ShapeMismatch("zero denominator in '" + text + "'");
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(cpp_int(s), 1);

    std::string head = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos)
        throw ShapeMismatch("malformed decimal literal '" + text + "'");
    bool negative = !head.empty() && head[0] == '-';
    if (negative) head.erase(0, 1);
    if (head.empty()) head = "0";
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    cpp_int num = cpp_int(head) * scale + (frac.empty() ? cpp_int(0) : cpp_int(frac));
    if (negative) num = -num;
    return Rational(num, scale);
}

Rational default_sign_radius() {
    cpp_int den = cpp_int(1) << 60;
    return Rational(1, den);
}

LatticeSpec::LatticeSpec(std::vector<FactorSpec> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw ShapeMismatch("lattice spec needs at least one factor");
    for (const auto& f : factors_) {
        if (f.generators.empty())
            throw ShapeMismatch("factor '" + f.label + "' has no generators");
        if (f.kind == FactorKind::Cyclic && f.generators.size() != 1)
            throw ShapeMismatch("cyclic factor '" + f.label + "' must have exactly one generator");
        for (const auto& g : f.generators) {
            if (g.value <= 0)
                throw ShapeMismatch("generator of factor '" + f.label + "' is not strictly positive");
            if (g.radius < 0)
                throw ShapeMismatch("negative uncertainty radius in factor '" + f.label + "'");
        }
        total_generators_ += f.generators.size();
    }
}

GroupElement::GroupElement(LatticeSpecPtr spec, CoeffVector coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
    if (!spec_) throw ShapeMismatch("group element without a lattice spec");
    if (coeffs_.size() != spec_->factor_count())
        throw ShapeMismatch("coefficient vector count does not match factor count");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].size() != spec_->factor(i).generators.size())
            throw ShapeMismatch("coefficient length mismatch in factor '" +
                                spec_->factor(i).label + "'");
    }
    evaluate();
}

GroupElement GroupElement::zero(LatticeSpecPtr spec) {
    CoeffVector c;
    for (std::size_t i = 0; i < spec->factor_count(); ++i)
        c.emplace_back(spec->factor(i).generators.size(), 0);
    return GroupElement(std::move(spec), std::move(c));
}

void GroupElement::evaluate() {
    values_.clear();
    radii_.clear();
    values_.reserve(coeffs_.size());
    radii_.reserve(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const auto& gens = spec_->factor(i).generators;
        Rational v = 0, r = 0;
        for (std::size_t j = 0; j < gens.size(); ++j) {
            const Rational c(coeffs_[i][j]);
            v += c * gens[j].value;
            r += abs(c) * gens[j].radius;
        }
        values_.push_back(std::move(v));
        radii_.push_back(std::move(r));
    }
}

double GroupElement::value_approx(std::size_t i) const {
    return values_.at(i).convert_to<double>();
}

Sign GroupElement::factor_sign(std::size_t i) const {
    const bool zero_coeffs = std::all_of(coeffs_.at(i).begin(), coeffs_.at(i).end(),
                                         [](std::int64_t c) { return c == 0; });
    if (zero_coeffs) return Sign::Zero;
    const Rational& v = values_.at(i);
    const Rational& r = radii_.at(i);
    if (v > r) return Sign::Positive;
    if (v < -r) return Sign::Negative;
    throw IndeterminateSign("sign of factor " + std::to_string(i) +
                            " component is indeterminate at declared precision");
}

bool GroupElement::is_zero() const {
    for (const auto& fc : coeffs_)
        for (std::int64_t c : fc)
            if (c != 0) return false;
    return true;
}

bool GroupElement::in_cone() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (factor_sign(i) == Sign::Negative) return false;
    return true;
}

bool GroupElement::in_monoid() const {
    for (const auto& fc : coeffs_)
        for (std::int64_t c : fc)
            if (c < 0) return false;
    return true;
}

std::optional<std::size_t> GroupElement::single_factor() const {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const bool nonzero = std::any_of(coeffs_[i].begin(), coeffs_[i].end(),
                                         [](std::int64_t c) { return c != 0; });
        if (!nonzero) continue;
        if (found) return std::nullopt;
        found = i;
    }
    return found;
}

GroupElement GroupElement::operator+(const GroupElement& other) const {
    if (spec_ != other.spec_ && !(spec_ && other.spec_ && spec_.get() == other.spec_.get()))
        throw ShapeMismatch("elements belong to different lattice specs");
    CoeffVector c = coeffs_;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c[i].size(); ++j)
            c[i][j] = checked_add(c[i][j], other.coeffs_[i][j]);
    return GroupElement(spec_, std::move(c));
}

GroupElement GroupElement::operator-() const {
    CoeffVector c = coeffs_;
    for (auto& fc : c)
        for (auto& x : fc) x = checked_neg(x);
    return GroupElement(spec_, std::move(c));
}

GroupElement GroupElement::operator-(const GroupElement& other) const {
    return *this + (-other);
}

bool GroupElement::operator==(const GroupElement& other) const {
    return coeffs_ == other.coeffs_;
}

bool GroupElement::deterministic_less(const GroupElement& a, const GroupElement& b) {
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
        if (a.values_[i] < b.values_[i]) return true;
        if (a.values_[i] > b.values_[i]) return false;
    }
    return a.coeffs_ < b.coeffs_;
}

std::string GroupElement::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << "; ";
        for (std::size_t j = 0; j < coeffs_[i].size(); ++j) {
            if (j) os << ",";
            os << coeffs_[i][j];
        }
    }
    os << ")";
    return os.str();
}

GroupElement parse_element(const LatticeSpecPtr& spec, const CoeffVector& coeffs) {
    GroupElement g(spec, coeffs);
    for (std::size_t i = 0; i < spec->factor_count(); ++i)
        (void)g.factor_sign(i);  // force sign determination, may throw
    return g;
}

Sign compare_factor(const GroupElement& g, const GroupElement& h, std::size_t i) {
    const GroupElement d = g - h;
    return d.factor_sign(i);
}

GroupElement lattice_meet(const GroupElement& g, const GroupElement& h) {
    if (g.spec().get() != h.spec().get())
        throw ShapeMismatch("meet of elements over different lattice specs");
    CoeffVector c(g.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Sign s = compare_factor(g, h, i);
        c[i] = (s == Sign::Negative) ? g.coeffs()[i] : h.coeffs()[i];
    }
    return GroupElement(g.spec(), std::move(c));
}

GroupElement lattice_join(const GroupElement& g, const GroupElement& h) {
    if (g.spec().get() != h.spec().get())
        throw ShapeMismatch("join of elements over different lattice specs");
    CoeffVector c(g.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Sign s = compare_factor(g, h, i);
        c[i] = (s == Sign::Negative) ? h.coeffs()[i] : g.coeffs()[i];
    }
    return GroupElement(g.spec(), std::move(c));
}

std::pair<GroupElement, GroupElement> decompose_parts(const GroupElement& g) {
    const GroupElement zero = GroupElement::zero(g.spec());
    GroupElement plus = lattice_join(g, zero);
    GroupElement minus = lattice_join(-g, zero);
    // Postconditions are exact in the integer coefficients.
    if (!((plus - minus) == g))
        throw Error("Internal", "decompose_parts reconstruction failed");
    if (!lattice_meet(plus, minus).is_zero())
        throw Error("Internal", "decompose_parts disjointness failed");
    return {std::move(plus), std::move(minus)};
}

bool cone_leq(const GroupElement& g, const GroupElement& h) {
    return (h - g).in_cone();
}

GridSet enumerate_grid(const LatticeSpecPtr& spec, int depth, std::size_t size_cap) {
    if (depth < 0) throw ShapeMismatch("grid depth must be nonnegative");
    const std::size_t gens = spec->generator_count();

    double projected = 1.0;
    for (std::size_t i = 0; i < gens; ++i) {
        projected *= static_cast<double>(depth + 1);
        if (projected > static_cast<double>(size_cap))
            throw GridOverflow("grid of depth " + std::to_string(depth) + " exceeds cap " +
                               std::to_string(size_cap));
    }

    GridSet grid;
    grid.depth = depth;
    std::vector<std::int64_t> flat(gens, 0);
    while (true) {
        CoeffVector c;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < spec->factor_count(); ++i) {
            const std::size_t m = spec->factor(i).generators.size();
            c.emplace_back(flat.begin() + pos, flat.begin() + pos + m);
            pos += m;
        }
        grid.elements.emplace_back(spec, std::move(c));

        // odometer increment
        std::size_t k = 0;
        while (k < gens && flat[k] == depth) flat[k++] = 0;
        if (k == gens) break;
        ++flat[k];
    }

    std::sort(grid.elements.begin(), grid.elements.end(), GroupElement::deterministic_less);
    grid.elements.erase(std::unique(grid.elements.begin(), grid.elements.end()),
                        grid.elements.end());
    return grid;
}

} // namespace nicadil
