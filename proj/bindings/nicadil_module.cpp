#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nicadil/scenario.hpp"
#include "nicadil/schur.hpp"
#include "nicadil/version.hpp"

namespace py = pybind11;
using namespace nicadil;

namespace {

// pybind11 holders must be non-const; the core API only hands out
// shared_ptr<const LatticeSpec>, so the bindings cast at the boundary.
using PySpec = std::shared_ptr<LatticeSpec>;

PySpec make_lattice(const std::vector<py::dict>& factors) {
    std::vector<FactorSpec> specs;
    for (const auto& f : factors) {
        FactorSpec spec;
        const std::string kind = py::cast<std::string>(f["kind"]);
        if (kind == "cyclic")
            spec.kind = FactorKind::Cyclic;
        else if (kind == "real")
            spec.kind = FactorKind::Real;
        else
            throw ShapeMismatch("factor kind must be 'cyclic' or 'real'");
        if (f.contains("label")) spec.label = py::cast<std::string>(f["label"]);
        Rational radius = 0;
        if (spec.kind == FactorKind::Real)
            radius = f.contains("radius")
                         ? parse_rational(py::cast<std::string>(f["radius"]))
                         : default_sign_radius();
        for (const auto& g : f["generators"])
            spec.generators.push_back({parse_rational(py::cast<std::string>(g)), radius});
        specs.push_back(std::move(spec));
    }
    return std::const_pointer_cast<LatticeSpec>(LatticeSpec::create(std::move(specs)));
}

py::dict validation_to_dict(const ValidationReport& r) {
    py::dict d;
    d["norm_excess"] = r.max_norm_excess;
    d["within_factor_defect"] = r.max_within_factor_defect;
    d["cross_factor_defect"] = r.max_cross_factor_defect;
    d["passed"] = r.passed;
    return d;
}

py::dict positivity_to_dict(const PositivityResult& r) {
    py::dict d;
    d["min_eigenvalue"] = r.min_eigenvalue;
    d["herm_defect"] = r.herm_defect;
    d["positive"] = r.positive;
    if (r.factorization) {
        d["factorization_defect"] = r.factorization->recompose_defect;
        d["factor_min_eigenvalues"] = r.factorization->factor_min_eigs;
    }
    return d;
}

BlockMatrix blocks_from_python(const std::vector<std::vector<CMatrix>>& rows) {
    BlockMatrix out;
    out.m = static_cast<Eigen::Index>(rows.size());
    if (out.m == 0) throw ShapeMismatch("empty block matrix");
    out.block_dim = rows.front().front().rows();
    out.blocks.resize(static_cast<std::size_t>(out.m * out.m));
    for (Eigen::Index i = 0; i < out.m; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != out.m)
            throw ShapeMismatch("block matrix must be square");
        for (Eigen::Index j = 0; j < out.m; ++j)
            out.block(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return out;
}

Polynomial poly_from_python(const CovariantPair& pair,
                            const std::vector<std::pair<GroupElement, CMatrix>>& terms) {
    return make_polynomial(terms, pair.system.algebra);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite truncations of minimal isometric Nica-covariant dilations";

    py::register_exception<IndeterminateSign>(m, "IndeterminateSignError");
    py::register_exception<NotInMonoid>(m, "NotInMonoidError");
    py::register_exception<NormExceeded>(m, "NormExceededError");
    py::register_exception<GramNotPSD>(m, "GramNotPSDError");
    py::register_exception<NonCommutingEntries>(m, "NonCommutingEntriesError");
    py::register_exception<NotHermitian>(m, "NotHermitianError");
    py::register_exception<Error>(m, "NicadilError");

    py::class_<LatticeSpec, PySpec>(m, "LatticeSpec")
        .def_property_readonly("factor_count", &LatticeSpec::factor_count)
        .def_property_readonly("generator_count", &LatticeSpec::generator_count);

    m.def("make_lattice", &make_lattice, py::arg("factors"),
          "Build a lattice spec from factor dicts {kind, generators, label?, radius?}");

    py::class_<GroupElement>(m, "GroupElement")
        .def_property_readonly("coeffs", &GroupElement::coeffs)
        .def("value", &GroupElement::value_approx, py::arg("factor"))
        .def("in_cone", &GroupElement::in_cone)
        .def("in_monoid", &GroupElement::in_monoid)
        .def("is_zero", &GroupElement::is_zero)
        .def("__add__", &GroupElement::operator+)
        .def("__sub__",
             [](const GroupElement& a, const GroupElement& b) { return a - b; })
        .def("__neg__", [](const GroupElement& a) { return -a; })
        .def("__eq__", &GroupElement::operator==)
        .def("__repr__", &GroupElement::to_string);

    m.def(
        "element",
        [](const PySpec& spec, const CoeffVector& coeffs) { return parse_element(spec, coeffs); },
        py::arg("spec"), py::arg("coeffs"));
    m.def(
        "zero", [](const PySpec& spec) { return GroupElement::zero(spec); }, py::arg("spec"));
    m.def("meet", &lattice_meet);
    m.def("join", &lattice_join);
    m.def("decompose", &decompose_parts);
    m.def("cone_leq", &cone_leq);
    m.def(
        "grid",
        [](const PySpec& spec, int depth, std::size_t cap) {
            return enumerate_grid(spec, depth, cap).elements;
        },
        py::arg("spec"), py::arg("depth"), py::arg("cap") = kDefaultGridCap);

    py::class_<NicaRep>(m, "NicaRep")
        .def_property_readonly("dim", &NicaRep::dim)
        .def("validate", [](const NicaRep& rep) { return validation_to_dict(rep.validate()); })
        .def("value_at", &NicaRep::value_at, py::arg("g"))
        .def("monoid_value", &NicaRep::monoid_value, py::arg("s"))
        .def("phase_scaled", &NicaRep::phase_scaled, py::arg("theta"));

    m.def(
        "tensor_rep",
        [](const PySpec& spec, std::vector<std::vector<CMatrix>> legs, double tol) {
            RepOptions options;
            options.tol = tol;
            return NicaRep::tensor(spec, std::move(legs), options);
        },
        py::arg("spec"), py::arg("legs"), py::arg("tol") = 1e-9);
    m.def(
        "direct_rep",
        [](const PySpec& spec, std::vector<std::vector<CMatrix>> gens, double tol) {
            RepOptions options;
            options.tol = tol;
            return NicaRep::direct(spec, std::move(gens), options);
        },
        py::arg("spec"), py::arg("generators"), py::arg("tol") = 1e-9);

    m.def(
        "kernel",
        [](const NicaRep& rep, const std::vector<GroupElement>& points) {
            return regular_kernel(rep, points).assembled;
        },
        py::arg("rep"), py::arg("points"));
    m.def(
        "kernel_positivity",
        [](const NicaRep& rep, const std::vector<GroupElement>& points, bool factorization) {
            return positivity_to_dict(kernel_positivity(rep, points, factorization));
        },
        py::arg("rep"), py::arg("points"), py::arg("factorization") = false);

    m.def("schur_product", [](const std::vector<std::vector<CMatrix>>& a,
                              const std::vector<std::vector<CMatrix>>& b) {
        return schur_product(blocks_from_python(a), blocks_from_python(b)).assemble();
    });
    m.def(
        "lift_compress_check",
        [](const std::vector<std::vector<CMatrix>>& a,
           const std::vector<std::vector<CMatrix>>& b, double tol) {
            const auto result = lift_compress_check(blocks_from_python(a),
                                                    blocks_from_python(b), tol);
            py::dict d;
            d["compressed"] = result.compressed;
            d["schur"] = result.schur;
            d["defect"] = result.defect;
            d["max_commutator"] = result.max_commutator;
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("tol") = 1e-9);
    m.def(
        "check_positive",
        [](const std::vector<std::vector<CMatrix>>& blocks, double tol_psd) {
            const auto result = check_positive(blocks_from_python(blocks), tol_psd);
            py::dict d;
            d["min_eigenvalue"] = result.min_eigenvalue;
            d["positive"] = result.positive;
            return d;
        },
        py::arg("blocks"), py::arg("tol_psd") = 1e-8);
    m.def("selection_isometry", &selection_isometry, py::arg("m"), py::arg("block_dim"));

    py::class_<DilationSpace>(m, "Dilation")
        .def_property_readonly("rank", &DilationSpace::rank)
        .def_property_readonly("dim_h", &DilationSpace::dim_h)
        .def_property_readonly("gram", &DilationSpace::gram)
        .def_property_readonly("gram_min_eig", &DilationSpace::gram_min_eig)
        .def_property_readonly("factor", &DilationSpace::factor)
        .def("embed_defect", &DilationSpace::embed_defect)
        .def("point_map", &DilationSpace::point_map, py::arg("t"))
        .def("embed_h", &DilationSpace::embed_h);

    m.def(
        "build_dilation",
        [](const NicaRep& rep, const std::vector<GroupElement>& support, double rank_tol_rel,
           std::size_t max_gram_dim) {
            DilationOptions options;
            options.rank_tol_rel = rank_tol_rel;
            options.max_gram_dim = max_gram_dim;
            return build_dilation(rep, make_support(support), options);
        },
        py::arg("rep"), py::arg("support"), py::arg("rank_tol_rel") = 1e-10,
        py::arg("max_gram_dim") = 2000);
    m.def(
        "compressed_shift",
        [](const DilationSpace& dil, const GroupElement& s) {
            auto result = compressed_shift(dil, s);
            return py::make_tuple(result.matrix, std::move(result.target));
        },
        py::arg("dil"), py::arg("s"));
    m.def("verify_isometry", &verify_isometry, py::arg("dil"), py::arg("s"));
    m.def("verify_regularity", &verify_regularity, py::arg("dil"), py::arg("g"));
    m.def(
        "verify_nica_dilation",
        [](const DilationSpace& dil, const GroupElement& s, const GroupElement& t,
           const GroupElement& mu, const GroupElement& nu) {
            const auto result = verify_nica_dilation(dil, s, t, mu, nu);
            py::dict d;
            d["defect"] = result.defect;
            d["restricted_defect"] = result.restricted_defect;
            return d;
        },
        py::arg("dil"), py::arg("s"), py::arg("t"), py::arg("mu"), py::arg("nu"));
    m.def(
        "compare_minimal_dilations",
        [](const DilationSpace& a, const DilationSpace& b,
           const std::vector<std::pair<GroupElement, GroupElement>>& pairs) {
            const auto result = compare_minimal_dilations(a, b, pairs);
            py::dict d;
            d["defect_a"] = result.defect_a;
            d["defect_b"] = result.defect_b;
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("pairs"));

    py::class_<DynSystem>(m, "DynSystem")
        .def_property_readonly("dim", [](const DynSystem& s) { return s.algebra.dim(); })
        .def("act", &DynSystem::act, py::arg("s"), py::arg("a"))
        .def("action_unitary", &DynSystem::action_unitary, py::arg("s"));

    m.def(
        "make_system",
        [](const PySpec& spec, Eigen::Index dim, std::vector<std::vector<CMatrix>> action) {
            return make_dyn_system(spec, MatrixAlgebra::full(dim), std::move(action));
        },
        py::arg("spec"), py::arg("dim"), py::arg("action"));
    m.def(
        "validate_system",
        [](const DynSystem& sys, double tol) {
            const auto r = validate_system(sys, tol);
            py::dict d;
            d["unitarity_defect"] = r.max_unitarity_defect;
            d["conjugation_commute_defect"] = r.max_conjugation_commute_defect;
            d["unitality_defect"] = r.max_unitality_defect;
            d["passed"] = r.passed;
            return d;
        },
        py::arg("sys"), py::arg("tol") = 1e-9);

    py::class_<CovariantPair>(m, "CovariantPair")
        .def_readonly("system", &CovariantPair::system)
        .def_readonly("rep", &CovariantPair::rep)
        .def("sigma",
             [](const CovariantPair& pair, const CMatrix& a) {
                 return pair.sigma.apply(pair.system.algebra, a);
             });

    m.def(
        "make_pair",
        [](const DynSystem& sys, Eigen::Index multiplicity, const NicaRep& rep) {
            CovariantPair pair;
            pair.system = sys;
            pair.sigma = SigmaRep::multiplicity(sys.algebra, multiplicity);
            pair.rep = rep;
            if (pair.rep.dim() != pair.sigma.dim())
                throw ShapeMismatch("sigma and rep dimensions differ");
            return pair;
        },
        py::arg("system"), py::arg("multiplicity"), py::arg("rep"));
    m.def(
        "validate_covariance",
        [](const CovariantPair& pair, double tol) {
            const auto r = validate_covariance(pair, tol);
            py::dict d;
            d["covariance_defect"] = r.max_covariance_defect;
            d["sigma_star_defect"] = r.sigma_star_defect;
            d["rep_passed"] = r.rep_report.passed;
            d["passed"] = r.passed;
            return d;
        },
        py::arg("pair"), py::arg("tol") = 1e-9);
    m.def(
        "eval_polynomial",
        [](const CovariantPair& pair,
           const std::vector<std::pair<GroupElement, CMatrix>>& terms) {
            return eval_polynomial(pair, poly_from_python(pair, terms));
        },
        py::arg("pair"), py::arg("terms"));
    m.def(
        "dilate_covariant_pair",
        [](const CovariantPair& pair, const std::vector<GroupElement>& support) {
            const auto cd = dilate_covariant_pair(pair, make_support(support));
            py::dict d;
            d["rank"] = cd.dil.rank();
            d["dim_h"] = cd.dil.dim_h();
            d["restriction_defect"] = cd.restriction_defect;
            d["covariance_defect"] = cd.covariance_defect;
            d["star_defect"] = cd.star_defect;
            return d;
        },
        py::arg("pair"), py::arg("support"));
    m.def(
        "induced_representation",
        [](const DynSystem& sys, Eigen::Index multiplicity,
           const std::vector<GroupElement>& support) {
            const auto result = induced_representation(
                sys, SigmaRep::multiplicity(sys.algebra, multiplicity), make_support(support));
            py::dict d;
            d["pair"] = result.pair;
            d["covariance_defect"] = result.covariance_defect;
            d["interior_nica_defect"] = result.interior_nica_defect;
            d["interior_isometry_defect"] = result.interior_isometry_defect;
            d["boundary_columns"] = result.boundary_columns;
            return d;
        },
        py::arg("system"), py::arg("multiplicity"), py::arg("support"));
    m.def(
        "estimate_norms",
        [](const DynSystem& sys, const std::vector<std::pair<GroupElement, CMatrix>>& terms,
           std::uint64_t seed, int samples, int multiplicity_cap, int depth, double tol) {
            SamplerConfig config;
            config.seed = seed;
            config.samples = samples;
            config.max_multiplicity = multiplicity_cap;
            config.support_depth = depth;
            config.tol = tol;
            const auto r = estimate_norms(sys, make_polynomial(terms, sys.algebra), config);
            py::dict d;
            d["contractive_sup"] = r.contractive_sup;
            d["isometric_sup"] = r.isometric_sup;
            d["min_gap"] = r.min_gap;
            d["samples_used"] = r.samples_used;
            d["samples_rejected"] = r.samples_rejected;
            d["seed"] = r.seed;
            return d;
        },
        py::arg("system"), py::arg("terms"), py::arg("seed") = 0, py::arg("samples") = 100,
        py::arg("multiplicity_cap") = 2, py::arg("depth") = 1, py::arg("tol") = 1e-8);
    m.def(
        "gauge_transform",
        [](const std::vector<std::pair<GroupElement, CMatrix>>& terms,
           const std::vector<std::vector<double>>& theta) {
            Polynomial p;
            p.terms = terms;
            return gauge_transform(p, theta).terms;
        },
        py::arg("terms"), py::arg("theta"));
    m.def(
        "character_value",
        [](const PySpec& spec, const std::vector<std::vector<double>>& theta,
           const GroupElement& s) { return character_value(spec, theta, s); },
        py::arg("spec"), py::arg("theta"), py::arg("s"));

    m.def(
        "run_scenario_file",
        [](const std::string& path, bool parallel) {
            RunFlags flags;
            flags.parallel = parallel;
            const auto result = run_scenario_file(path, flags);
            return py::make_tuple(report_to_string(result.report), result.exit_code);
        },
        py::arg("path"), py::arg("parallel") = false);
    m.def(
        "run_scenario",
        [](const std::string& text, bool parallel) {
            RunFlags flags;
            flags.parallel = parallel;
            const auto result = run_scenario_json(Json::parse(text), flags);
            return py::make_tuple(report_to_string(result.report), result.exit_code);
        },
        py::arg("scenario_json"), py::arg("parallel") = false);
    m.def("scenario_schema", &scenario_schema_text);
    m.def("report_schema", &report_schema_text);

#ifdef NICADIL_VERSION_INFO
    m.attr("__version__") = NICADIL_VERSION_INFO;
#else
    m.attr("__version__") = kVersion;
#endif
}
