#include "nicadil/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>

#include "nicadil/schur.hpp"
#include "nicadil/version.hpp"

namespace nicadil {

namespace {

[[noreturn]] void schema_fail(const std::string& msg) { throw SchemaError(msg); }

const Json& require_key(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        schema_fail(where + ": missing required key '" + key + "'");
    return j.at(key);
}

double get_double(const Json& j, const std::string& where) {
    if (!j.is_number()) schema_fail(where + ": expected a number");
    return j.get<double>();
}

int get_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) schema_fail(where + ": expected an integer");
    return j.get<int>();
}

Complex parse_complex(const Json& j, const std::string& where) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    schema_fail(where + ": matrix entries must be numbers or [re, im] pairs");
}

CMatrix parse_matrix(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema_fail(where + ": expected a non-empty matrix");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    CMatrix m;
    for (std::size_t r = 0; r < rows; ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.empty()) schema_fail(where + ": malformed matrix row");
        if (r == 0) {
            cols = row.size();
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            schema_fail(where + ": ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_complex(row[c], where);
    }
    return m;
}

CoeffVector parse_coeffs(const Json& j, const LatticeSpecPtr& spec, const std::string& where) {
    if (!j.is_array() || j.size() != spec->factor_count())
        schema_fail(where + ": expected one integer array per factor (" +
                    std::to_string(spec->factor_count()) + " factors)");
    CoeffVector coeffs;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& fc = j[i];
        if (!fc.is_array() || fc.size() != spec->factor(i).generators.size())
            schema_fail(where + ": coefficient count mismatch in factor " + std::to_string(i));
        std::vector<std::int64_t> row;
        for (const auto& v : fc) {
            if (!v.is_number_integer()) schema_fail(where + ": coefficients must be integers");
            row.push_back(v.get<std::int64_t>());
        }
        coeffs.push_back(std::move(row));
    }
    return coeffs;
}

LatticeSpecPtr parse_factors(const Json& j) {
    if (!j.is_array() || j.empty()) schema_fail("factors: expected a non-empty array");
    std::vector<FactorSpec> factors;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "factors[" + std::to_string(i) + "]";
        const Json& f = j[i];
        FactorSpec spec;
        const std::string kind = require_key(f, "kind", where).get<std::string>();
        if (kind == "cyclic")
            spec.kind = FactorKind::Cyclic;
        else if (kind == "real")
            spec.kind = FactorKind::Real;
        else
            schema_fail(where + ": kind must be 'cyclic' or 'real'");
        spec.label = f.value("label", "factor" + std::to_string(i));

        Rational radius = 0;
        if (spec.kind == FactorKind::Real) {
            radius = f.contains("radius")
                         ? parse_rational(f.at("radius").get<std::string>())
                         : default_sign_radius();
        }
        const Json& gens = require_key(f, "generators", where);
        if (!gens.is_array() || gens.empty()) schema_fail(where + ": generators must be non-empty");
        for (const auto& g : gens) {
            if (!g.is_string()) schema_fail(where + ": generators are rational/decimal strings");
            Generator gen;
            try {
                gen.value = parse_rational(g.get<std::string>());
            } catch (const Error& e) {
                schema_fail(where + ": " + e.what());
            }
            gen.radius = radius;
            spec.generators.push_back(std::move(gen));
        }
        factors.push_back(std::move(spec));
    }
    try {
        return LatticeSpec::create(std::move(factors));
    } catch (const Error& e) {
        schema_fail(std::string("factors: ") + e.what());
    }
}

NicaRep parse_representation(const Json& j, const LatticeSpecPtr& spec, RepOptions options) {
    const std::string mode = require_key(j, "mode", "representation").get<std::string>();
    if (j.contains("tolerance")) options.tol = get_double(j.at("tolerance"), "tolerance");

    std::vector<std::vector<CMatrix>> gens;
    const char* key = (mode == "tensor") ? "legs" : "generators";
    const Json& lists = require_key(j, key, "representation");
    if (!lists.is_array() || lists.size() != spec->factor_count())
        schema_fail("representation: expected one generator list per factor");
    for (std::size_t i = 0; i < lists.size(); ++i) {
        const Json& entry = lists[i];
        const Json& mats = entry.is_object() ? require_key(entry, "generators", "legs") : entry;
        if (!mats.is_array()) schema_fail("representation: generator list must be an array");
        std::vector<CMatrix> row;
        for (std::size_t g = 0; g < mats.size(); ++g)
            row.push_back(parse_matrix(mats[g], "representation factor " + std::to_string(i) +
                                                    " generator " + std::to_string(g)));
        gens.push_back(std::move(row));
    }
    if (mode == "tensor") return NicaRep::tensor(spec, std::move(gens), options);
    if (mode == "direct") return NicaRep::direct(spec, std::move(gens), options);
    schema_fail("representation: mode must be 'tensor' or 'direct'");
}

CovariantPair parse_pair(const Json& j, const LatticeSpecPtr& spec, RepOptions options) {
    const Json& sysj = require_key(j, "system", "covariant_pair");
    const int dim = get_int(require_key(sysj, "dim", "system"), "system.dim");
    if (dim <= 0) schema_fail("system.dim must be positive");
    const std::string algebra_kind = sysj.value("algebra", "full");
    if (algebra_kind != "full") schema_fail("system.algebra: only 'full' is supported");

    const Json& action = require_key(sysj, "action", "system");
    if (!action.is_array() || action.size() != spec->factor_count())
        schema_fail("system.action: expected one unitary list per factor");
    std::vector<std::vector<CMatrix>> unitaries;
    for (std::size_t i = 0; i < action.size(); ++i) {
        const Json& mats = action[i];
        if (!mats.is_array()) schema_fail("system.action: factor entry must be an array");
        std::vector<CMatrix> row;
        for (std::size_t g = 0; g < mats.size(); ++g)
            row.push_back(parse_matrix(mats[g], "system.action factor " + std::to_string(i)));
        unitaries.push_back(std::move(row));
    }

    CovariantPair pair;
    pair.system = make_dyn_system(spec, MatrixAlgebra::full(dim), std::move(unitaries));

    const Json& sigj = require_key(j, "sigma", "covariant_pair");
    if (sigj.contains("multiplicity")) {
        const int m = get_int(sigj.at("multiplicity"), "sigma.multiplicity");
        if (m <= 0) schema_fail("sigma.multiplicity must be positive");
        pair.sigma = SigmaRep::multiplicity(pair.system.algebra, m);
    } else {
        const Json& images = require_key(sigj, "images", "sigma");
        std::vector<CMatrix> mats;
        for (std::size_t k = 0; k < images.size(); ++k)
            mats.push_back(parse_matrix(images[k], "sigma.images[" + std::to_string(k) + "]"));
        pair.sigma = SigmaRep(pair.system.algebra, std::move(mats));
    }

    pair.rep = parse_representation(require_key(j, "rep", "covariant_pair"), spec, options);
    if (pair.rep.dim() != pair.sigma.dim())
        schema_fail("covariant_pair: sigma and rep dimensions differ");
    return pair;
}

// Shared state for task execution; all members immutable during the run.
struct Context {
    LatticeSpecPtr spec;
    std::optional<NicaRep> rep;
    std::optional<CovariantPair> pair;
    double tol = 1e-9;
    double tol_psd = 1e-8;
    int depth = 2;
    std::uint64_t seed = 0;
    std::size_t max_gram_dim = 2000;
    std::size_t max_grid = kDefaultGridCap;

    const NicaRep& representation() const {
        if (!rep) schema_fail("task requires a representation or covariant pair");
        return *rep;
    }
    const CovariantPair& covariant_pair() const {
        if (!pair) schema_fail("task requires a covariant pair");
        return *pair;
    }
    DilationOptions dilation_options() const {
        DilationOptions opt;
        opt.tol_psd = tol_psd;
        opt.max_gram_dim = max_gram_dim;
        return opt;
    }
    SupportSet support_for(const Json& task, const std::string& where) const {
        if (task.contains("support")) {
            std::vector<GroupElement> pts;
            for (const auto& p : task.at("support"))
                pts.push_back(parse_element(spec, parse_coeffs(p, spec, where + ".support")));
            return make_support(std::move(pts));
        }
        const int d = task.contains("depth") ? get_int(task.at("depth"), where + ".depth") : depth;
        return grid_support(enumerate_grid(spec, d, max_grid));
    }
};

Polynomial parse_polynomial(const Json& j, const Context& ctx, const std::string& where) {
    if (!j.is_array() || j.empty()) schema_fail(where + ": polynomial must be a non-empty array");
    std::vector<std::pair<GroupElement, CMatrix>> terms;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& term = j[i];
        const GroupElement s = parse_element(
            ctx.spec, parse_coeffs(require_key(term, "s", where), ctx.spec, where + ".s"));
        terms.emplace_back(s, parse_matrix(require_key(term, "coeff", where), where + ".coeff"));
    }
    return make_polynomial(std::move(terms), ctx.covariant_pair().system.algebra);
}

std::string verdict_of(bool ok) { return ok ? "pass" : "fail"; }

Json task_kernel_check(const Context& ctx, const Json& task) {
    std::vector<GroupElement> points;
    for (const auto& p : require_key(task, "points", "kernel_check"))
        points.push_back(parse_element(ctx.spec, parse_coeffs(p, ctx.spec, "kernel_check.points")));
    const bool factorization = task.value("factorization", false);
    const std::size_t side = points.size() * static_cast<std::size_t>(ctx.representation().dim());
    if (side > ctx.max_gram_dim)
        throw GridOverflow("kernel of side " + std::to_string(side) + " exceeds cap " +
                           std::to_string(ctx.max_gram_dim));

    const auto result = kernel_positivity(ctx.representation(), points, factorization);
    Json rec;
    rec["min_eigenvalue"] = result.min_eigenvalue;
    rec["herm_defect"] = result.herm_defect;
    rec["tolerance"] = ctx.tol_psd;
    bool ok = result.positive;
    if (result.factorization) {
        rec["factorization_defect"] = result.factorization->recompose_defect;
        rec["factor_min_eigenvalues"] = result.factorization->factor_min_eigs;
        ok = ok && result.factorization->recompose_defect <= ctx.tol_psd;
    }
    rec["verdict"] = verdict_of(ok);
    return rec;
}

Json task_dilate(const Context& ctx, const Json& task) {
    const SupportSet support = ctx.support_for(task, "dilate");
    const double tolerance = task.value("tolerance", 1e-8);
    Json rec;
    rec["support_size"] = support.size();
    rec["tolerance"] = tolerance;
    if (ctx.pair) {
        const auto cd = dilate_covariant_pair(*ctx.pair, support, ctx.dilation_options());
        rec["rank"] = cd.dil.rank();
        rec["dim_h"] = cd.dil.dim_h();
        rec["gram_min_eigenvalue"] = cd.dil.gram_min_eig();
        rec["restriction_defect"] = cd.restriction_defect;
        rec["covariance_defect"] = cd.covariance_defect;
        rec["star_defect"] = cd.star_defect;
        rec["verdict"] = verdict_of(cd.restriction_defect <= tolerance &&
                                    cd.covariance_defect <= tolerance &&
                                    cd.star_defect <= tolerance);
        return rec;
    }
    const DilationSpace dil =
        build_dilation(ctx.representation(), support, ctx.dilation_options());
    rec["rank"] = dil.rank();
    rec["dim_h"] = dil.dim_h();
    rec["gram_min_eigenvalue"] = dil.gram_min_eig();
    rec["gram_herm_defect"] = dil.herm_defect();
    rec["embed_defect"] = dil.embed_defect();
    rec["verdict"] = verdict_of(dil.embed_defect() <= tolerance);
    return rec;
}

Json task_verify(const Context& ctx, const Json& task, std::uint64_t /*task_seed*/) {
    const std::string check = require_key(task, "check", "verify").get<std::string>();
    const double tolerance =
        task.value("tolerance", check == "isometry" || check == "regularity" || check == "nica"
                                    ? 1e-8
                                    : 1e-10);
    Json rec;
    rec["check"] = check;
    rec["tolerance"] = tolerance;

    auto element = [&](const char* key) {
        return parse_element(ctx.spec,
                             parse_coeffs(require_key(task, key, "verify"), ctx.spec, key));
    };

    if (check == "uniqueness") {
        const SupportSet support_a = ctx.support_for(task, "verify");
        const int depth_b = task.contains("depth_b") ? get_int(task.at("depth_b"), "depth_b")
                                                     : ctx.depth + 1;
        const SupportSet support_b = grid_support(enumerate_grid(ctx.spec, depth_b, ctx.max_grid));
        const DilationSpace dil_a =
            build_dilation(ctx.representation(), support_a, ctx.dilation_options());
        const DilationSpace dil_b =
            build_dilation(ctx.representation(), support_b, ctx.dilation_options());

        std::vector<std::pair<GroupElement, GroupElement>> pairs;
        const std::size_t cap = task.value("max_pairs", 64);
        for (const auto& mu : support_a.elements) {
            for (const auto& nu : support_a.elements) {
                if (pairs.size() >= cap) break;
                if (support_b.contains(mu) && support_b.contains(nu)) pairs.emplace_back(mu, nu);
            }
            if (pairs.size() >= cap) break;
        }
        const auto result = compare_minimal_dilations(dil_a, dil_b, pairs);
        rec["pairs"] = pairs.size();
        rec["defect_a"] = result.defect_a;
        rec["defect_b"] = result.defect_b;
        rec["verdict"] =
            verdict_of(result.defect_a <= tolerance && result.defect_b <= tolerance);
        return rec;
    }

    const SupportSet support = ctx.support_for(task, "verify");
    const DilationSpace dil =
        build_dilation(ctx.representation(), support, ctx.dilation_options());
    if (check == "isometry") {
        const double defect = verify_isometry(dil, element("s"));
        rec["defect"] = defect;
        rec["verdict"] = verdict_of(defect <= tolerance);
    } else if (check == "regularity") {
        const double defect = verify_regularity(dil, element("g"));
        rec["defect"] = defect;
        rec["verdict"] = verdict_of(defect <= tolerance);
    } else if (check == "nica") {
        const auto result =
            verify_nica_dilation(dil, element("s"), element("t"), element("mu"), element("nu"));
        rec["defect"] = result.defect;
        rec["restricted_defect"] = result.restricted_defect;
        rec["verdict"] =
            verdict_of(result.defect <= tolerance && result.restricted_defect <= tolerance);
    } else {
        schema_fail("verify.check must be isometry, regularity, nica or uniqueness");
    }
    return rec;
}

Json task_schur_check(const Context& ctx, const Json& task, std::uint64_t task_seed) {
    const int m = get_int(require_key(task, "m", "schur_check"), "schur_check.m");
    const int block_dim =
        get_int(require_key(task, "block_dim", "schur_check"), "schur_check.block_dim");
    const int trials = task.value("trials", 20);
    const double tolerance = task.value("tolerance", 1e-10);
    if (m <= 0 || block_dim <= 0 || trials <= 0)
        schema_fail("schur_check: m, block_dim and trials must be positive");

    // Tensor-structured commuting entries: A entries act on the left leg,
    // B entries on the right leg of block_dim = dx * dy (balanced split).
    int dx = block_dim;
    for (int c = 1; c * c <= block_dim; ++c)
        if (block_dim % c == 0) dx = block_dim / c;
    const int dy = block_dim / dx;

    double max_defect = 0.0, min_eig = std::numeric_limits<double>::infinity();
    double max_isometry_defect = 0.0;
    Rng rng(task_seed);
    for (int trial = 0; trial < trials; ++trial) {
        const CMatrix ax = rng.random_psd(m * dx);
        const CMatrix by = rng.random_psd(m * dy);
        const BlockMatrix a0 = BlockMatrix::from_matrix(ax, m);
        const BlockMatrix b0 = BlockMatrix::from_matrix(by, m);
        BlockMatrix a, b;
        a.m = b.m = m;
        a.block_dim = b.block_dim = block_dim;
        a.blocks.resize(static_cast<std::size_t>(m) * m);
        b.blocks.resize(static_cast<std::size_t>(m) * m);
        const CMatrix eye_x = CMatrix::Identity(dx, dx);
        const CMatrix eye_y = CMatrix::Identity(dy, dy);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) {
                a.block(i, j) = kron(a0.block(i, j), eye_y);
                b.block(i, j) = kron(eye_x, b0.block(i, j));
            }
        const auto lifted = lift_compress_check(a, b, ctx.tol);
        max_defect = std::max(max_defect, lifted.defect);
        min_eig = std::min(min_eig, eigen_floor(lifted.schur).min_eigenvalue);

        const CMatrix r = selection_isometry(m, block_dim);
        max_isometry_defect =
            std::max(max_isometry_defect,
                     op_norm(r.adjoint() * r - CMatrix::Identity(m * block_dim, m * block_dim)));
    }
    Json rec;
    rec["trials"] = trials;
    rec["leg_split"] = Json::array({dx, dy});
    rec["max_lift_defect"] = max_defect;
    rec["isometry_defect"] = max_isometry_defect;
    rec["min_schur_eigenvalue"] = min_eig;
    rec["tolerance"] = tolerance;
    rec["verdict"] = verdict_of(max_defect <= tolerance && min_eig >= -tolerance &&
                                max_isometry_defect <= tolerance);
    return rec;
}

Json task_induced(const Context& ctx, const Json& task) {
    const CovariantPair& pair = ctx.covariant_pair();
    const SupportSet support = ctx.support_for(task, "induced");
    const double tolerance = task.value("tolerance", 1e-10);
    const auto result = induced_representation(pair.system, pair.sigma, support);
    Json rec;
    rec["support_size"] = support.size();
    rec["dim"] = result.pair.sigma.dim();
    rec["covariance_defect"] = result.covariance_defect;
    rec["interior_nica_defect"] = result.interior_nica_defect;
    rec["interior_isometry_defect"] = result.interior_isometry_defect;
    rec["boundary_columns"] = result.boundary_columns;
    rec["tolerance"] = tolerance;
    rec["verdict"] = verdict_of(result.covariance_defect <= tolerance &&
                                result.interior_nica_defect <= tolerance &&
                                result.interior_isometry_defect <= tolerance);
    return rec;
}

Json task_norm_estimate(const Context& ctx, const Json& task, std::uint64_t task_seed) {
    const CovariantPair& pair = ctx.covariant_pair();
    const Polynomial p =
        parse_polynomial(require_key(task, "polynomial", "norm_estimate"), ctx, "norm_estimate");
    SamplerConfig config;
    config.seed = task_seed;
    config.samples = task.value("samples", 100);
    config.max_multiplicity = task.value("multiplicity_cap", 2);
    config.support_depth = task.contains("depth") ? get_int(task.at("depth"), "depth") : 1;
    config.tol = task.value("tolerance", 1e-8);
    config.max_gram_dim = ctx.max_gram_dim;

    const auto result = estimate_norms(pair.system, p, config);
    Json rec;
    rec["samples_used"] = result.samples_used;
    rec["samples_rejected"] = result.samples_rejected;
    rec["seed"] = result.seed;
    rec["contractive_sup"] = result.contractive_sup;
    rec["isometric_sup"] = result.isometric_sup;
    rec["min_gap"] = result.min_gap;
    rec["tolerance"] = config.tol;
    rec["note"] = "sup values are lower bounds on the universal norms";
    rec["verdict"] = verdict_of(result.min_gap >= -config.tol);
    return rec;
}

Json task_gauge(const Context& ctx, const Json& task, std::uint64_t task_seed) {
    const CovariantPair& pair = ctx.covariant_pair();
    const Polynomial p =
        parse_polynomial(require_key(task, "polynomial", "gauge"), ctx, "gauge");
    const double tolerance = task.value("tolerance", 1e-10);

    std::vector<std::vector<std::vector<double>>> characters;
    if (task.contains("thetas")) {
        for (const auto& th : task.at("thetas")) {
            std::vector<std::vector<double>> theta;
            if (!th.is_array() || th.size() != ctx.spec->factor_count())
                schema_fail("gauge.thetas: one phase array per factor required");
            for (std::size_t i = 0; i < th.size(); ++i) {
                std::vector<double> row;
                for (const auto& v : th[i]) row.push_back(get_double(v, "gauge.thetas"));
                if (row.size() != ctx.spec->factor(i).generators.size())
                    schema_fail("gauge.thetas: phase count mismatch in factor " +
                                std::to_string(i));
                theta.push_back(std::move(row));
            }
            characters.push_back(std::move(theta));
        }
    } else {
        const int count = task.value("characters", 8);
        Rng rng(task_seed);
        for (int c = 0; c < count; ++c) {
            std::vector<std::vector<double>> theta;
            for (std::size_t i = 0; i < ctx.spec->factor_count(); ++i) {
                std::vector<double> row;
                for (std::size_t j = 0; j < ctx.spec->factor(i).generators.size(); ++j)
                    row.push_back(rng.uniform(0.0, 2.0 * M_PI));
                theta.push_back(std::move(row));
            }
            characters.push_back(std::move(theta));
        }
    }

    double max_defect = 0.0;
    for (const auto& theta : characters) {
        const Polynomial transformed = gauge_transform(p, theta);
        const double lhs = op_norm(eval_polynomial(pair, transformed));
        CovariantPair scaled = pair;
        scaled.rep = pair.rep.phase_scaled(theta);
        const double rhs = op_norm(eval_polynomial(scaled, p));
        max_defect = std::max(max_defect, std::abs(lhs - rhs));
    }
    Json rec;
    rec["characters"] = characters.size();
    rec["max_identity_defect"] = max_defect;
    rec["tolerance"] = tolerance;
    rec["verdict"] = verdict_of(max_defect <= tolerance);
    return rec;
}

Json run_task(const Context& ctx, const Json& task, std::size_t index) {
    const auto start = std::chrono::steady_clock::now();
    Json rec;
    const std::string type =
        require_key(task, "type", "tasks[" + std::to_string(index) + "]").get<std::string>();
    rec["name"] = type;
    rec["index"] = index;
    rec["parameters"] = task;
    const std::uint64_t task_seed = derive_seed(ctx.seed, index);
    try {
        Json body;
        if (type == "kernel_check")
            body = task_kernel_check(ctx, task);
        else if (type == "dilate")
            body = task_dilate(ctx, task);
        else if (type == "verify")
            body = task_verify(ctx, task, task_seed);
        else if (type == "schur_check")
            body = task_schur_check(ctx, task, task_seed);
        else if (type == "induced")
            body = task_induced(ctx, task);
        else if (type == "norm_estimate")
            body = task_norm_estimate(ctx, task, task_seed);
        else if (type == "gauge")
            body = task_gauge(ctx, task, task_seed);
        else
            schema_fail("unknown task type '" + type + "'");
        rec.update(body);
    } catch (const SchemaError&) {
        throw;
    } catch (const Json::exception& e) {
        schema_fail("tasks[" + std::to_string(index) + "]: malformed value: " + e.what());
    } catch (const Error& e) {
        rec["error"] = {{"code", e.code()}, {"message", e.what()}};
        rec["verdict"] = "error";
    } catch (const std::exception& e) {
        rec["error"] = {{"code", "Internal"}, {"message", e.what()}};
        rec["verdict"] = "error";
    }
    const auto stop = std::chrono::steady_clock::now();
    rec["wall_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
    return rec;
}

} // namespace

ScenarioResult run_scenario_json(const Json& scenario, const RunFlags& flags) {
    ScenarioResult result;
    Json& report = result.report;
    report["tool"] = "nicadil";
    report["version"] = kVersion;
    report["schema_version"] = kScenarioSchemaVersion;

    try {
        if (!scenario.is_object()) schema_fail("scenario must be a JSON object");

        Context ctx;
        ctx.spec = parse_factors(require_key(scenario, "factors", "scenario"));
        ctx.seed = flags.seed.value_or(scenario.value("seed", 0ULL));
        ctx.depth = flags.depth.value_or(scenario.value("depth", 2));
        if (scenario.contains("tolerances")) {
            const Json& tols = scenario.at("tolerances");
            ctx.tol = tols.value("tol", ctx.tol);
            ctx.tol_psd = tols.value("tol_psd", ctx.tol_psd);
        }
        if (flags.tol) ctx.tol = *flags.tol;
        if (scenario.contains("caps")) {
            const Json& caps = scenario.at("caps");
            ctx.max_gram_dim = caps.value("max_gram_dim", ctx.max_gram_dim);
            ctx.max_grid = caps.value("max_grid", ctx.max_grid);
        }

        Json environment;
        environment["seed"] = ctx.seed;
        environment["depth"] = ctx.depth;
        environment["tolerances"] = {{"tol", ctx.tol}, {"tol_psd", ctx.tol_psd}};
        environment["caps"] = {{"max_gram_dim", ctx.max_gram_dim}, {"max_grid", ctx.max_grid}};
        report["environment"] = environment;

        if (scenario.contains("representation") && scenario.contains("covariant_pair"))
            schema_fail("scenario declares both a representation and a covariant pair");

        RepOptions rep_options;
        rep_options.tol = ctx.tol;
        rep_options.tol_psd = ctx.tol_psd;

        try {
            Json setup;
            if (scenario.contains("representation")) {
                ctx.rep = parse_representation(scenario.at("representation"), ctx.spec,
                                               rep_options);
                const auto validation = ctx.rep->validate();
                setup["rep_validation"] = {
                    {"norm_excess", validation.max_norm_excess},
                    {"within_factor_defect", validation.max_within_factor_defect},
                    {"cross_factor_defect", validation.max_cross_factor_defect},
                    {"passed", validation.passed}};
            } else if (scenario.contains("covariant_pair")) {
                ctx.pair = parse_pair(scenario.at("covariant_pair"), ctx.spec, rep_options);
                ctx.rep = ctx.pair->rep;
                const auto system_report = validate_system(ctx.pair->system, ctx.tol);
                const auto pair_report = validate_covariance(*ctx.pair, ctx.tol);
                setup["system_validation"] = {
                    {"unitarity_defect", system_report.max_unitarity_defect},
                    {"conjugation_commute_defect",
                     system_report.max_conjugation_commute_defect},
                    {"unitality_defect", system_report.max_unitality_defect},
                    {"passed", system_report.passed}};
                setup["pair_validation"] = {
                    {"covariance_defect", pair_report.max_covariance_defect},
                    {"sigma_star_defect", pair_report.sigma_star_defect},
                    {"rep_passed", pair_report.rep_report.passed},
                    {"passed", pair_report.passed}};
            }
            report["setup"] = setup;
        } catch (const Error& e) {
            if (dynamic_cast<const SchemaError*>(&e)) throw;
            report["setup_error"] = {{"code", e.code()}, {"message", e.what()}};
            report["tasks"] = Json::array();
            report["verdict"] = "error";
            result.exit_code = 3;
            return result;
        }

        const Json& tasks = require_key(scenario, "tasks", "scenario");
        if (!tasks.is_array()) schema_fail("tasks must be an array");

        std::vector<Json> records(tasks.size());
        if (flags.parallel) {
            std::vector<std::future<Json>> futures;
            futures.reserve(tasks.size());
            for (std::size_t i = 0; i < tasks.size(); ++i)
                futures.push_back(std::async(std::launch::async, [&ctx, &tasks, i] {
                    return run_task(ctx, tasks[i], i);
                }));
            for (std::size_t i = 0; i < tasks.size(); ++i) records[i] = futures[i].get();
        } else {
            for (std::size_t i = 0; i < tasks.size(); ++i) records[i] = run_task(ctx, tasks[i], i);
        }

        bool any_fail = false, any_error = false;
        Json out_tasks = Json::array();
        for (auto& rec : records) {
            const std::string verdict = rec.value("verdict", "error");
            any_fail = any_fail || verdict == "fail";
            any_error = any_error || verdict == "error";
            out_tasks.push_back(std::move(rec));
        }
        report["tasks"] = std::move(out_tasks);
        report["verdict"] = any_error ? "error" : (any_fail ? "fail" : "pass");
        result.exit_code = any_error ? 3 : (any_fail ? 1 : 0);
        return result;
    } catch (const SchemaError& e) {
        report["schema_error"] = e.what();
        report["verdict"] = "error";
        result.exit_code = 2;
        return result;
    } catch (const Json::exception& e) {
        report["schema_error"] = std::string("malformed scenario value: ") + e.what();
        report["verdict"] = "error";
        result.exit_code = 2;
        return result;
    }
}

ScenarioResult run_scenario_file(const std::string& path, const RunFlags& flags) {
    std::ifstream in(path);
    if (!in) {
        ScenarioResult result;
        result.report["tool"] = "nicadil";
        result.report["version"] = kVersion;
        result.report["schema_error"] = "cannot open scenario file '" + path + "'";
        result.report["verdict"] = "error";
        result.exit_code = 2;
        return result;
    }
    Json scenario;
    try {
        scenario = Json::parse(in);
    } catch (const std::exception& e) {
        ScenarioResult result;
        result.report["tool"] = "nicadil";
        result.report["version"] = kVersion;
        result.report["schema_error"] = std::string("JSON parse error: ") + e.what();
        result.report["verdict"] = "error";
        result.exit_code = 2;
        return result;
    }
    return run_scenario_json(scenario, flags);
}

std::string report_to_string(const Json& report, bool mask_timing) {
    if (!mask_timing) return report.dump(2) + "\n";
    Json masked = report;
    // Recursive replacement of every wall_ms value.
    std::function<void(Json&)> scrub = [&](Json& node) {
        if (node.is_object()) {
            for (auto& [key, value] : node.items()) {
                if (key == "wall_ms")
                    value = 0.0;
                else
                    scrub(value);
            }
        } else if (node.is_array()) {
            for (auto& value : node) scrub(value);
        }
    };
    scrub(masked);
    return masked.dump(2) + "\n";
}

} // namespace nicadil
