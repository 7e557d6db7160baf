#include "msos/conic.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace msos {

using nlohmann::json;

SymMatrix PsdBlock::assemble(const Vector& z) const {
    SymMatrix m = constant.size() > 0 ? constant : SymMatrix::Zero(dim, dim);
    for (const auto& [var, coeff] : terms) m += z[var] * coeff;
    return m;
}

namespace {

json packed_lower(const SymMatrix& m) {
    json out = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j <= i; ++j) out.push_back(m(i, j));
    }
    return out;
}

SymMatrix unpack_lower(const json& arr, int dim) {
    SymMatrix m(dim, dim);
    int idx = 0;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = arr.at(idx++).get<double>();
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

}  // namespace

json ConicProgram::to_json() const {
    json j;
    j["format"] = "msos-conic-program";
    j["version"] = 1;
    j["num_vars"] = num_vars;
    j["maximize"] = maximize;
    j["objective"] = std::vector<double>(objective.data(), objective.data() + objective.size());
    json eqs = json::array();
    for (int r = 0; r < eq_lhs.rows(); ++r) {
        json row;
        json coeffs = json::array();
        for (int c = 0; c < num_vars; ++c) {
            if (eq_lhs(r, c) != 0.0) coeffs.push_back({c, eq_lhs(r, c)});
        }
        row["coeffs"] = coeffs;
        row["rhs"] = eq_rhs[r];
        eqs.push_back(row);
    }
    j["equalities"] = eqs;
    json blks = json::array();
    for (const auto& b : blocks) {
        json bj;
        bj["name"] = b.name;
        bj["dim"] = b.dim;
        if (b.constant.size() > 0 && b.constant.cwiseAbs().maxCoeff() > 0.0) {
            bj["constant"] = packed_lower(b.constant);
        }
        json terms = json::array();
        for (const auto& [var, coeff] : b.terms) {
            json t;
            t["var"] = var;
            if (var < static_cast<int>(var_exponents.size())) {
                t["exponent"] = var_exponents[var];
            }
            t["lower"] = packed_lower(coeff);
            terms.push_back(t);
        }
        bj["terms"] = terms;
        blks.push_back(bj);
    }
    j["blocks"] = blks;
    if (!var_exponents.empty()) j["var_exponents"] = var_exponents;
    return j;
}

ConicProgram ConicProgram::from_json(const json& j) {
    ConicProgram p;
    p.num_vars = j.at("num_vars").get<int>();
    p.maximize = j.value("maximize", false);
    const auto obj = j.at("objective").get<std::vector<double>>();
    if (static_cast<int>(obj.size()) != p.num_vars) {
        throw std::invalid_argument("ConicProgram::from_json: objective length mismatch");
    }
    p.objective = Eigen::Map<const Vector>(obj.data(), obj.size());
    const auto& eqs = j.at("equalities");
    p.eq_lhs = Eigen::MatrixXd::Zero(eqs.size(), p.num_vars);
    p.eq_rhs = Vector::Zero(eqs.size());
    for (std::size_t r = 0; r < eqs.size(); ++r) {
        for (const auto& cv : eqs[r].at("coeffs")) {
            p.eq_lhs(r, cv.at(0).get<int>()) = cv.at(1).get<double>();
        }
        p.eq_rhs[r] = eqs[r].at("rhs").get<double>();
    }
    for (const auto& bj : j.at("blocks")) {
        PsdBlock b;
        b.name = bj.value("name", "");
        b.dim = bj.at("dim").get<int>();
        b.constant = bj.contains("constant") ? unpack_lower(bj.at("constant"), b.dim)
                                             : SymMatrix::Zero(b.dim, b.dim);
        for (const auto& t : bj.at("terms")) {
            b.terms.emplace_back(t.at("var").get<int>(), unpack_lower(t.at("lower"), b.dim));
        }
        p.blocks.push_back(std::move(b));
    }
    if (j.contains("var_exponents")) {
        p.var_exponents = j.at("var_exponents").get<std::vector<Exponent>>();
    }
    return p;
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::kOptimal: return "optimal";
        case SolveStatus::kUnboundedBelow: return "unbounded_below";
        case SolveStatus::kInfeasible: return "infeasible";
        case SolveStatus::kNumericalTrouble: return "numerical_trouble";
    }
    return "numerical_trouble";
}

SolveStatus solve_status_from_string(const std::string& s) {
    if (s == "optimal") return SolveStatus::kOptimal;
    if (s == "unbounded_below") return SolveStatus::kUnboundedBelow;
    if (s == "infeasible") return SolveStatus::kInfeasible;
    if (s == "numerical_trouble") return SolveStatus::kNumericalTrouble;
    throw std::invalid_argument("unknown solve status: " + s);
}

MomentSequence SolveResult::as_moments(int num_vars, int max_degree) const {
    return MomentSequence(num_vars, max_degree, solution);
}

json SolveResult::to_json() const {
    json j;
    j["format"] = "msos-solve-result";
    j["version"] = 1;
    j["status"] = msos::to_string(status);
    j["value"] = value;
    j["solution"] = std::vector<double>(solution.data(), solution.data() + solution.size());
    json duals = json::array();
    for (const auto& d : block_duals) duals.push_back(packed_lower(d));
    j["block_duals"] = duals;
    j["complementarity"] = complementarity;
    j["feasibility_error"] = feasibility_error;
    j["duality_gap"] = duality_gap;
    j["iterations"] = iterations;
    return j;
}

SolveResult SolveResult::from_json(const json& j) {
    SolveResult r;
    r.status = solve_status_from_string(j.at("status").get<std::string>());
    r.value = j.at("value").get<double>();
    const auto sol = j.at("solution").get<std::vector<double>>();
    r.solution = Eigen::Map<const Vector>(sol.data(), sol.size());
    for (const auto& d : j.at("block_duals")) {
        // dim from the packed length L = dim(dim+1)/2
        const int len = static_cast<int>(d.size());
        int dim = 0;
        while (dim * (dim + 1) / 2 < len) ++dim;
        r.block_duals.push_back(unpack_lower(d, dim));
    }
    r.complementarity = j.value("complementarity", std::vector<double>{});
    r.feasibility_error = j.value("feasibility_error", 0.0);
    r.duality_gap = j.value("duality_gap", 0.0);
    r.iterations = j.value("iterations", 0);
    return r;
}

ConicProgram build_qn(const Pop& pop, int n) {
    const int d = pop.num_vars();
    const int v = pop.max_constraint_half_degree();
    const int df = pop.objective_half_degree();
    const int n_min = std::max(pop.unconstrained() ? 1 : v, std::max(1, df));
    if (n < n_min) {
        std::ostringstream os;
        os << "build_qn: order " << n << " too small; minimal admissible order is " << n_min;
        throw std::invalid_argument(os.str());
    }

    ConicProgram prog;
    const MonomialBasis vars(d, 2 * n);
    prog.num_vars = vars.size();
    prog.var_exponents = vars.exponents();
    prog.objective = Vector::Zero(prog.num_vars);
    for (const auto& [e, c] : pop.objective().terms()) {
        prog.objective[vars.index_of(e)] = c;
    }

    // phi(1) = 1 is the only equality.
    prog.eq_lhs = Eigen::MatrixXd::Zero(1, prog.num_vars);
    prog.eq_lhs(0, 0) = 1.0;
    prog.eq_rhs = Vector::Constant(1, 1.0);

    auto add_block = [&](const std::string& name, int k, const Polynomial& g) {
        PsdBlock b;
        b.name = name;
        b.dim = static_cast<int>(basis_size(d, k));
        b.constant = SymMatrix::Zero(b.dim, b.dim);
        for (auto& [alpha, mat] : basis_matrices(d, k, g)) {
            b.terms.emplace_back(vars.index_of(alpha), mat);
        }
        prog.blocks.push_back(std::move(b));
    };

    add_block("moment", n, Polynomial::constant(d, 1.0));
    for (int j = 0; j < pop.num_constraints(); ++j) {
        add_block("localizing:g" + std::to_string(j + 1), n - pop.constraint_half_degree(j),
                  pop.constraint(j));
    }
    return prog;
}

ConicProgram build_unconstrained(const Polynomial& f) {
    const int deg = f.degree();
    if (deg % 2 != 0) {
        throw std::invalid_argument(
            "build_unconstrained: odd-degree objective is unbounded below");
    }
    if (deg < 2) {
        throw std::invalid_argument("build_unconstrained: constant objective needs no relaxation");
    }
    return build_qn(Pop(f, {}), deg / 2);
}

ConicProgram build_unconstrained_dual(const Polynomial& f) {
    const int deg = f.degree();
    if (deg % 2 != 0) {
        throw std::invalid_argument(
            "build_unconstrained_dual: odd-degree objective is unbounded below");
    }
    if (deg < 2) {
        throw std::invalid_argument("build_unconstrained_dual: constant objective");
    }
    const int n = deg / 2;
    const int d = f.num_vars();
    const MonomialBasis vn(d, n);
    const MonomialBasis v2n(d, 2 * n);
    const int s = vn.size();

    // Decision vector: lambda at index 0, then vech(Q) row-major lower.
    ConicProgram prog;
    prog.num_vars = 1 + s * (s + 1) / 2;
    prog.maximize = true;
    prog.objective = Vector::Zero(prog.num_vars);
    prog.objective[0] = 1.0;

    auto vech_index = [&](int i, int j) {  // i >= j
        return 1 + i * (i + 1) / 2 + j;
    };

    // Coefficient matching: for every |alpha| <= 2n,
    //   sum_{b_i + b_j = alpha} Q_ij + lambda*[alpha=0] = f_alpha.
    prog.eq_lhs = Eigen::MatrixXd::Zero(v2n.size(), prog.num_vars);
    prog.eq_rhs = Vector::Zero(v2n.size());
    prog.eq_lhs(0, 0) = 1.0;
    Exponent sum(d);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j <= i; ++j) {
            for (int t = 0; t < d; ++t) sum[t] = vn[i][t] + vn[j][t];
            const int row = v2n.index_of(sum);
            prog.eq_lhs(row, vech_index(i, j)) += (i == j) ? 1.0 : 2.0;
        }
    }
    for (const auto& [e, c] : f.terms()) prog.eq_rhs[v2n.index_of(e)] = c;

    PsdBlock gram;
    gram.name = "gram";
    gram.dim = s;
    gram.constant = SymMatrix::Zero(s, s);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j <= i; ++j) {
            SymMatrix e = SymMatrix::Zero(s, s);
            e(i, j) = 1.0;
            e(j, i) = 1.0;
            gram.terms.emplace_back(vech_index(i, j), std::move(e));
        }
    }
    prog.blocks.push_back(std::move(gram));
    return prog;
}

Pop scale_pop(const Pop& pop, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("scale_pop: radius must be positive");
    auto scale_poly = [&](const Polynomial& p) {
        Polynomial out(p.num_vars());
        for (const auto& [e, c] : p.terms()) {
            out.add_term(e, c * std::pow(radius, total_degree(e)));
        }
        return out;
    };
    std::vector<Polynomial> gs;
    gs.reserve(pop.num_constraints());
    for (const auto& g : pop.constraints()) gs.push_back(scale_poly(g));
    return Pop(scale_poly(pop.objective()), std::move(gs));
}

}  // namespace msos
