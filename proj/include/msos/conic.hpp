#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "msos/moment.hpp"
#include "msos/polynomial.hpp"

namespace msos {

// One PSD constraint: constant + sum_i z_i * terms[i] >= 0 (as a matrix).
// Term matrices are symmetric; only variables that actually appear in the
// block are stored.
struct PsdBlock {
    std::string name;
    int dim = 0;
    SymMatrix constant;  // dim x dim; zero for moment-style blocks
    std::vector<std::pair<int, SymMatrix>> terms;

    SymMatrix assemble(const Vector& z) const;
};

// Standard-form conic program over a real decision vector z:
//   minimize (or maximize) objective . z
//   subject to eq_lhs * z = eq_rhs and every PsdBlock PSD.
// For moment relaxations z is the pseudo-moment vector itself and
// var_exponents labels each coordinate with its monomial.
struct ConicProgram {
    int num_vars = 0;
    bool maximize = false;
    Vector objective;
    Eigen::MatrixXd eq_lhs;  // n_eq x num_vars
    Vector eq_rhs;
    std::vector<PsdBlock> blocks;
    std::vector<Exponent> var_exponents;  // empty when coordinates are not monomials

    nlohmann::json to_json() const;
    static ConicProgram from_json(const nlohmann::json& j);
};

enum class SolveStatus { kOptimal, kUnboundedBelow, kInfeasible, kNumericalTrouble };

std::string to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

struct SolveResult {
    SolveStatus status = SolveStatus::kNumericalTrouble;
    double value = 0.0;          // objective in the program's stated sense
    Vector solution;             // decision vector z
    std::vector<SymMatrix> block_duals;        // PSD multiplier per block
    std::vector<double> complementarity;       // <block(z), dual> per block
    double feasibility_error = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;

    // Reinterpret the solution as a pseudo-moment sequence (moment
    // relaxations only).
    MomentSequence as_moments(int num_vars, int max_degree) const;

    nlohmann::json to_json() const;
    static SolveResult from_json(const nlohmann::json& j);
};

// Degree-n relaxation of a POP: decision vector phi over basis(d, 2n),
// moment block M_n(phi), localizing block M_{n-d_j}(g_j phi) per
// constraint, and the single equality phi_0 = 1; minimizes phi(f).
// Requires n >= max(v, d_f).
ConicProgram build_qn(const Pop& pop, int n);

// Single relaxation for unconstrained minimization of an even-degree f:
// one moment block M_n(phi) with 2n = deg(f). Throws for odd degree
// (such f is unbounded below; callers report that analytically).
ConicProgram build_unconstrained(const Polynomial& f);

// SOS side of the unconstrained relaxation: maximize lambda subject to
// f - lambda = v_n(x)^T Q v_n(x), Q PSD, via coefficient matching.
// Decision vector: (lambda, vech(Q)).
ConicProgram build_unconstrained_dual(const Polynomial& f);

// Rescale a POP by x -> x / radius (coefficients pick up radius^|alpha|).
Pop scale_pop(const Pop& pop, double radius);

}  // namespace msos
