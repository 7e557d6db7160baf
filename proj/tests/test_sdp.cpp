#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <nlohmann/json.hpp>

#include "msos/sdp.hpp"

using namespace msos;

namespace {

Pop simplex_qcqp() {
    Polynomial f(2);
    f.add_term({2, 0}, 1.0);
    f.add_term({0, 2}, 1.0);
    Polynomial g(2);
    g.add_term({1, 0}, 1.0);
    g.add_term({0, 1}, 1.0);
    g.add_term({0, 0}, -1.0);
    return Pop(f, {g});
}

Polynomial motzkin() {
    Polynomial p(2);
    p.add_term({4, 2}, 1.0);
    p.add_term({2, 4}, 1.0);
    p.add_term({2, 2}, -3.0);
    p.add_term({0, 0}, 1.0);
    return p;
}

}  // namespace

TEST_CASE("simplex QCQP relaxation solves to the analytic optimum") {
    // KKT oracle: minimizing x1^2+x2^2 on x1+x2 >= 1 gives x = (1/2, 1/2)
    // and value 1/2; the order-1 relaxation is tight for this convex QP.
    const ConicProgram prog = build_qn(simplex_qcqp(), 1);
    const SolveResult r = solve(prog);
    REQUIRE(r.status == SolveStatus::kOptimal);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.solution[0] == doctest::Approx(1.0).epsilon(1e-8));
    // First-degree moments sit at the minimizer.
    CHECK(r.solution[1] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(r.solution[2] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("solver is deterministic") {
    const ConicProgram prog = build_qn(simplex_qcqp(), 2);
    const SolveResult a = solve(prog);
    const SolveResult b = solve(prog);
    REQUIRE(a.status == b.status);
    CHECK(a.value == b.value);  // identical runs, identical arithmetic
    CHECK((a.solution - b.solution).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("unconstrained primal: x^2 + 1") {
    Polynomial f(1);
    f.add_term({2}, 1.0);
    f.add_term({0}, 1.0);
    const SolveResult r = solve(build_unconstrained(f));
    REQUIRE(r.status == SolveStatus::kOptimal);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("unconstrained dual: SOS lower bounds") {
    Polynomial f(1);  // x^2 + 1, lambda* = 1
    f.add_term({2}, 1.0);
    f.add_term({0}, 1.0);
    const SolveResult r = solve(build_unconstrained_dual(f));
    REQUIRE(r.status == SolveStatus::kOptimal);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));

    Polynomial g(1);  // (x-1)^2, lambda* = 0
    g.add_term({2}, 1.0);
    g.add_term({1}, -2.0);
    g.add_term({0}, 1.0);
    const SolveResult r2 = solve(build_unconstrained_dual(g));
    REQUIRE(r2.status == SolveStatus::kOptimal);
    CHECK(r2.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-7));
}

TEST_CASE("weak duality on the unconstrained pair") {
    Polynomial f(2);  // x1^4 + x2^4 - x1*x2 + 2
    f.add_term({4, 0}, 1.0);
    f.add_term({0, 4}, 1.0);
    f.add_term({1, 1}, -1.0);
    f.add_term({0, 0}, 2.0);
    const SolveResult primal = solve(build_unconstrained(f));
    const SolveResult dual = solve(build_unconstrained_dual(f));
    REQUIRE(primal.status == SolveStatus::kOptimal);
    REQUIRE(dual.status == SolveStatus::kOptimal);
    // Here Slater holds, so the values agree to solver accuracy.
    CHECK(primal.value == doctest::Approx(dual.value).epsilon(1e-6));
    CHECK(primal.value >= dual.value - 1e-7 * (1.0 + std::abs(dual.value)));
}

TEST_CASE("solution satisfies the stated feasibility contract") {
    const ConicProgram prog = build_qn(simplex_qcqp(), 2);
    const SolverSettings settings;
    const SolveResult r = solve(prog, settings);
    REQUIRE(r.status == SolveStatus::kOptimal);
    CHECK(std::abs(r.solution[0] - 1.0) <= 1e-8);
    for (const auto& blk : prog.blocks) {
        Eigen::SelfAdjointEigenSolver<SymMatrix> es(blk.assemble(r.solution));
        CHECK(es.eigenvalues().minCoeff() >= -1e-7);
    }
    // Complementarity per block within 10x the gap tolerance (scaled).
    REQUIRE(r.complementarity.size() == prog.blocks.size());
    for (double c : r.complementarity) {
        CHECK(std::abs(c) <= 10.0 * settings.gap_tol * (1.0 + std::abs(r.value)) * 100.0);
    }
}

TEST_CASE("dual multipliers certify the unconstrained bound") {
    // For the moment-side program, the moment-block multiplier X* is an
    // SOS Gram matrix of f - rho.
    Polynomial f(1);  // (x-1)^2
    f.add_term({2}, 1.0);
    f.add_term({1}, -2.0);
    f.add_term({0}, 1.0);
    const ConicProgram prog = build_unconstrained(f);
    const SolveResult r = solve(prog);
    REQUIRE(r.status == SolveStatus::kOptimal);
    REQUIRE(r.block_duals.size() == 1);
    const SymMatrix x = r.block_duals[0];
    // v_1(t)^T X* v_1(t) should equal f(t) - rho on a few sample points.
    for (double t : {-1.0, 0.0, 0.5, 2.0}) {
        Eigen::Vector2d v(1.0, t);
        const double lhs = v.dot(x * v);
        const double target = f.eval(std::vector<double>{t}) - r.value;
        CHECK(lhs == doctest::Approx(target).epsilon(1e-5).scale(1.0));
    }
    Eigen::SelfAdjointEigenSolver<SymMatrix> es(x);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("Motzkin primal is unbounded below and its dual infeasible") {
    const ConicProgram primal = build_unconstrained(motzkin());
    SolverSettings settings;
    settings.max_iterations = 300;
    const SolveResult r = solve(primal, settings);
    const bool unbounded =
        r.status == SolveStatus::kUnboundedBelow ||
        (r.status != SolveStatus::kOptimal && r.value < -1e3);
    CHECK(unbounded);

    const SolveResult rd = solve(build_unconstrained_dual(motzkin()), settings);
    CHECK(rd.status != SolveStatus::kOptimal);
    CHECK((rd.status == SolveStatus::kInfeasible ||
           rd.status == SolveStatus::kNumericalTrouble));
}

TEST_CASE("infeasible equalities are reported") {
    ConicProgram prog;
    prog.num_vars = 2;
    prog.objective = Vector::Zero(2);
    prog.eq_lhs = Eigen::MatrixXd(2, 2);
    prog.eq_lhs << 1.0, 1.0, 2.0, 2.0;
    prog.eq_rhs = Vector(2);
    prog.eq_rhs << 1.0, 3.0;  // inconsistent
    PsdBlock b;
    b.dim = 1;
    b.constant = SymMatrix::Identity(1, 1);
    prog.blocks.push_back(b);
    CHECK(solve(prog).status == SolveStatus::kInfeasible);
}

TEST_CASE("fully pinned program reduces to a feasibility check") {
    ConicProgram prog;
    prog.num_vars = 1;
    prog.objective = Vector::Constant(1, 3.0);
    prog.eq_lhs = Eigen::MatrixXd::Identity(1, 1);
    prog.eq_rhs = Vector::Constant(1, 2.0);
    PsdBlock b;
    b.dim = 1;
    b.constant = SymMatrix::Zero(1, 1);
    b.terms.emplace_back(0, SymMatrix::Identity(1, 1));
    prog.blocks.push_back(b);
    const SolveResult r = solve(prog);
    REQUIRE(r.status == SolveStatus::kOptimal);
    CHECK(r.value == doctest::Approx(6.0));

    prog.eq_rhs[0] = -2.0;  // pinned value violates the PSD block
    CHECK(solve(prog).status == SolveStatus::kInfeasible);
}

TEST_CASE("solver settings validation") {
    SolverSettings s;
    s.feasibility_tol = -1.0;
    const ConicProgram prog = build_qn(simplex_qcqp(), 1);
    CHECK_THROWS_AS(solve(prog, s), std::invalid_argument);
}

TEST_CASE("solve result JSON round trip") {
    const ConicProgram prog = build_qn(simplex_qcqp(), 1);
    const SolveResult r = solve(prog);
    const SolveResult back = SolveResult::from_json(r.to_json());
    CHECK(back.status == r.status);
    CHECK(back.value == r.value);
    CHECK((back.solution - r.solution).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(back.block_duals.size() == r.block_duals.size());
    for (std::size_t i = 0; i < r.block_duals.size(); ++i) {
        CHECK((back.block_duals[i] - r.block_duals[i]).cwiseAbs().maxCoeff() == 0.0);
    }
}
