#include "msos/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <unistd.h>
#include <vector>

namespace msos {

using nlohmann::json;

void SolverSettings::validate() const {
    if (!(feasibility_tol > 0.0) || !(gap_tol > 0.0)) {
        throw std::invalid_argument("SolverSettings: tolerances must be positive");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("SolverSettings: max_iterations must be >= 1");
    }
}

namespace {

// The bundled solver works on the equality-free form
//   minimize  chat.t  s.t.  Chat_b + sum_l t_l Ahat_{b,l} >= 0,
// obtained by parameterizing {z : E z = e} as z = z_part + N t.
struct ReducedProgram {
    bool feasible = true;          // equality system consistent
    Vector z_part;                 // particular solution
    Eigen::MatrixXd nullspace;     // num_vars x k
    Vector chat;                   // reduced objective (minimization sense)
    double offset = 0.0;           // c . z_part
    std::vector<SymMatrix> chat_blocks;               // Chat_b
    std::vector<std::vector<SymMatrix>> ahat_blocks;  // per block, per reduced var
    std::vector<int> dims;
};

ReducedProgram reduce(const ConicProgram& prog) {
    ReducedProgram red;
    const int n = prog.num_vars;
    Vector c = prog.maximize ? Vector(-prog.objective) : prog.objective;

    if (prog.eq_lhs.rows() > 0) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(prog.eq_lhs,
                                           Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sing = svd.singularValues();
        const double smax = sing.size() > 0 ? sing[0] : 0.0;
        const double tol = std::max(prog.eq_lhs.rows(), static_cast<Eigen::Index>(n)) *
                           std::numeric_limits<double>::epsilon() * std::max(smax, 1.0);
        int rank = 0;
        while (rank < sing.size() && sing[rank] > tol) ++rank;
        Vector uty = svd.matrixU().transpose() * prog.eq_rhs;
        Vector w = Vector::Zero(svd.matrixV().cols());
        for (int i = 0; i < rank; ++i) w[i] = uty[i] / sing[i];
        red.z_part = svd.matrixV() * w;
        if ((prog.eq_lhs * red.z_part - prog.eq_rhs).norm() >
            1e-8 * (1.0 + prog.eq_rhs.norm())) {
            red.feasible = false;
            return red;
        }
        red.nullspace = svd.matrixV().rightCols(n - rank);
    } else {
        red.z_part = Vector::Zero(n);
        red.nullspace = Eigen::MatrixXd::Identity(n, n);
    }

    const int k = static_cast<int>(red.nullspace.cols());
    red.chat = red.nullspace.transpose() * c;
    red.offset = c.dot(red.z_part);

    for (const auto& b : prog.blocks) {
        SymMatrix c0 = b.constant.size() > 0 ? b.constant : SymMatrix::Zero(b.dim, b.dim);
        std::vector<SymMatrix> ahat(k, SymMatrix::Zero(b.dim, b.dim));
        for (const auto& [var, coeff] : b.terms) {
            c0 += red.z_part[var] * coeff;
            for (int l = 0; l < k; ++l) {
                const double w = red.nullspace(var, l);
                if (w != 0.0) ahat[l] += w * coeff;
            }
        }
        red.chat_blocks.push_back(symmetrized(c0));
        for (auto& m : ahat) m = symmetrized(m);
        red.ahat_blocks.push_back(std::move(ahat));
        red.dims.push_back(b.dim);
    }
    return red;
}

double min_eigenvalue(const SymMatrix& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<SymMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Finalize a result in the original variable space.
void finish(SolveResult& r, const ConicProgram& prog, const ReducedProgram& red,
            const Vector& t, const std::vector<SymMatrix>& duals) {
    r.solution = red.z_part + red.nullspace * t;
    const double value_min = red.chat.dot(t) + red.offset;
    r.value = prog.maximize ? -value_min : value_min;
    r.block_duals = duals;
    r.complementarity.clear();
    double worst_eig = 0.0;
    for (std::size_t b = 0; b < prog.blocks.size(); ++b) {
        const SymMatrix g = prog.blocks[b].assemble(r.solution);
        worst_eig = std::min(worst_eig, min_eigenvalue(g));
        r.complementarity.push_back(b < duals.size() ? g.cwiseProduct(duals[b]).sum() : 0.0);
    }
    double eq_err = 0.0;
    if (prog.eq_lhs.rows() > 0) {
        eq_err = (prog.eq_lhs * r.solution - prog.eq_rhs).cwiseAbs().maxCoeff();
    }
    r.feasibility_error = std::max(eq_err, -worst_eig);
}

// Nesterov-Todd scaling data for one block.
struct NtScaling {
    Eigen::MatrixXd g;     // W = g g^T
    Eigen::MatrixXd ginv;  // g^{-1}
    Vector lambda;         // g^T S g = g^{-1} X g^{-T} = diag(lambda)
};

NtScaling nt_scaling(const SymMatrix& x, const SymMatrix& s) {
    Eigen::LLT<SymMatrix> lx(x);
    Eigen::LLT<SymMatrix> ls(s);
    if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) {
        throw std::runtime_error("nt_scaling: iterate lost positive definiteness");
    }
    const Eigen::MatrixXd Lx = lx.matrixL();
    const Eigen::MatrixXd Ls = ls.matrixL();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ls.transpose() * Lx,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    NtScaling nt;
    nt.lambda = svd.singularValues();
    const Vector lam_isqrt = nt.lambda.cwiseSqrt().cwiseInverse();
    nt.g = Lx * svd.matrixV() * lam_isqrt.asDiagonal();
    nt.ginv = nt.lambda.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() *
              Lx.triangularView<Eigen::Lower>().solve(
                  Eigen::MatrixXd::Identity(x.rows(), x.rows()));
    return nt;
}

// Largest step alpha in [0, 1] keeping diag(lambda) + alpha * d PSD,
// shrunk by the boundary fraction tau.
double max_step(const Vector& lambda, const SymMatrix& d, double tau) {
    const Vector isqrt = lambda.cwiseSqrt().cwiseInverse();
    const SymMatrix scaled = isqrt.asDiagonal() * d * isqrt.asDiagonal();
    const double emin = min_eigenvalue(symmetrized(scaled));
    if (emin >= 0.0) return 1.0;
    return std::min(1.0, -tau / emin);
}

SolveResult ipm(const ConicProgram& prog, const ReducedProgram& red,
                const SolverSettings& settings) {
    const int k = static_cast<int>(red.chat.size());
    const int nblocks = static_cast<int>(red.dims.size());
    const Vector b = -red.chat;  // max b.y form of the reduced program
    int total_dim = 0;
    for (int d : red.dims) total_dim += d;

    SolveResult result;

    // Data norms for the relative measures and the starting point.
    double a_norm = 1.0, c_norm = 1.0;
    for (int bi = 0; bi < nblocks; ++bi) {
        c_norm = std::max(c_norm, red.chat_blocks[bi].norm());
        for (int l = 0; l < k; ++l) a_norm = std::max(a_norm, red.ahat_blocks[bi][l].norm());
    }
    const double b_norm = std::max(1.0, b.lpNorm<Eigen::Infinity>());

    std::vector<SymMatrix> X, S;
    const double xi_p = std::max({10.0, std::sqrt(static_cast<double>(total_dim)),
                                  static_cast<double>(total_dim) * b_norm / a_norm});
    const double xi_d = std::max({10.0, std::sqrt(static_cast<double>(total_dim)), c_norm, a_norm});
    for (int bi = 0; bi < nblocks; ++bi) {
        X.push_back(xi_p * SymMatrix::Identity(red.dims[bi], red.dims[bi]));
        S.push_back(xi_d * SymMatrix::Identity(red.dims[bi], red.dims[bi]));
    }
    Vector y = Vector::Zero(k);

    const double tau = 0.97;
    double best_error = std::numeric_limits<double>::infinity();
    Vector best_y = y;
    std::vector<SymMatrix> best_X = X;
    int iter = 0;

    auto pobj = [&]() {  // objective of the max-form dual pair's primal side
        double v = 0.0;
        for (int bi = 0; bi < nblocks; ++bi) v += red.chat_blocks[bi].cwiseProduct(X[bi]).sum();
        return v;
    };

    for (iter = 0; iter < settings.max_iterations; ++iter) {
        // Residuals.  A_l := -Ahat_l, C := Chat in the standard pair.
        Vector rp = b;
        for (int bi = 0; bi < nblocks; ++bi) {
            for (int l = 0; l < k; ++l) {
                rp[l] += red.ahat_blocks[bi][l].cwiseProduct(X[bi]).sum();
            }
        }
        std::vector<SymMatrix> rd(nblocks);
        for (int bi = 0; bi < nblocks; ++bi) {
            rd[bi] = red.chat_blocks[bi] - S[bi];
            for (int l = 0; l < k; ++l) rd[bi] += y[l] * red.ahat_blocks[bi][l];
        }

        double gap = 0.0;
        for (int bi = 0; bi < nblocks; ++bi) gap += X[bi].cwiseProduct(S[bi]).sum();
        const double mu = gap / total_dim;
        const double dobj = b.dot(y);
        const double primal = pobj();
        const double pinf = rp.lpNorm<Eigen::Infinity>() / b_norm;
        double dinf = 0.0;
        for (int bi = 0; bi < nblocks; ++bi) dinf = std::max(dinf, rd[bi].norm());
        dinf /= (1.0 + c_norm);
        const double relgap = std::abs(primal - dobj) / (1.0 + std::abs(primal) + std::abs(dobj));

        const double error = pinf + dinf + relgap;
        if (error < best_error) {
            best_error = error;
            best_y = y;
            best_X = X;
        }

        if (settings.verbose) {
            std::fprintf(stderr,
                         "iter %3d  mu %9.2e  pinf %9.2e  dinf %9.2e  gap %9.2e  obj %+.9e\n",
                         iter, mu, pinf, dinf, relgap, red.chat.dot(y) + red.offset);
        }

        if (pinf <= settings.feasibility_tol && dinf <= settings.feasibility_tol &&
            relgap <= settings.gap_tol) {
            result.status = SolveStatus::kOptimal;
            result.duality_gap = relgap;
            result.iterations = iter;
            finish(result, prog, red, y, X);
            return result;
        }

        // Unboundedness of the minimization: the iterate is essentially
        // feasible for the LMI side while the objective dives through the
        // floor.
        const double value_min = red.chat.dot(y) + red.offset;
        if (value_min < -settings.unbounded_floor && dinf <= std::sqrt(settings.feasibility_tol)) {
            result.status = SolveStatus::kUnboundedBelow;
            result.duality_gap = relgap;
            result.iterations = iter;
            finish(result, prog, red, y, X);
            return result;
        }
        // Farkas-style certificates from diverging iterates.
        if (dobj > 1.0) {
            double ray_res = 0.0;
            for (int bi = 0; bi < nblocks; ++bi) {
                SymMatrix m = S[bi];
                for (int l = 0; l < k; ++l) m -= y[l] * red.ahat_blocks[bi][l];
                ray_res = std::max(ray_res, m.norm());
            }
            if (ray_res / dobj < 1e-10 * a_norm && y.norm() > 1e6) {
                // improving ray for the max form: the minimization is unbounded
                result.status = SolveStatus::kUnboundedBelow;
                result.iterations = iter;
                finish(result, prog, red, y, X);
                return result;
            }
        }
        double xnorm = 0.0;
        for (int bi = 0; bi < nblocks; ++bi) xnorm += X[bi].squaredNorm();
        xnorm = std::sqrt(xnorm);
        if (xnorm > 1e8) {
            Vector ax_vec = Vector::Zero(k);
            double cx = 0.0;
            for (int bi = 0; bi < nblocks; ++bi) {
                for (int l = 0; l < k; ++l) {
                    ax_vec[l] -= red.ahat_blocks[bi][l].cwiseProduct(X[bi]).sum();
                }
                cx += red.chat_blocks[bi].cwiseProduct(X[bi]).sum();
            }
            const double ax = ax_vec.lpNorm<Eigen::Infinity>();
            if (ax / xnorm < 1e-9 * a_norm && cx / xnorm < -1e-9) {
                // improving ray for the min form's constraints: LMI infeasible
                result.status = SolveStatus::kInfeasible;
                result.iterations = iter;
                finish(result, prog, red, y, X);
                return result;
            }
        }

        // NT scaling per block.
        std::vector<NtScaling> nt;
        nt.reserve(nblocks);
        bool scaling_ok = true;
        for (int bi = 0; bi < nblocks; ++bi) {
            try {
                nt.push_back(nt_scaling(X[bi], S[bi]));
            } catch (const std::runtime_error&) {
                scaling_ok = false;
                break;
            }
        }
        if (!scaling_ok) break;

        // Scaled constraint matrices and the Schur complement.
        std::vector<std::vector<SymMatrix>> abar(nblocks);
        for (int bi = 0; bi < nblocks; ++bi) {
            abar[bi].resize(k);
            for (int l = 0; l < k; ++l) {
                abar[bi][l] =
                    symmetrized(nt[bi].g.transpose() * red.ahat_blocks[bi][l] * nt[bi].g);
            }
        }
        Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(k, k);
        for (int bi = 0; bi < nblocks; ++bi) {
            for (int l = 0; l < k; ++l) {
                for (int m = l; m < k; ++m) {
                    schur(l, m) += abar[bi][l].cwiseProduct(abar[bi][m]).sum();
                }
            }
        }
        schur = schur.selfadjointView<Eigen::Upper>();

        Eigen::LDLT<Eigen::MatrixXd> schur_fact(schur +
                                                1e-14 * schur.trace() *
                                                    Eigen::MatrixXd::Identity(k, k));
        if (schur_fact.info() != Eigen::Success) break;

        std::vector<SymMatrix> rd_bar(nblocks);
        for (int bi = 0; bi < nblocks; ++bi) {
            rd_bar[bi] = symmetrized(nt[bi].g.transpose() * rd[bi] * nt[bi].g);
        }

        // One Newton solve for a given scaled complementarity target T.
        auto newton = [&](const std::vector<SymMatrix>& tmat, Vector& dy,
                          std::vector<SymMatrix>& dxhat, std::vector<SymMatrix>& dshat) {
            Vector rhs = rp;
            for (int bi = 0; bi < nblocks; ++bi) {
                // rhs_l += <Abar_l, Rd_bar - T>   (A_l = -Ahat_l absorbed in signs)
                for (int l = 0; l < k; ++l) {
                    rhs[l] -= abar[bi][l].cwiseProduct(rd_bar[bi] - tmat[bi]).sum();
                }
            }
            dy = schur_fact.solve(rhs);
            dxhat.assign(nblocks, SymMatrix());
            dshat.assign(nblocks, SymMatrix());
            for (int bi = 0; bi < nblocks; ++bi) {
                // dS = Rd - sum_l dy_l A_l with A_l = -Ahat_l
                SymMatrix ds = rd[bi];
                for (int l = 0; l < k; ++l) ds += dy[l] * red.ahat_blocks[bi][l];
                dshat[bi] = symmetrized(nt[bi].g.transpose() * ds * nt[bi].g);
                dxhat[bi] = tmat[bi] - dshat[bi];
            }
        };

        // Predictor: aim at complementarity zero.
        std::vector<SymMatrix> tmat(nblocks);
        for (int bi = 0; bi < nblocks; ++bi) {
            const auto& lam = nt[bi].lambda;
            SymMatrix t(lam.size(), lam.size());
            for (int i = 0; i < lam.size(); ++i) {
                for (int j = 0; j < lam.size(); ++j) {
                    t(i, j) = (i == j) ? -lam[i] : 0.0;
                }
            }
            tmat[bi] = t;
        }
        Vector dy_a;
        std::vector<SymMatrix> dxhat_a, dshat_a;
        newton(tmat, dy_a, dxhat_a, dshat_a);

        double alpha_a = 1.0, beta_a = 1.0;
        for (int bi = 0; bi < nblocks; ++bi) {
            alpha_a = std::min(alpha_a, max_step(nt[bi].lambda, dxhat_a[bi], 1.0));
            beta_a = std::min(beta_a, max_step(nt[bi].lambda, dshat_a[bi], 1.0));
        }
        double gap_aff = 0.0;
        for (int bi = 0; bi < nblocks; ++bi) {
            const auto& lam = nt[bi].lambda;
            const SymMatrix xa = lam.asDiagonal().toDenseMatrix() + alpha_a * dxhat_a[bi];
            const SymMatrix sa = lam.asDiagonal().toDenseMatrix() + beta_a * dshat_a[bi];
            gap_aff += xa.cwiseProduct(sa).sum();
        }
        const double mu_aff = gap_aff / total_dim;
        double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);
        sigma = std::clamp(sigma, 1e-8, 1.0);

        // Corrector: sigma*mu on the diagonal minus the second-order term.
        for (int bi = 0; bi < nblocks; ++bi) {
            const auto& lam = nt[bi].lambda;
            const SymMatrix second =
                0.5 * (dxhat_a[bi] * dshat_a[bi] + dshat_a[bi] * dxhat_a[bi]);
            SymMatrix t(lam.size(), lam.size());
            for (int i = 0; i < lam.size(); ++i) {
                for (int j = 0; j < lam.size(); ++j) {
                    const double rhs_ij = (i == j ? sigma * mu - lam[i] * lam[i] : 0.0) -
                                          second(i, j);
                    t(i, j) = 2.0 * rhs_ij / (lam[i] + lam[j]);
                }
            }
            tmat[bi] = t;
        }
        Vector dy;
        std::vector<SymMatrix> dxhat, dshat;
        newton(tmat, dy, dxhat, dshat);

        double alpha = 1.0, beta = 1.0;
        for (int bi = 0; bi < nblocks; ++bi) {
            alpha = std::min(alpha, max_step(nt[bi].lambda, dxhat[bi], tau));
            beta = std::min(beta, max_step(nt[bi].lambda, dshat[bi], tau));
        }
        if (alpha < 1e-10 && beta < 1e-10) break;  // stalled

        for (int bi = 0; bi < nblocks; ++bi) {
            X[bi] = symmetrized(X[bi] + alpha * nt[bi].g * dxhat[bi] * nt[bi].g.transpose());
            SymMatrix ds = rd[bi];
            for (int l = 0; l < k; ++l) ds += dy[l] * red.ahat_blocks[bi][l];
            S[bi] = symmetrized(S[bi] + beta * ds);
        }
        y += beta * dy;
    }

    // No convergence: classify the best iterate.
    result.iterations = iter;
    const double value_min = red.chat.dot(best_y) + red.offset;
    double dinf_best = 0.0;
    for (int bi = 0; bi < nblocks; ++bi) {
        SymMatrix r = red.chat_blocks[bi];
        for (int l = 0; l < k; ++l) r += best_y[l] * red.ahat_blocks[bi][l];
        dinf_best = std::max(dinf_best, std::max(0.0, -min_eigenvalue(r)));
    }
    if (value_min < -settings.unbounded_floor && dinf_best <= 1e-6 * (1.0 + c_norm)) {
        result.status = SolveStatus::kUnboundedBelow;
    } else {
        result.status = SolveStatus::kNumericalTrouble;
    }
    result.duality_gap = best_error;
    finish(result, prog, red, best_y, best_X);
    return result;
}

}  // namespace

SolveResult solve_bundled(const ConicProgram& prog, const SolverSettings& settings) {
    settings.validate();
    ReducedProgram red = reduce(prog);
    SolveResult result;
    if (!red.feasible) {
        result.status = SolveStatus::kInfeasible;
        result.solution = Vector::Zero(prog.num_vars);
        return result;
    }
    if (red.chat.size() == 0) {
        // All variables pinned by the equalities: pure feasibility check.
        Vector t(0);
        std::vector<SymMatrix> duals;
        for (int d : red.dims) duals.push_back(SymMatrix::Zero(d, d));
        finish(result, prog, red, t, duals);
        result.status = result.feasibility_error <= settings.feasibility_tol
                            ? SolveStatus::kOptimal
                            : SolveStatus::kInfeasible;
        return result;
    }
    return ipm(prog, red, settings);
}

SolveResult solve_via_adapter(const ConicProgram& prog, const SolverSettings& settings,
                              const std::string& adapter_path) {
    namespace fs = std::filesystem;
    json request;
    request["format"] = "msos-solve-request";
    request["version"] = 1;
    request["program"] = prog.to_json();
    request["settings"] = {{"feasibility_tol", settings.feasibility_tol},
                           {"gap_tol", settings.gap_tol},
                           {"max_iterations", settings.max_iterations}};

    const auto dir = fs::temp_directory_path();
    const auto tag = std::to_string(static_cast<long>(::getpid()));
    const fs::path in_path = dir / ("msos_adapter_in_" + tag + ".json");
    const fs::path out_path = dir / ("msos_adapter_out_" + tag + ".json");
    {
        std::ofstream out(in_path);
        out << request.dump();
    }
    const std::string cmd =
        "'" + adapter_path + "' < '" + in_path.string() + "' > '" + out_path.string() + "'";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out_path);
    json response;
    if (rc == 0 && in) in >> response;
    std::error_code ec;
    fs::remove(in_path, ec);
    fs::remove(out_path, ec);
    if (rc != 0) {
        throw std::runtime_error("solve_via_adapter: adapter exited with status " +
                                 std::to_string(rc));
    }
    return SolveResult::from_json(response);
}

SolveResult solve(const ConicProgram& prog, const SolverSettings& settings) {
    if (settings.backend == SdpBackend::kExternalAdapter) {
        std::string path = settings.adapter_path;
        if (path.empty()) {
            if (const char* env = std::getenv("MSOS_SDP_ADAPTER")) path = env;
        }
        if (path.empty()) {
            throw std::invalid_argument(
                "solve: adapter backend selected but no adapter path given "
                "(set MSOS_SDP_ADAPTER or SolverSettings::adapter_path)");
        }
        return solve_via_adapter(prog, settings, path);
    }
    return solve_bundled(prog, settings);
}

}  // namespace msos
