#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "msos/polynomial.hpp"

namespace msos {

using SymMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Kill round-off asymmetry after assembly; eigensolvers downstream
// assume exact symmetry.
inline SymMatrix symmetrized(const SymMatrix& m) {
    return 0.5 * (m + m.transpose());
}

// Pseudo-moment vector (phi_alpha) for |alpha| <= max_degree, stored in
// graded lex order. max_degree = 2n for a full order-n sequence; odd
// top degrees appear for truncations.
class MomentSequence {
public:
    MomentSequence(int num_vars, int max_degree);
    MomentSequence(int num_vars, int max_degree, Vector values);

    int num_vars() const { return basis_.num_vars(); }
    int max_degree() const { return basis_.max_degree(); }
    // Half-degree order n = floor(max_degree / 2).
    int order() const { return basis_.max_degree() / 2; }
    int size() const { return basis_.size(); }

    const MonomialBasis& basis() const { return basis_; }
    const Vector& values() const { return values_; }
    Vector& values() { return values_; }

    double at(const Exponent& e) const { return values_[basis_.index_of(e)]; }
    double& at(const Exponent& e) { return values_[basis_.index_of(e)]; }

    // Riesz functional: p |-> sum_alpha p_alpha * phi_alpha.
    // Throws if deg(p) > max_degree.
    double riesz(const Polynomial& p) const;

    // Drop the top degree block (2n -> 2n-1 for full sequences).
    MomentSequence truncated() const;

    // Restriction to degree <= new_max_degree.
    MomentSequence truncated_to(int new_max_degree) const;

private:
    MonomialBasis basis_;
    Vector values_;
};

// Moment matrix M_k(phi): entry (alpha, beta) = phi_{alpha+beta},
// rows/columns indexed by monomial_basis(d, k). Requires 2k <= max_degree.
SymMatrix moment_matrix(const MomentSequence& phi, int k);

// Localizing matrix M_k(g*phi): entry (alpha, beta) =
// sum_gamma g_gamma phi_{alpha+beta+gamma}. Requires 2k + deg(g) <= max_degree.
SymMatrix localizing_matrix(const MomentSequence& phi, const Polynomial& g, int k);

// Coefficient matrices {B^g_alpha} with
//   g(x) v_k(x) v_k(x)^T = sum_alpha B^g_alpha x^alpha.
// Only exponents with a nonzero matrix are materialized. With g == 1
// these are the plain moment-matrix basis matrices.
std::map<Exponent, SymMatrix, GrlexLess> basis_matrices(int num_vars, int k,
                                                        const Polynomial& g);

// phi_alpha = sum_i weights[i] * points[i]^alpha for |alpha| <= max_degree.
// Rejects an empty atom list unless allow_empty is set, in which case the
// zero sequence over num_vars_if_empty variables is returned.
MomentSequence moments_of_atoms(const std::vector<Vector>& points,
                                const std::vector<double>& weights,
                                int max_degree, bool allow_empty = false,
                                int num_vars_if_empty = 0);

// Homogenization of a full degree-2n sequence: values indexed by pairs
// (i, alpha) with i + |alpha| = 2n via phi~_{2n-|alpha|, alpha} = phi_alpha.
// The homogenized moment matrix, indexed by the degree-n monomials of
// (x0, x), is entrywise identical to moment_matrix(phi, n).
class HomMomentSequence {
public:
    explicit HomMomentSequence(const MomentSequence& source);

    int num_vars() const { return source_.num_vars() + 1; }
    int total_degree() const { return source_.max_degree(); }

    // e has length d+1 and |e| == 2n; reads phi_{e[1..]}.
    double at(const Exponent& e) const;

    // Degree-n monomials of (x0, x) indexing the homogenized matrix, in
    // the order induced by the graded lex order of the dehomogenized
    // exponents (x0^n first).
    std::vector<Exponent> matrix_basis() const;

    SymMatrix moment_matrix() const;

    const MomentSequence& source() const { return source_; }

private:
    MomentSequence source_;
};

HomMomentSequence homogenize_sequence(const MomentSequence& phi);

}  // namespace msos
