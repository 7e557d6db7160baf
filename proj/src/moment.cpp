#include "msos/moment.hpp"

#include <cmath>
#include <stdexcept>

namespace msos {

MomentSequence::MomentSequence(int num_vars, int max_degree)
    : basis_(num_vars, max_degree), values_(Vector::Zero(basis_.size())) {}

MomentSequence::MomentSequence(int num_vars, int max_degree, Vector values)
    : basis_(num_vars, max_degree), values_(std::move(values)) {
    if (values_.size() != basis_.size()) {
        throw std::invalid_argument("MomentSequence: value vector has wrong length");
    }
}

double MomentSequence::riesz(const Polynomial& p) const {
    if (p.num_vars() != num_vars()) {
        throw std::invalid_argument("riesz: variable count mismatch");
    }
    if (p.degree() > max_degree()) {
        throw std::invalid_argument("riesz: polynomial degree exceeds stored moments");
    }
    double r = 0.0;
    for (const auto& [e, c] : p.terms()) r += c * values_[basis_.index_of(e)];
    return r;
}

MomentSequence MomentSequence::truncated() const {
    if (max_degree() < 1) throw std::invalid_argument("truncated: nothing to drop");
    return truncated_to(max_degree() - 1);
}

MomentSequence MomentSequence::truncated_to(int new_max_degree) const {
    if (new_max_degree < 0 || new_max_degree > max_degree()) {
        throw std::invalid_argument("truncated_to: degree out of range");
    }
    const auto head = basis_size(num_vars(), new_max_degree);
    return MomentSequence(num_vars(), new_max_degree, values_.head(head));
}

SymMatrix moment_matrix(const MomentSequence& phi, int k) {
    if (2 * k > phi.max_degree()) {
        throw std::invalid_argument("moment_matrix: 2k exceeds stored moment degree");
    }
    const MonomialBasis rows(phi.num_vars(), k);
    const int s = rows.size();
    SymMatrix m(s, s);
    Exponent sum(phi.num_vars());
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j) {
            for (int t = 0; t < phi.num_vars(); ++t) sum[t] = rows[i][t] + rows[j][t];
            const double v = phi.at(sum);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return symmetrized(m);
}

SymMatrix localizing_matrix(const MomentSequence& phi, const Polynomial& g, int k) {
    if (g.num_vars() != phi.num_vars()) {
        throw std::invalid_argument("localizing_matrix: variable count mismatch");
    }
    if (2 * k + g.degree() > phi.max_degree()) {
        throw std::invalid_argument("localizing_matrix: 2k + deg(g) exceeds stored moment degree");
    }
    const MonomialBasis rows(phi.num_vars(), k);
    const int s = rows.size();
    SymMatrix m(s, s);
    Exponent sum(phi.num_vars());
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j) {
            double v = 0.0;
            for (const auto& [gamma, c] : g.terms()) {
                for (int t = 0; t < phi.num_vars(); ++t) {
                    sum[t] = rows[i][t] + rows[j][t] + gamma[t];
                }
                v += c * phi.at(sum);
            }
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return symmetrized(m);
}

std::map<Exponent, SymMatrix, GrlexLess> basis_matrices(int num_vars, int k,
                                                        const Polynomial& g) {
    if (g.num_vars() != num_vars) {
        throw std::invalid_argument("basis_matrices: variable count mismatch");
    }
    const MonomialBasis rows(num_vars, k);
    const int s = rows.size();
    std::map<Exponent, SymMatrix, GrlexLess> out;
    Exponent sum(num_vars);
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j) {
            for (const auto& [gamma, c] : g.terms()) {
                for (int t = 0; t < num_vars; ++t) sum[t] = rows[i][t] + rows[j][t] + gamma[t];
                auto [it, inserted] = out.try_emplace(sum, SymMatrix());
                if (inserted) it->second = SymMatrix::Zero(s, s);
                it->second(i, j) += c;
                if (i != j) it->second(j, i) += c;
            }
        }
    }
    return out;
}

MomentSequence moments_of_atoms(const std::vector<Vector>& points,
                                const std::vector<double>& weights,
                                int max_degree, bool allow_empty,
                                int num_vars_if_empty) {
    if (points.size() != weights.size()) {
        throw std::invalid_argument("moments_of_atoms: points/weights length mismatch");
    }
    if (points.empty()) {
        if (allow_empty && num_vars_if_empty > 0) {
            return MomentSequence(num_vars_if_empty, max_degree);
        }
        throw std::invalid_argument("moments_of_atoms: empty atom list");
    }
    const int d = static_cast<int>(points.front().size());
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != d) {
            throw std::invalid_argument("moments_of_atoms: atom dimension mismatch");
        }
    }
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("moments_of_atoms: weights must be positive");
    }
    MomentSequence phi(d, max_degree);
    for (int idx = 0; idx < phi.size(); ++idx) {
        const Exponent& e = phi.basis()[idx];
        double v = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double t = weights[i];
            for (int j = 0; j < d; ++j) {
                for (int p = 0; p < e[j]; ++p) t *= points[i][j];
            }
            v += t;
        }
        phi.values()[idx] = v;
    }
    return phi;
}

HomMomentSequence::HomMomentSequence(const MomentSequence& source) : source_(source) {
    if (source_.max_degree() % 2 != 0) {
        throw std::invalid_argument("HomMomentSequence: source max degree must be even");
    }
}

double HomMomentSequence::at(const Exponent& e) const {
    if (static_cast<int>(e.size()) != num_vars()) {
        throw std::invalid_argument("HomMomentSequence::at: exponent length mismatch");
    }
    if (msos::total_degree(e) != total_degree()) {
        throw std::invalid_argument("HomMomentSequence::at: exponent degree must equal 2n");
    }
    return source_.at(Exponent(e.begin() + 1, e.end()));
}

std::vector<Exponent> HomMomentSequence::matrix_basis() const {
    const int n = source_.max_degree() / 2;
    const MonomialBasis low(source_.num_vars(), n);
    std::vector<Exponent> out;
    out.reserve(low.size());
    Exponent lifted(source_.num_vars() + 1);
    for (int i = 0; i < low.size(); ++i) {
        lifted[0] = n - msos::total_degree(low[i]);
        std::copy(low[i].begin(), low[i].end(), lifted.begin() + 1);
        out.push_back(lifted);
    }
    return out;
}

SymMatrix HomMomentSequence::moment_matrix() const {
    // Entry ((i,alpha),(j,beta)) = phi~_{i+j, alpha+beta} = phi_{alpha+beta}:
    // the same lookups as the plain moment matrix, so the two agree bit
    // for bit.
    return msos::moment_matrix(source_, source_.max_degree() / 2);
}

HomMomentSequence homogenize_sequence(const MomentSequence& phi) {
    return HomMomentSequence(phi);
}

}  // namespace msos
