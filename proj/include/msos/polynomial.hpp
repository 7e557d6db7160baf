#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace msos {

// Monomial exponent vector: one non-negative entry per variable.
using Exponent = std::vector<int>;

int total_degree(const Exponent& e);

// Graded lexicographic order: lower total degree first, then x1 before x2
// (so for d=2 the degree-1 block reads x1, x2 and degree-2 reads
// x1^2, x1*x2, x2^2).
bool grlex_less(const Exponent& a, const Exponent& b);

struct GrlexLess {
    bool operator()(const Exponent& a, const Exponent& b) const {
        return grlex_less(a, b);
    }
};

// C(k+d, d), the number of monomials in d variables of degree <= k.
std::int64_t basis_size(int num_vars, int max_degree);

// All exponents with |alpha| <= max_degree in graded lex order.
// basis(d, k) extends basis(d, k-1) by the degree-k block.
std::vector<Exponent> monomial_basis(int num_vars, int max_degree);

// Sorted monomial basis with index lookup, shared by the moment-matrix
// and relaxation code so every matrix layout agrees.
class MonomialBasis {
public:
    MonomialBasis(int num_vars, int max_degree);

    int num_vars() const { return num_vars_; }
    int max_degree() const { return max_degree_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    const Exponent& operator[](int i) const { return exponents_[i]; }
    const std::vector<Exponent>& exponents() const { return exponents_; }

    // Position of e in the basis; throws if |e| > max_degree or the
    // variable count disagrees.
    int index_of(const Exponent& e) const;

private:
    int num_vars_;
    int max_degree_;
    std::vector<Exponent> exponents_;
};

// Sparse multivariate polynomial over a fixed variable count. Zero
// coefficients are never stored; terms iterate in graded lex order.
class Polynomial {
public:
    using TermMap = std::map<Exponent, double, GrlexLess>;

    explicit Polynomial(int num_vars);

    static Polynomial constant(int num_vars, double value);
    static Polynomial variable(int num_vars, int var);
    static Polynomial monomial(Exponent e, double coeff);

    int num_vars() const { return num_vars_; }
    int degree() const;  // 0 for the zero polynomial
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    double coefficient(const Exponent& e) const;
    void add_term(const Exponent& e, double coeff);

    double eval(std::span<const double> x) const;

    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(double s);
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator-() const;

    Polynomial derivative(int var) const;

    // Lift to d+1 variables: each term c*x^a becomes c*x0^(2n-|a|)*x^a,
    // homogeneous of degree 2n. Index 0 of the result is x0.
    // Requires degree() <= 2n.
    Polynomial homogenized(int order_n) const;

    // Substitute x0 = 1 and drop the first variable (inverse of
    // homogenized for polynomials of degree <= 2n).
    Polynomial dehomogenized() const;

    // Max total degree of x^a over stored terms; used by homogenized().
    std::string to_string(const std::vector<std::string>& var_names = {}) const;

private:
    int num_vars_;
    TermMap terms_;
};

Polynomial operator+(Polynomial lhs, const Polynomial& rhs);
Polynomial operator-(Polynomial lhs, const Polynomial& rhs);
Polynomial operator*(double s, Polynomial p);

// Polynomial optimization problem: minimize objective over the set
// {x : constraints[j](x) >= 0 for all j}.
class Pop {
public:
    Pop(Polynomial objective, std::vector<Polynomial> constraints);

    int num_vars() const { return objective_.num_vars(); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    bool unconstrained() const { return constraints_.empty(); }

    const Polynomial& objective() const { return objective_; }
    const Polynomial& constraint(int j) const { return constraints_[j]; }
    const std::vector<Polynomial>& constraints() const { return constraints_; }

    // ceil(deg(f)/2)
    int objective_half_degree() const;
    // ceil(deg(g_j)/2)
    int constraint_half_degree(int j) const;
    // v = max_j ceil(deg(g_j)/2); reported as 1 for unconstrained
    // problems, whose pipeline never consults it.
    int max_constraint_half_degree() const;

    // Smallest n for which the degree-n relaxation is well formed.
    int min_relaxation_order() const;

private:
    Polynomial objective_;
    std::vector<Polynomial> constraints_;
};

}  // namespace msos
