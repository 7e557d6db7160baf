#include "msos/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace msos {

int total_degree(const Exponent& e) {
    return std::accumulate(e.begin(), e.end(), 0);
}

bool grlex_less(const Exponent& a, const Exponent& b) {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da < db;
    // Within a degree block, larger leading exponents come first.
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::int64_t basis_size(int num_vars, int max_degree) {
    if (num_vars < 0 || max_degree < 0) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= num_vars; ++i) {
        r = r * (max_degree + i) / i;
    }
    return r;
}

namespace {

void enumerate_fixed_degree(int num_vars, int degree, Exponent& current, int var,
                            std::vector<Exponent>& out) {
    if (var == num_vars - 1) {
        current[var] = degree;
        out.push_back(current);
        current[var] = 0;
        return;
    }
    for (int i = degree; i >= 0; --i) {
        current[var] = i;
        enumerate_fixed_degree(num_vars, degree - i, current, var + 1, out);
    }
    current[var] = 0;
}

}  // namespace

std::vector<Exponent> monomial_basis(int num_vars, int max_degree) {
    if (num_vars < 1) throw std::invalid_argument("monomial_basis: need at least one variable");
    if (max_degree < 0) throw std::invalid_argument("monomial_basis: negative degree bound");
    std::vector<Exponent> out;
    out.reserve(static_cast<std::size_t>(basis_size(num_vars, max_degree)));
    Exponent current(num_vars, 0);
    for (int k = 0; k <= max_degree; ++k) {
        enumerate_fixed_degree(num_vars, k, current, 0, out);
    }
    return out;
}

MonomialBasis::MonomialBasis(int num_vars, int max_degree)
    : num_vars_(num_vars), max_degree_(max_degree),
      exponents_(monomial_basis(num_vars, max_degree)) {}

int MonomialBasis::index_of(const Exponent& e) const {
    if (static_cast<int>(e.size()) != num_vars_) {
        throw std::invalid_argument("MonomialBasis::index_of: wrong variable count");
    }
    if (total_degree(e) > max_degree_) {
        throw std::out_of_range("MonomialBasis::index_of: degree exceeds basis bound");
    }
    auto it = std::lower_bound(exponents_.begin(), exponents_.end(), e, grlex_less);
    return static_cast<int>(it - exponents_.begin());
}

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {
    if (num_vars < 1) throw std::invalid_argument("Polynomial: need at least one variable");
}

Polynomial Polynomial::constant(int num_vars, double value) {
    Polynomial p(num_vars);
    p.add_term(Exponent(num_vars, 0), value);
    return p;
}

Polynomial Polynomial::variable(int num_vars, int var) {
    if (var < 0 || var >= num_vars) throw std::invalid_argument("Polynomial::variable: index out of range");
    Exponent e(num_vars, 0);
    e[var] = 1;
    return monomial(std::move(e), 1.0);
}

Polynomial Polynomial::monomial(Exponent e, double coeff) {
    Polynomial p(static_cast<int>(e.size()));
    p.add_term(e, coeff);
    return p;
}

int Polynomial::degree() const {
    if (terms_.empty()) return 0;
    // Graded order: the last term carries the maximal degree.
    return total_degree(std::prev(terms_.end())->first);
}

double Polynomial::coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponent& e, double coeff) {
    if (static_cast<int>(e.size()) != num_vars_) {
        throw std::invalid_argument("Polynomial::add_term: exponent length mismatch");
    }
    for (int v : e) {
        if (v < 0) throw std::invalid_argument("Polynomial::add_term: negative exponent");
    }
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(e, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Polynomial::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != num_vars_) {
        throw std::invalid_argument("Polynomial::eval: point dimension mismatch");
    }
    double r = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (int j = 0; j < num_vars_; ++j) {
            for (int k = 0; k < e[j]; ++k) t *= x[j];
        }
        r += t;
    }
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (rhs.num_vars_ != num_vars_) throw std::invalid_argument("Polynomial: variable count mismatch");
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (rhs.num_vars_ != num_vars_) throw std::invalid_argument("Polynomial: variable count mismatch");
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (rhs.num_vars_ != num_vars_) throw std::invalid_argument("Polynomial: variable count mismatch");
    Polynomial out(num_vars_);
    Exponent sum(num_vars_);
    for (const auto& [a, ca] : terms_) {
        for (const auto& [b, cb] : rhs.terms_) {
            for (int j = 0; j < num_vars_; ++j) sum[j] = a[j] + b[j];
            out.add_term(sum, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out(*this);
    out *= -1.0;
    return out;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= num_vars_) throw std::invalid_argument("Polynomial::derivative: index out of range");
    Polynomial out(num_vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponent d = e;
        d[var] -= 1;
        out.add_term(d, c * e[var]);
    }
    return out;
}

Polynomial Polynomial::homogenized(int order_n) const {
    const int target = 2 * order_n;
    if (degree() > target) {
        throw std::invalid_argument("Polynomial::homogenized: degree exceeds 2n");
    }
    Polynomial out(num_vars_ + 1);
    Exponent lifted(num_vars_ + 1);
    for (const auto& [e, c] : terms_) {
        lifted[0] = target - total_degree(e);
        std::copy(e.begin(), e.end(), lifted.begin() + 1);
        out.add_term(lifted, c);
    }
    return out;
}

Polynomial Polynomial::dehomogenized() const {
    if (num_vars_ < 2) throw std::invalid_argument("Polynomial::dehomogenized: need at least two variables");
    Polynomial out(num_vars_ - 1);
    for (const auto& [e, c] : terms_) {
        out.add_term(Exponent(e.begin() + 1, e.end()), c);
    }
    return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        double coeff = c;
        if (first) {
            if (coeff < 0) { os << "-"; coeff = -coeff; }
        } else {
            os << (coeff < 0 ? " - " : " + ");
            coeff = std::abs(coeff);
        }
        first = false;
        const bool has_vars = total_degree(e) > 0;
        if (!has_vars || coeff != 1.0) os << coeff;
        bool star = !has_vars || coeff != 1.0;
        for (int j = 0; j < num_vars_; ++j) {
            if (e[j] == 0) continue;
            if (star) os << "*";
            star = true;
            if (j < static_cast<int>(var_names.size())) os << var_names[j];
            else os << "x" << (j + 1);
            if (e[j] > 1) os << "^" << e[j];
        }
    }
    return os.str();
}

Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
Polynomial operator*(double s, Polynomial p) { return p *= s; }

Pop::Pop(Polynomial objective, std::vector<Polynomial> constraints)
    : objective_(std::move(objective)), constraints_(std::move(constraints)) {
    for (const auto& g : constraints_) {
        if (g.num_vars() != objective_.num_vars()) {
            throw std::invalid_argument("Pop: all polynomials must share the variable count");
        }
    }
}

int Pop::objective_half_degree() const {
    return (objective_.degree() + 1) / 2;
}

int Pop::constraint_half_degree(int j) const {
    return (constraints_[j].degree() + 1) / 2;
}

int Pop::max_constraint_half_degree() const {
    if (constraints_.empty()) return 1;
    int v = 0;
    for (int j = 0; j < num_constraints(); ++j) {
        v = std::max(v, constraint_half_degree(j));
    }
    return v;
}

int Pop::min_relaxation_order() const {
    int n = std::max(1, objective_half_degree());
    if (!constraints_.empty()) n = std::max(n, max_constraint_half_degree());
    return n;
}

}  // namespace msos
