#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opalg/matrix.hpp"

namespace opalg::cuntz {

using Rational = boost::multiprecision::cpp_rational;

/// A complex coefficient, exact (Gaussian rational) or floating. Arithmetic
/// between the two kinds falls back to floating.
class Coefficient {
public:
    Coefficient() = default;
    Coefficient(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
    Coefficient(int re) : re_(re) {}
    static Coefficient floating(cplx v);
    /// Exact when v is a dyadic rational with denominator <= 2^20, else floating.
    static Coefficient from_double(cplx v);

    bool exact() const { return exact_; }
    cplx value() const;
    bool is_zero() const;
    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    Coefficient conj() const;
    Coefficient operator-() const;
    friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator-(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);
    /// Exact coefficients compare exactly; floating ones compare values.
    friend bool operator==(const Coefficient& a, const Coefficient& b);

    /// "1/2", "-3i", "(1/2-1/3i)"; floating parts with 17 significant digits.
    std::string str() const;

private:
    bool exact_ = true;
    Rational re_ = 0;
    Rational im_ = 0;
    cplx f_{0.0, 0.0};
};

/// psi_mu psi_nu*, indices 1..d.
struct Word {
    std::vector<int> mu;
    std::vector<int> nu;

    int length() const { return static_cast<int>(mu.size() + nu.size()); }
    Word adjoint() const { return {nu, mu}; }
    /// Generator sequence "s1 s2 s2* s1*".
    std::string str() const;
};

/// Length-lex on mu, then on nu.
bool operator<(const Word& a, const Word& b);
bool operator==(const Word& a, const Word& b);

class Polynomial {
public:
    using Terms = std::map<Word, Coefficient>;

    Polynomial() = default;
    explicit Polynomial(int d) : d_(d) { check_d(d); }
    static Polynomial zero(int d) { return Polynomial(d); }
    static Polynomial one(int d);
    /// psi_i, 1-based.
    static Polynomial generator(int d, int i);
    static Polynomial word(int d, Word w, Coefficient c = 1);

    int d() const { return d_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// True when every coefficient is exact.
    bool exact() const;
    int max_length() const;
    /// Longest creation part |mu| over the terms.
    int max_creation() const;
    int max_annihilation() const;

    /// Adds c * w, dropping the term if it cancels.
    void add(const Word& w, const Coefficient& c);
    Polynomial adjoint() const;
    Polynomial scaled(const Coefficient& c) const;

    /// Sums are brought back to normal form with `contract_families`.
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b);

    std::string str() const;

private:
    static void check_d(int d);
    int d_ = 0;
    Terms terms_;
};

/// Contracts every complete family sum_i c psi_{mu i} psi_{nu i}* with equal
/// coefficients to c psi_mu psi_nu*, longest words first, until none remain.
Polynomial contract_families(const Polynomial& p);

/// Word products reduced by psi_i* psi_j = delta_ij; the family relation is
/// then applied by `contract_families` unless `relations_only`.
Polynomial multiply(const Polynomial& p, const Polynomial& q, bool relations_only = false);

/// sigma(p) = sum_i psi_i p psi_i*.
Polynomial canonical_endomorphism(const Polynomial& p);

/// psi_i -> sum_j g_ji psi_j. `g` must be unitary to 1e-10.
Polynomial gauge_act(const Matrix& g, const Polynomial& p);
/// Coefficient maps of g(p) and p agree (exactly, or to `tol` when floating).
bool is_gauge_fixed(const Matrix& g, const Polynomial& p, double tol = 1e-12);

/// Max |coefficient difference| over the union of terms.
double distance(const Polynomial& a, const Polynomial& b);

// --------------------------------------------------------------- Fock space

/// Basis strings of length <= L, ordered by length then lexicographically.
long long fock_dim(int d, int level);
long long fock_index(const std::vector<int>& s, int d);
std::vector<int> fock_string(long long index, int d);

using FockVector = std::map<std::vector<int>, Coefficient>;

/// p |s> on the truncated Fock space: psi_i |x> = |ix> (zero past `level`),
/// psi_i* |jx> = delta_ij |x>.
FockVector fock_apply(const Polynomial& p, const FockVector& v, int level);
FockVector fock_basis(const std::vector<int>& s);

/// Dense matrix of p on strings of length <= L; L must be at least every
/// |mu| and |nu| in p, and the dimension is capped at 4096.
Matrix fock_matrix(const Polynomial& p, int level);

/// String lengths [lo, hi] on which fock(pq) = fock(p) fock(q) must hold: hi
/// leaves room for the creations of p and q below L, lo avoids the vacuum
/// edge where sum psi psi* = 1 - |0><0| when the product was contracted.
struct SafeRange {
    int lo = 0;
    int hi = 0;
};
SafeRange safe_range(const Polynomial& p, const Polynomial& q, int level);

// ------------------------------------------------------- UHF worked example

/// Gauge-invariant words psi_mu psi_nu* with |mu| = |nu| = k <= n map to
/// e_{mu1 nu1} (x) ... (x) e_{muk nuk} (x) 1 on n sites of C^d.
Matrix uhf_embed(const Polynomial& p, int sites);
/// A = X (x) 1_d  ->  1_d (x) X on n sites; A must have that form.
Matrix shift_right(const Matrix& a, int d, int sites);

// ------------------------------------------------------------------ parser

/// Terms sK, sK*, scalar literals (1, -2, 3/4, 0.5, 2i, i), +, -,
/// juxtaposition for products and a postfix * on parentheses. Throws
/// ParseError with a 1-based column.
Polynomial parse(const std::string& text, int d);

}  // namespace opalg::cuntz
