#include "opalg/cuntz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "opalg/error.hpp"
#include "opalg/tolerances.hpp"

namespace opalg::cuntz {

// ------------------------------------------------------------ coefficient --

Coefficient Coefficient::floating(cplx v) {
    Coefficient c;
    c.exact_ = false;
    c.f_ = v;
    return c;
}

namespace {

constexpr double kDyadic = 1048576.0;  // 2^20

bool dyadic(double x) {
    if (!std::isfinite(x) || std::abs(x) > 1e12) return false;
    const double s = x * kDyadic;
    return s == std::floor(s);
}

Rational to_dyadic(double x) {
    return Rational(boost::multiprecision::cpp_int(static_cast<long long>(x * kDyadic)),
                    boost::multiprecision::cpp_int(static_cast<long long>(kDyadic)));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

Coefficient Coefficient::from_double(cplx v) {
    if (dyadic(v.real()) && dyadic(v.imag())) return Coefficient(to_dyadic(v.real()), to_dyadic(v.imag()));
    return floating(v);
}

cplx Coefficient::value() const { return exact_ ? cplx(to_double(re_), to_double(im_)) : f_; }

bool Coefficient::is_zero() const { return exact_ ? (re_ == 0 && im_ == 0) : std::abs(f_) <= 1e-15; }

Coefficient Coefficient::conj() const { return exact_ ? Coefficient(re_, -im_) : floating(std::conj(f_)); }

Coefficient Coefficient::operator-() const { return exact_ ? Coefficient(-re_, -im_) : floating(-f_); }

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    if (a.exact_ && b.exact_) return Coefficient(a.re_ + b.re_, a.im_ + b.im_);
    return Coefficient::floating(a.value() + b.value());
}

Coefficient operator-(const Coefficient& a, const Coefficient& b) { return a + (-b); }

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    if (a.exact_ && b.exact_) return Coefficient(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    return Coefficient::floating(a.value() * b.value());
}

bool operator==(const Coefficient& a, const Coefficient& b) {
    if (a.exact_ && b.exact_) return a.re_ == b.re_ && a.im_ == b.im_;
    return a.value() == b.value();
}

std::string Coefficient::str() const {
    std::string re, im;
    bool re_zero, im_zero, im_neg, im_unit;
    if (exact_) {
        re = re_.str();
        const Rational a = im_ < 0 ? Rational(-im_) : im_;
        im = a.str();
        re_zero = re_ == 0;
        im_zero = im_ == 0;
        im_neg = im_ < 0;
        im_unit = a == 1;
    } else {
        re = fmt17(f_.real());
        im = fmt17(std::abs(f_.imag()));
        re_zero = f_.real() == 0.0;
        im_zero = f_.imag() == 0.0;
        im_neg = f_.imag() < 0.0;
        im_unit = std::abs(f_.imag()) == 1.0;
    }
    const std::string imag = (im_unit ? std::string() : im) + "i";
    if (im_zero) return re;
    if (re_zero) return (im_neg ? "-" : "") + imag;
    return "(" + re + (im_neg ? "-" : "+") + imag + ")";
}

// ------------------------------------------------------------------- word --

std::string Word::str() const {
    if (mu.empty() && nu.empty()) return "1";
    std::string out;
    for (int i : mu) out += (out.empty() ? "s" : " s") + std::to_string(i);
    for (auto it = nu.rbegin(); it != nu.rend(); ++it) out += (out.empty() ? "s" : " s") + std::to_string(*it) + "*";
    return out;
}

bool operator<(const Word& a, const Word& b) {
    if (a.mu.size() != b.mu.size()) return a.mu.size() < b.mu.size();
    if (a.mu != b.mu) return a.mu < b.mu;
    if (a.nu.size() != b.nu.size()) return a.nu.size() < b.nu.size();
    return a.nu < b.nu;
}

bool operator==(const Word& a, const Word& b) { return a.mu == b.mu && a.nu == b.nu; }

// ------------------------------------------------------------- polynomial --

void Polynomial::check_d(int d) {
    if (d < 1) throw PreconditionError("Cuntz algebra needs d >= 1");
}

Polynomial Polynomial::one(int d) { return word(d, Word{}, 1); }

Polynomial Polynomial::generator(int d, int i) { return word(d, Word{{i}, {}}, 1); }

Polynomial Polynomial::word(int d, Word w, Coefficient c) {
    Polynomial p(d);
    p.add(w, c);
    return p;
}

bool Polynomial::exact() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.exact(); });
}

int Polynomial::max_length() const {
    int m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, w.length());
    return m;
}

int Polynomial::max_creation() const {
    int m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, static_cast<int>(w.mu.size()));
    return m;
}

int Polynomial::max_annihilation() const {
    int m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, static_cast<int>(w.nu.size()));
    return m;
}

void Polynomial::add(const Word& w, const Coefficient& c) {
    for (int i : w.mu)
        if (i < 1 || i > d_) throw PreconditionError("Cuntz word index out of range");
    for (int i : w.nu)
        if (i < 1 || i > d_) throw PreconditionError("Cuntz word index out of range");
    if (c.is_zero()) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

Polynomial Polynomial::adjoint() const {
    Polynomial out(d_);
    for (const auto& [w, c] : terms_) out.add(w.adjoint(), c.conj());
    return out;
}

Polynomial Polynomial::scaled(const Coefficient& s) const {
    Polynomial out(d_);
    for (const auto& [w, c] : terms_) out.add(w, s * c);
    return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    if (a.d_ != b.d_) throw DimensionError("Cuntz polynomials of different d");
    Polynomial out = a;
    for (const auto& [w, c] : b.terms_) out.add(w, c);
    return contract_families(out);
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1); }

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.d_ != b.d_ || a.terms_.size() != b.terms_.size()) return false;
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    for (; i != a.terms_.end(); ++i, ++j)
        if (!(i->first == j->first) || !(i->second == j->second)) return false;
    return true;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : terms_) {
        std::string t;
        const bool unit_word = w.mu.empty() && w.nu.empty();
        if (unit_word)
            t = c.str();
        else if (c == Coefficient(1))
            t = w.str();
        else if (c == Coefficient(-1))
            t = "-" + w.str();
        else
            t = c.str() + " " + w.str();
        if (out.empty())
            out = t;
        else if (t.front() == '-')
            out += " - " + t.substr(1);
        else
            out += " + " + t;
    }
    return out;
}

Polynomial contract_families(const Polynomial& p) {
    const int d = p.d();
    Polynomial cur = p;
    const int top = cur.max_length();
    for (int len = top; len >= 2; --len) {
        std::vector<Word> parents;
        for (const auto& [w, c] : cur.terms()) {
            if (w.length() != len || w.mu.empty() || w.nu.empty()) continue;
            if (w.mu.back() != 1 || w.nu.back() != 1) continue;
            parents.push_back(Word{{w.mu.begin(), w.mu.end() - 1}, {w.nu.begin(), w.nu.end() - 1}});
        }
        for (const auto& parent : parents) {
            const Coefficient* first = nullptr;
            bool complete = true;
            for (int i = 1; i <= d && complete; ++i) {
                Word child = parent;
                child.mu.push_back(i);
                child.nu.push_back(i);
                auto it = cur.terms().find(child);
                if (it == cur.terms().end()) {
                    complete = false;
                } else if (!first) {
                    first = &it->second;
                } else {
                    complete = it->second == *first;
                }
            }
            if (!complete) continue;
            const Coefficient c = *first;
            for (int i = 1; i <= d; ++i) {
                Word child = parent;
                child.mu.push_back(i);
                child.nu.push_back(i);
                cur.add(child, -c);
            }
            cur.add(parent, c);
        }
    }
    return cur;
}

namespace {

// (psi_mu psi_nu*)(psi_alpha psi_beta*); false when the product vanishes
bool word_product(const Word& a, const Word& b, Word& out) {
    const auto& nu = a.nu;
    const auto& alpha = b.mu;
    if (nu.size() <= alpha.size()) {
        if (!std::equal(nu.begin(), nu.end(), alpha.begin())) return false;
        out.mu = a.mu;
        out.mu.insert(out.mu.end(), alpha.begin() + static_cast<long>(nu.size()), alpha.end());
        out.nu = b.nu;
    } else {
        if (!std::equal(alpha.begin(), alpha.end(), nu.begin())) return false;
        out.mu = a.mu;
        out.nu = b.nu;
        out.nu.insert(out.nu.end(), nu.begin() + static_cast<long>(alpha.size()), nu.end());
    }
    return true;
}

}  // namespace

Polynomial multiply(const Polynomial& p, const Polynomial& q, bool relations_only) {
    if (p.d() != q.d()) throw DimensionError("multiply: Cuntz polynomials of different d");
    Polynomial out(p.d());
    Word w;
    for (const auto& [a, ca] : p.terms())
        for (const auto& [b, cb] : q.terms())
            if (word_product(a, b, w)) out.add(w, ca * cb);
    return relations_only ? out : contract_families(out);
}

Polynomial canonical_endomorphism(const Polynomial& p) {
    Polynomial out(p.d());
    for (const auto& [w, c] : p.terms())
        for (int i = 1; i <= p.d(); ++i) {
            Word v = w;
            v.mu.insert(v.mu.begin(), i);
            v.nu.insert(v.nu.begin(), i);
            out.add(v, c);
        }
    return contract_families(out);
}

Polynomial gauge_act(const Matrix& g, const Polynomial& p) {
    const int d = p.d();
    if (g.rows() != d || g.cols() != d) throw DimensionError("gauge_act: matrix must be d x d");
    if (max_abs_diff(g.adjoint() * g, identity(d)) > 1e-10) throw PreconditionError("gauge_act: matrix is not unitary");
    std::vector<std::vector<Coefficient>> gc(d, std::vector<Coefficient>(d));
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) gc[j][i] = Coefficient::from_double(g(j, i));
    Polynomial out(d);
    for (const auto& [w, c] : p.terms()) {
        const int nm = static_cast<int>(w.mu.size());
        const int n = w.length();
        std::vector<int> pick(n, 1);
        // odometer over the images of each letter
        while (true) {
            Coefficient k = c;
            Word v;
            for (int s = 0; s < n; ++s) {
                if (s < nm) {
                    k = k * gc[pick[s] - 1][w.mu[s] - 1];
                    v.mu.push_back(pick[s]);
                } else {
                    k = k * gc[pick[s] - 1][w.nu[s - nm] - 1].conj();
                    v.nu.push_back(pick[s]);
                }
            }
            out.add(v, k);
            int s = n - 1;
            while (s >= 0 && pick[s] == d) pick[s--] = 1;
            if (s < 0) break;
            ++pick[s];
        }
    }
    return contract_families(out);
}

double distance(const Polynomial& a, const Polynomial& b) {
    double worst = 0.0;
    const Polynomial diff = a - b;
    for (const auto& [w, c] : diff.terms()) worst = std::max(worst, std::abs(c.value()));
    return worst;
}

bool is_gauge_fixed(const Matrix& g, const Polynomial& p, double tol) {
    const Polynomial q = gauge_act(g, p);
    if (q.exact() && p.exact()) return q == p;
    return distance(q, p) <= tol;
}

// ------------------------------------------------------------------- Fock --

long long fock_dim(int d, int level) {
    long long total = 0, pow = 1;
    for (int k = 0; k <= level; ++k) {
        total += pow;
        pow *= d;
    }
    return total;
}

long long fock_index(const std::vector<int>& s, int d) {
    long long idx = fock_dim(d, static_cast<int>(s.size()) - 1);
    long long rank = 0;
    for (int i : s) rank = rank * d + (i - 1);
    return idx + rank;
}

std::vector<int> fock_string(long long index, int d) {
    int len = 0;
    while (fock_dim(d, len) <= index) ++len;
    long long rank = index - fock_dim(d, len - 1);
    std::vector<int> s(len);
    for (int k = len - 1; k >= 0; --k) {
        s[k] = static_cast<int>(rank % d) + 1;
        rank /= d;
    }
    return s;
}

FockVector fock_basis(const std::vector<int>& s) { return FockVector{{s, Coefficient(1)}}; }

FockVector fock_apply(const Polynomial& p, const FockVector& v, int level) {
    FockVector out;
    for (const auto& [x, a] : v) {
        if (static_cast<int>(x.size()) > level) throw PreconditionError("fock_apply: vector outside the truncation");
        for (const auto& [w, c] : p.terms()) {
            if (w.nu.size() > x.size() || !std::equal(w.nu.begin(), w.nu.end(), x.begin())) continue;
            if (static_cast<int>(w.mu.size() + x.size() - w.nu.size()) > level) continue;
            std::vector<int> y = w.mu;
            y.insert(y.end(), x.begin() + static_cast<long>(w.nu.size()), x.end());
            auto it = out.find(y);
            const Coefficient k = c * a;
            if (it == out.end()) {
                if (!k.is_zero()) out.emplace(std::move(y), k);
            } else {
                it->second = it->second + k;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

Matrix fock_matrix(const Polynomial& p, int level) {
    if (level < std::max(p.max_creation(), p.max_annihilation()))
        throw PreconditionError("fock_matrix: truncation level below the longest creation or annihilation part");
    const long long n = fock_dim(p.d(), level);
    if (n > 4096) throw DimensionError("fock_matrix: dense Fock space above 4096");
    Matrix m = Matrix::Zero(n, n);
    for (long long j = 0; j < n; ++j)
        for (const auto& [y, c] : fock_apply(p, fock_basis(fock_string(j, p.d())), level))
            m(fock_index(y, p.d()), j) += c.value();
    return m;
}

SafeRange safe_range(const Polynomial& p, const Polynomial& q, int level) {
    SafeRange r;
    r.hi = level - p.max_creation() - q.max_creation();
    const Polynomial raw = multiply(p, q, true);
    if (!(raw == contract_families(raw))) r.lo = raw.max_annihilation();
    return r;
}

// -------------------------------------------------------------------- UHF --

Matrix uhf_embed(const Polynomial& p, int sites) {
    const int d = p.d();
    long long dim = 1;
    for (int s = 0; s < sites; ++s) {
        dim *= d;
        if (dim > kMaxAmbientDim) throw DimensionError("uhf_embed: dimension exceeds 256");
    }
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& [w, c] : p.terms()) {
        if (w.mu.size() != w.nu.size()) throw PreconditionError("uhf_embed: word is not gauge invariant");
        if (static_cast<int>(w.mu.size()) > sites) throw PreconditionError("uhf_embed: word longer than the chain");
        std::vector<Matrix> f;
        for (std::size_t k = 0; k < w.mu.size(); ++k) f.push_back(matrix_unit(d, w.mu[k] - 1, w.nu[k] - 1));
        int rest = 1;
        for (int k = static_cast<int>(w.mu.size()); k < sites; ++k) rest *= d;
        f.push_back(identity(rest));
        out += c.value() * kron_all(f);
    }
    return out;
}

Matrix shift_right(const Matrix& a, int d, int sites) {
    long long dim = 1;
    for (int s = 0; s < sites; ++s) dim *= d;
    if (a.rows() != dim || a.cols() != dim) throw DimensionError("shift_right: operator does not match the chain");
    const int m = static_cast<int>(dim / d);
    Matrix x(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) x(i, j) = a(i * d, j * d);
    if (max_abs_diff(kron(x, identity(d)), a) > 1e-12)
        throw PreconditionError("shift_right: operator acts on the last site");
    return kron(identity(d), x);
}

}  // namespace opalg::cuntz
