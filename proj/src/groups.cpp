#include "opalg/groups.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "opalg/error.hpp"

namespace opalg {

// ----------------------------------------------------------- finite group --

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::string name)
    : table_(std::move(table)), name_(std::move(name)) {
    const int n = order();
    if (n == 0) throw PreconditionError("FiniteGroup: empty table");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n) throw PreconditionError("FiniteGroup: table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw PreconditionError("FiniteGroup: table entry out of range");
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
        bool ok = true;
        for (int g = 0; g < n && ok; ++g) ok = table_[e][g] == g && table_[g][e] == g;
        if (ok) identity_ = e;
    }
    if (identity_ < 0) throw PreconditionError("FiniteGroup: no identity element");
    inverse_.assign(n, -1);
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (table_[g][h] == identity_ && table_[h][g] == identity_) inverse_[g] = h;
    for (int g = 0; g < n; ++g)
        if (inverse_[g] < 0) throw PreconditionError("FiniteGroup: element without inverse");
    auto assoc = [&](int a, int b, int c) { return table_[table_[a][b]][c] == table_[a][table_[b][c]]; };
    if (n <= 64) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (!assoc(a, b, c)) throw PreconditionError("FiniteGroup: multiplication is not associative");
    } else {
        Rng rng(kDefaultSeed);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int s = 0; s < 4096; ++s)
            if (!assoc(pick(rng), pick(rng), pick(rng)))
                throw PreconditionError("FiniteGroup: multiplication is not associative");
    }
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup({{0}}, "trivial"); }

FiniteGroup FiniteGroup::cyclic(int n) {
    if (n < 1) throw PreconditionError("cyclic group order must be positive");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FiniteGroup(std::move(t), "cyclic:" + std::to_string(n));
}

FiniteGroup FiniteGroup::symmetric3() {
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const int n = static_cast<int>(perms.size());
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::array<int, 3> c{};
            for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
            t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    return FiniteGroup(std::move(t), "symmetric:3");
}

FiniteGroup FiniteGroup::quaternion8() {
    // index = 2 * unit + sign, units 1, i, j, k; sign 0 = +, 1 = -
    const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    const int sign_mul[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            const int ua = a / 2, ub = b / 2;
            const int s = (a % 2 + b % 2 + sign_mul[ua][ub]) % 2;
            t[a][b] = 2 * unit_mul[ua][ub] + s;
        }
    return FiniteGroup(std::move(t), "quaternion:8");
}

FiniteGroup FiniteGroup::named(const std::string& name) {
    const auto colon = name.find(':');
    const std::string kind = name.substr(0, colon);
    int n = 0;
    if (colon != std::string::npos) {
        const std::string num = name.substr(colon + 1);
        if (num.empty() || num.size() > 6 || num.find_first_not_of("0123456789") != std::string::npos)
            throw PreconditionError("unknown group '" + name + "'");
        n = std::stoi(num);
    }
    if (kind == "trivial") return trivial();
    if (kind == "cyclic") return cyclic(n);
    if (kind == "symmetric" && n == 3) return symmetric3();
    if (kind == "quaternion" && n == 8) return quaternion8();
    throw PreconditionError("unknown group '" + name + "'");
}

// ------------------------------------------------------------ unitary rep --

UnitaryRep::UnitaryRep(FiniteGroup group, std::vector<Matrix> matrices, double tol)
    : group_(std::move(group)), matrices_(std::move(matrices)) {
    const int n = group_.order();
    if (static_cast<int>(matrices_.size()) != n) throw DimensionError("UnitaryRep: one matrix per element required");
    const int d = static_cast<int>(matrices_.front().rows());
    for (const auto& m : matrices_) {
        if (m.rows() != d || m.cols() != d) throw DimensionError("UnitaryRep: matrices differ in shape");
        if (max_abs_diff(m.adjoint() * m, identity(d)) > tol) throw PreconditionError("UnitaryRep: matrix not unitary");
    }
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (max_abs_diff(matrices_[g] * matrices_[h], matrices_[group_.mul(g, h)]) > tol)
                throw PreconditionError("UnitaryRep: U(g)U(h) != U(gh)");
}

UnitaryRep UnitaryRep::trivial(const FiniteGroup& g, int dim) {
    return UnitaryRep(g, std::vector<Matrix>(g.order(), identity(dim)));
}

UnitaryRep UnitaryRep::regular(const FiniteGroup& g) {
    const int n = g.order();
    std::vector<Matrix> ms;
    for (int a = 0; a < n; ++a) {
        Matrix m = Matrix::Zero(n, n);
        for (int h = 0; h < n; ++h) m(g.mul(a, h), h) = 1.0;
        ms.push_back(std::move(m));
    }
    return UnitaryRep(g, std::move(ms));
}

UnitaryRep UnitaryRep::cyclic_from_generator(const FiniteGroup& g, const Matrix& u) {
    std::vector<Matrix> ms;
    Matrix p = identity(static_cast<int>(u.rows()));
    for (int k = 0; k < g.order(); ++k) {
        ms.push_back(p);
        p = p * u;
    }
    return UnitaryRep(g, std::move(ms));
}

UnitaryRep UnitaryRep::tensor(const UnitaryRep& a, const UnitaryRep& b) {
    if (a.group().order() != b.group().order()) throw DimensionError("UnitaryRep::tensor: different groups");
    std::vector<Matrix> ms;
    for (int g = 0; g < a.group().order(); ++g) ms.push_back(kron(a(g), b(g)));
    return UnitaryRep(a.group(), std::move(ms));
}

UnitaryRep UnitaryRep::tensor_power(const UnitaryRep& site, int n) {
    if (n < 1) throw DimensionError("tensor_power: need at least one factor");
    UnitaryRep out = site;
    for (int k = 1; k < n; ++k) out = tensor(out, site);
    return out;
}

std::vector<cplx> UnitaryRep::character() const {
    std::vector<cplx> chi;
    for (const auto& m : matrices_) chi.push_back(m.trace());
    return chi;
}

// ---------------------------------------------------------------- average --

Matrix average(const Matrix& f, const UnitaryRep& rep) {
    if (f.rows() != rep.dim() || f.cols() != rep.dim()) throw DimensionError("average: dimension mismatch");
    Matrix acc = Matrix::Zero(f.rows(), f.cols());
    for (const auto& u : rep.matrices()) acc.noalias() += u * f * u.adjoint();
    return acc / double(rep.group().order());
}

OperatorAlgebra fixed_point_algebra(const OperatorAlgebra& f_alg, const UnitaryRep& rep, const Tolerances& tol) {
    if (f_alg.ambient_dim() != rep.dim()) throw DimensionError("fixed_point_algebra: dimension mismatch");
    std::vector<Matrix> basis;
    for (const auto& b : f_alg.basis()) extend_orthonormal(basis, average(b, rep), tol.rank);
    return OperatorAlgebra(f_alg.ambient_dim(), std::move(basis), f_alg.contains_unit());
}

std::vector<Matrix> intertwiner_space(const UnitaryRep& rep1, const UnitaryRep& rep2, const Tolerances& tol) {
    if (rep1.group().order() != rep2.group().order()) throw DimensionError("intertwiner_space: different groups");
    const int d1 = rep1.dim(), d2 = rep2.dim();
    const int n = rep1.group().order();
    std::vector<Matrix> basis;
    for (int b = 0; b < d1; ++b)
        for (int a = 0; a < d2; ++a) {
            Matrix s = Matrix::Zero(d2, d1);
            for (int g = 0; g < n; ++g) s += rep2(g).col(a) * rep1(g).col(b).adjoint();
            extend_orthonormal(basis, s / double(n), tol.rank);
        }
    return basis;
}

OperatorAlgebra group_algebra(const UnitaryRep& rep, const Tolerances& tol) {
    return generate_algebra(rep.matrices(), true, tol);
}

// ------------------------------------------------------ isotypic splitting --

int SectorDecomposition::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (sectors[i].label == label) return i;
    return -1;
}

std::vector<std::string> SectorDecomposition::labels() const {
    std::vector<std::string> out;
    for (const auto& s : sectors) out.push_back(s.label);
    return out;
}

Matrix SectorDecomposition::block_form(int g) const {
    const int d = ambient_dim();
    Matrix out = Matrix::Zero(d, d);
    for (const auto& s : sectors) out.block(s.offset, s.offset, s.dim_h * s.dim_v, s.dim_h * s.dim_v) =
        kron(identity(s.dim_h), s.irrep[g]);
    return out;
}

namespace {

Matrix range_basis(const Matrix& p) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (p + p.adjoint()));
    std::vector<int> cols;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) cols.push_back(i);
    Matrix q(p.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(cols[k]);
    return q;
}

Matrix restricted_average(const Matrix& x, const std::vector<Matrix>& gamma_a, const std::vector<Matrix>& gamma_b) {
    Matrix acc = Matrix::Zero(gamma_a.front().rows(), gamma_b.front().rows());
    for (std::size_t g = 0; g < gamma_a.size(); ++g) acc += gamma_a[g] * x * gamma_b[g].adjoint();
    return acc / double(gamma_a.size());
}

bool character_greater(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].real() - b[i].real()) > 1e-9) return a[i].real() > b[i].real();
        if (std::abs(a[i].imag() - b[i].imag()) > 1e-9) return a[i].imag() > b[i].imag();
    }
    return false;
}

// Splits the range of one central projection into dim_h copies of one irrep.
Sector split_block(const Matrix& projection, const UnitaryRep& rep, const Tolerances& tol, std::uint64_t seed,
                   Matrix& columns) {
    const int n = rep.group().order();
    const Matrix q = range_basis(projection);
    const int r = static_cast<int>(q.cols());
    std::vector<Matrix> gamma_p;
    for (int g = 0; g < n; ++g) gamma_p.push_back(q.adjoint() * rep(g) * q);

    const int span_dim = static_cast<int>(orthonormalize(gamma_p, tol.rank).size());
    const int dim_v = static_cast<int>(std::lround(std::sqrt(double(span_dim))));
    if (dim_v * dim_v != span_dim || r % dim_v != 0)
        throw NumericalError("isotypic_decomposition: central block is not isotypic");
    const int dim_h = r / dim_v;

    Sector s;
    s.dim_h = dim_h;
    s.dim_v = dim_v;
    s.projection = projection;

    if (dim_v == 1) {
        columns = q;
        for (int g = 0; g < n; ++g) s.irrep.push_back(gamma_p[g].block(0, 0, 1, 1));
    } else {
        for (int attempt = 0; attempt < 5; ++attempt) {
            Rng rng(seed + 7919u * static_cast<std::uint64_t>(attempt));
            const Matrix y = restricted_average(random_hermitian(r, rng), gamma_p, gamma_p);
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (y + y.adjoint()));
            const RealVector& ev = es.eigenvalues();
            const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
            std::vector<int> starts{0};
            for (int i = 1; i < r; ++i)
                if (ev(i) - ev(i - 1) > tol.gap * scale) starts.push_back(i);
            bool ok = static_cast<int>(starts.size()) == dim_h;
            for (int a = 0; ok && a < dim_h; ++a) ok = starts[a] == a * dim_v;
            if (!ok) continue;

            std::vector<Matrix> blocks;
            for (int a = 0; a < dim_h; ++a) blocks.push_back(es.eigenvectors().middleCols(a * dim_v, dim_v));
            auto gamma_of = [&](const Matrix& e) {
                std::vector<Matrix> out;
                for (int g = 0; g < n; ++g) out.push_back(e.adjoint() * gamma_p[g] * e);
                return out;
            };
            const auto gamma1 = gamma_of(blocks[0]);
            Matrix cols(q.rows(), r);
            cols.middleCols(0, dim_v) = q * blocks[0];
            bool aligned = true;
            for (int a = 1; a < dim_h && aligned; ++a) {
                const auto gamma_a = gamma_of(blocks[a]);
                Matrix s_int = restricted_average(random_complex(dim_v, dim_v, rng), gamma_a, gamma1);
                if (frobenius(s_int) < 1e-6) {
                    aligned = false;
                    break;
                }
                cols.middleCols(a * dim_v, dim_v) = q * blocks[a] * polar_unitary(s_int);
            }
            if (!aligned) continue;
            columns = cols;
            s.irrep = gamma1;
            break;
        }
        if (s.irrep.empty()) throw NumericalError("isotypic_decomposition: could not split block after 5 seeds");
    }
    for (const auto& m : s.irrep) s.character.push_back(m.trace());
    return s;
}

}  // namespace

SectorDecomposition isotypic_decomposition(const UnitaryRep& rep, const Tolerances& tol, std::uint64_t seed) {
    const int d = rep.dim();
    const OperatorAlgebra alg = group_algebra(rep, tol);
    const auto projections = minimal_projections_of_commutative(center(alg, tol, seed), tol, seed);

    std::vector<std::pair<Sector, Matrix>> parts;
    for (std::size_t k = 0; k < projections.size(); ++k) {
        Matrix cols;
        Sector s = split_block(projections[k], rep, tol, seed + 104729u * (k + 1), cols);
        parts.emplace_back(std::move(s), std::move(cols));
    }
    std::stable_sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
        if (x.first.dim_v != y.first.dim_v) return x.first.dim_v < y.first.dim_v;
        return character_greater(x.first.character, y.first.character);
    });

    SectorDecomposition dec;
    dec.w = Matrix::Zero(d, d);
    int offset = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        auto& [s, cols] = parts[k];
        bool trivial = s.dim_v == 1;
        for (const auto& c : s.character) trivial = trivial && std::abs(c - cplx(1.0)) < 1e-9;
        s.label = trivial ? "trivial" : "s" + std::to_string(k);
        s.offset = offset;
        dec.w.middleCols(offset, cols.cols()) = cols;
        offset += static_cast<int>(cols.cols());
        dec.sectors.push_back(std::move(s));
    }
    if (offset != d) throw NumericalError("isotypic_decomposition: sector dimensions do not add up");
    return dec;
}

double reconstruction_residual(const SectorDecomposition& dec, const UnitaryRep& rep) {
    double worst = 0.0;
    for (int g = 0; g < rep.group().order(); ++g)
        worst = std::max(worst, max_abs_diff(rep(g), dec.w * dec.block_form(g) * dec.w.adjoint()));
    return worst;
}

}  // namespace opalg
