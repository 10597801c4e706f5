#include "opalg/dhrnet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opalg/error.hpp"

namespace opalg {

std::string region_name(const Region& r) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '}';
    return os.str();
}

LatticeNet::LatticeNet(int sites, UnitaryRep site_rep) : sites_(sites), site_rep_(std::move(site_rep)) {
    if (sites < 1) throw PreconditionError("LatticeNet: need at least one site");
    if (site_rep_.dim() < 2) throw PreconditionError("LatticeNet: on-site dimension must be at least 2");
    long long d = 1;
    for (int k = 0; k < sites; ++k) {
        d *= site_rep_.dim();
        if (d > kMaxAmbientDim) throw DimensionError("LatticeNet: total dimension exceeds 256");
    }
    dim_ = static_cast<int>(d);
    global_rep_ = UnitaryRep::tensor_power(site_rep_, sites);
    local_dec_.resize(sites + 1);
}

LatticeNet LatticeNet::z2_chain(int sites) {
    const auto g = FiniteGroup::cyclic(2);
    return LatticeNet(sites, UnitaryRep::cyclic_from_generator(g, pauli::z()));
}

void LatticeNet::validate(const Region& r) const {
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < 0 || r[i] >= sites_) throw PreconditionError("region site out of range: " + region_name(r));
        if (i && r[i] <= r[i - 1]) throw PreconditionError("region must be sorted without repeats: " + region_name(r));
    }
}

Region LatticeNet::complement(const Region& r) const {
    validate(r);
    Region out;
    for (int s = 0; s < sites_; ++s)
        if (!std::binary_search(r.begin(), r.end(), s)) out.push_back(s);
    return out;
}

Region LatticeNet::all_sites() const {
    Region r(sites_);
    for (int s = 0; s < sites_; ++s) r[s] = s;
    return r;
}

int LatticeNet::factor_dim(const Region& r) const {
    int d = 1;
    for (std::size_t i = 0; i < r.size(); ++i) d *= onsite_dim();
    return d;
}

namespace {

// digit of site s in the full index i (site 0 most significant)
std::vector<int> strides(int sites, int d0) {
    std::vector<int> st(sites);
    int s = 1;
    for (int k = sites - 1; k >= 0; --k) {
        st[k] = s;
        s *= d0;
    }
    return st;
}

// full index = compose(local index over `a`, local index over `b`)
std::vector<int> region_offsets(const Region& r, const std::vector<int>& st, int d0) {
    const int k = static_cast<int>(r.size());
    int n = 1;
    for (int i = 0; i < k; ++i) n *= d0;
    std::vector<int> off(n, 0);
    for (int idx = 0; idx < n; ++idx) {
        int rem = idx;
        int o = 0;
        for (int i = k - 1; i >= 0; --i) {
            o += (rem % d0) * st[r[i]];
            rem /= d0;
        }
        off[idx] = o;
    }
    return off;
}

}  // namespace

Matrix LatticeNet::embed(const Region& r, const Matrix& local) const {
    validate(r);
    const int dr = factor_dim(r);
    if (local.rows() != dr || local.cols() != dr) throw DimensionError("embed: operator does not match region");
    const auto st = strides(sites_, onsite_dim());
    const auto in = region_offsets(r, st, onsite_dim());
    const auto out = region_offsets(complement(r), st, onsite_dim());
    Matrix m = Matrix::Zero(dim_, dim_);
    for (int c : out)
        for (int a = 0; a < dr; ++a)
            for (int b = 0; b < dr; ++b) m(c + in[a], c + in[b]) = local(a, b);
    return m;
}

Matrix LatticeNet::reduce(const Matrix& m, const Region& keep) const {
    validate(keep);
    if (m.rows() != dim_ || m.cols() != dim_) throw DimensionError("reduce: operator does not match the net");
    const auto st = strides(sites_, onsite_dim());
    const auto in = region_offsets(keep, st, onsite_dim());
    const auto out = region_offsets(complement(keep), st, onsite_dim());
    const int dk = static_cast<int>(in.size());
    Matrix r = Matrix::Zero(dk, dk);
    for (int a = 0; a < dk; ++a)
        for (int b = 0; b < dk; ++b) {
            cplx s = 0.0;
            for (int c : out) s += m(c + in[a], c + in[b]);
            r(a, b) = s;
        }
    return r;
}

std::vector<Region> LatticeNet::intervals() const {
    std::vector<Region> out;
    for (int len = 1; len <= sites_; ++len)
        for (int a = 0; a + len <= sites_; ++a) {
            Region r(len);
            for (int i = 0; i < len; ++i) r[i] = a + i;
            out.push_back(std::move(r));
        }
    return out;
}

const SectorDecomposition& LatticeNet::local_decomposition(int k) const {
    if (k < 1 || k > sites_) throw PreconditionError("local_decomposition: site count out of range");
    if (!local_dec_[k]) local_dec_[k] = isotypic_decomposition(UnitaryRep::tensor_power(site_rep_, k));
    return *local_dec_[k];
}

OperatorAlgebra region_algebra(const LatticeNet& net, const Region& r, bool observable) {
    net.validate(r);
    const int d = net.dim();
    if (r.empty()) return OperatorAlgebra::scalars(d);
    const int dr = net.factor_dim(r);
    const double scale = 1.0 / std::sqrt(double(d) / dr);
    std::vector<Matrix> basis;
    if (!observable) {
        for (int j = 0; j < dr; ++j)
            for (int i = 0; i < dr; ++i) basis.push_back(scale * net.embed(r, matrix_unit(dr, i, j)));
        return OperatorAlgebra(d, std::move(basis), true);
    }
    const auto& dec = net.local_decomposition(static_cast<int>(r.size()));
    for (const auto& s : dec.sectors) {
        const Matrix q = dec.w.middleCols(s.offset, s.dim_h * s.dim_v);
        const double norm = 1.0 / std::sqrt(double(s.dim_v));
        for (int a = 0; a < s.dim_h; ++a)
            for (int b = 0; b < s.dim_h; ++b) {
                const Matrix blk = kron(matrix_unit(s.dim_h, a, b), identity(s.dim_v));
                basis.push_back(scale * norm * net.embed(r, q * blk * q.adjoint()));
            }
    }
    return OperatorAlgebra(d, std::move(basis), true);
}

double observable_distance(const LatticeNet& net, const Matrix& rho1, const Matrix& rho2, const Region& r) {
    const Matrix diff = rho1 - rho2;
    if (r.empty()) return std::abs(diff.trace()) / std::sqrt(double(net.dim()));
    const Matrix red = net.reduce(diff, r);
    const double scale = 1.0 / std::sqrt(double(net.dim()) / net.factor_dim(r));
    const auto& dec = net.local_decomposition(static_cast<int>(r.size()));
    const Matrix x = dec.w.adjoint() * red * dec.w;
    double worst = 0.0;
    for (const auto& s : dec.sectors) {
        const double norm = 1.0 / std::sqrt(double(s.dim_v));
        for (int a = 0; a < s.dim_h; ++a)
            for (int b = 0; b < s.dim_h; ++b) {
                cplx c = 0.0;
                for (int v = 0; v < s.dim_v; ++v) c += x(s.offset + b * s.dim_v + v, s.offset + a * s.dim_v + v);
                worst = std::max(worst, std::abs(c) * norm * scale);
            }
    }
    return worst;
}

DhrReport dhr_check(const State& omega, const State& vacuum, const LatticeNet& net, double tol, bool all_subsets) {
    if (omega.dim() != net.dim() || vacuum.dim() != net.dim()) throw DimensionError("dhr_check: state dimension mismatch");
    std::vector<Region> regions{Region{}};
    if (all_subsets) {
        if (net.sites() > 8) throw PreconditionError("dhr_check: all subsets limited to 8 sites");
        const int n = net.sites();
        std::vector<Region> subsets;
        for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
            Region r;
            for (int s = 0; s < n; ++s)
                if (mask & (1u << s)) r.push_back(s);
            subsets.push_back(std::move(r));
        }
        std::stable_sort(subsets.begin(), subsets.end(),
                         [](const Region& a, const Region& b) { return a.size() < b.size(); });
        regions.insert(regions.end(), subsets.begin(), subsets.end());
    } else {
        for (auto& r : net.intervals())
            if (static_cast<int>(r.size()) < net.sites()) regions.push_back(std::move(r));
    }
    DhrReport rep;
    for (const auto& r : regions) {
        const double dist = observable_distance(net, omega.density(), vacuum.density(), net.complement(r));
        rep.distances.emplace_back(r, dist);
        if (dist <= tol) rep.witness_regions.push_back(r);
    }
    rep.passes = !rep.witness_regions.empty();
    return rep;
}

LocalizedMorphism LocalizedMorphism::from_local(const LatticeNet& net, Region region, std::string label,
                                                const std::vector<Matrix>& local) {
    std::vector<Matrix> psi;
    for (const auto& m : local) psi.push_back(net.embed(region, m));
    Region tag = region;
    return LocalizedMorphism{std::move(region), ChargedMultiplet(std::move(label), std::move(psi), std::move(tag))};
}

LocalizedMorphism LocalizedMorphism::identity(const LatticeNet& net) {
    return LocalizedMorphism{Region{}, ChargedMultiplet("trivial", {opalg::identity(net.dim())}, Region{})};
}

double observable_residual(const LatticeNet& net, const Matrix& a) { return frobenius(average(a, net.global_rep()) - a); }

namespace {

constexpr int kFullCheckDim = 32;

std::vector<Matrix> observable_probes(const LatticeNet& net, const Region& r, int samples, Rng& rng) {
    if (net.factor_dim(r) <= kFullCheckDim || r.empty()) return region_algebra(net, r, true).basis();
    const auto& local = UnitaryRep::tensor_power(net.site_rep(), static_cast<int>(r.size()));
    std::vector<Matrix> out;
    for (int s = 0; s < samples; ++s)
        out.push_back(net.embed(r, average(random_complex(local.dim(), local.dim(), rng), local)));
    return out;
}

}  // namespace

MorphismReport validate_morphism(const LatticeNet& net, const LocalizedMorphism& rho, std::uint64_t seed) {
    net.validate(rho.region);
    if (rho.multiplet.ambient_dim() != net.dim()) throw DimensionError("validate_morphism: dimension mismatch");
    Rng rng(seed);
    MorphismReport rep;
    const auto basis = observable_probes(net, net.all_sites(), 16, rng);
    std::vector<Matrix> images;
    for (const auto& b : basis) {
        images.push_back(rho.multiplet.apply(b));
        rep.image_defect = std::max(rep.image_defect, observable_residual(net, images.back()));
    }
    const int n = static_cast<int>(basis.size());
    const int pairs = std::min(n * n, 1024);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int p = 0; p < pairs; ++p) {
        const int i = n * n <= 1024 ? p / n : pick(rng);
        const int j = n * n <= 1024 ? p % n : pick(rng);
        const Matrix lhs = rho.multiplet.apply(basis[i] * basis[j]);
        rep.multiplicativity_defect = std::max(rep.multiplicativity_defect, max_abs_diff(lhs, images[i] * images[j]));
    }
    rep.unitality_defect = max_abs_diff(rho.multiplet.apply(opalg::identity(net.dim())), opalg::identity(net.dim()));
    for (const auto& b : observable_probes(net, net.complement(rho.region), 16, rng))
        rep.localization_defect = std::max(rep.localization_defect, max_abs_diff(rho.multiplet.apply(b), b));
    rep.valid = rep.image_defect <= 1e-9 && rep.multiplicativity_defect <= 1e-9 && rep.unitality_defect <= 1e-9 &&
                rep.localization_defect <= 1e-9;
    return rep;
}

Matrix apply_morphism(const LatticeNet& net, const LocalizedMorphism& rho, const Matrix& a) {
    if (a.rows() != net.dim() || a.cols() != net.dim()) throw DimensionError("apply_morphism: dimension mismatch");
    const double res = observable_residual(net, a);
    if (res > 1e-9) {
        std::ostringstream os;
        os << "apply_morphism: operator is not an observable (residual " << res << ")";
        throw PreconditionError(os.str());
    }
    return rho.multiplet.apply(a);
}

State selected_state(const LocalizedMorphism& rho, const State& vacuum) {
    Matrix d = rho.multiplet.pull_back(vacuum.density());
    d = 0.5 * (d + d.adjoint());
    return State(std::move(d), rho.label());
}

LocalizedMorphism compose(const LocalizedMorphism& rho1, const LocalizedMorphism& rho2) {
    std::vector<Matrix> psi;
    for (const auto& a : rho1.multiplet.psi)
        for (const auto& b : rho2.multiplet.psi) psi.push_back(a * b);
    Region r;
    std::set_union(rho1.region.begin(), rho1.region.end(), rho2.region.begin(), rho2.region.end(),
                   std::back_inserter(r));
    std::string label = rho1.label() + "." + rho2.label();
    Region tag = r;
    return LocalizedMorphism{std::move(r), ChargedMultiplet(std::move(label), std::move(psi), std::move(tag))};
}

IntertwinerSpace solve_intertwiners(const LatticeNet& net, const LocalizedMorphism& rho, const LocalizedMorphism& sigma,
                                    const Tolerances& tol, std::uint64_t seed) {
    if (rho.multiplet.ambient_dim() != net.dim() || sigma.multiplet.ambient_dim() != net.dim())
        throw DimensionError("solve_intertwiners: dimension mismatch");
    const auto alg = region_algebra(net, net.all_sites(), true);
    Rng rng(seed);
    std::vector<Matrix> gens;
    for (int k = 0; k < 3; ++k) gens.push_back(alg.random_hermitian_element(rng));
    const int d = net.dim();
    const int m = alg.dim();
    const Eigen::Index block = Eigen::Index(d) * d;
    Matrix sys(block * static_cast<Eigen::Index>(gens.size()), m);
    for (std::size_t g = 0; g < gens.size(); ++g) {
        const Matrix rg = rho.multiplet.apply(gens[g]);
        const Matrix sg = sigma.multiplet.apply(gens[g]);
        for (int k = 0; k < m; ++k) {
            const Matrix c = alg.basis()[k] * rg - sg * alg.basis()[k];
            sys.block(static_cast<Eigen::Index>(g) * block, k, block, 1) = c.reshaped();
        }
    }
    Eigen::BDCSVD<Matrix> svd(sys, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank * std::max(1.0, sv.size() ? sv(0) : 0.0);
    std::vector<Matrix> raw;
    for (Eigen::Index k = 0; k < m; ++k) {
        if (k < sv.size() && sv(k) > cut) continue;
        raw.push_back(alg.from_coordinates(svd.matrixV().col(k)));
    }
    IntertwinerSpace out;
    out.basis = orthonormalize(raw, tol.rank);
    std::vector<Matrix> checks = d <= kFullCheckDim ? alg.basis() : gens;
    if (d > kFullCheckDim)
        for (int k = 0; k < 8; ++k) checks.push_back(alg.random_hermitian_element(rng));
    for (const auto& a : checks) {
        const Matrix ra = rho.multiplet.apply(a);
        const Matrix sa = sigma.multiplet.apply(a);
        for (const auto& t : out.basis)
            out.verification_residual = std::max(out.verification_residual, max_abs_diff(t * ra, sa * t));
    }
    return out;
}

HaagReport haag_duality_check(const LatticeNet& net, const Region& r, bool observable, const Tolerances& tol,
                              std::uint64_t seed) {
    net.validate(r);
    const auto outside = region_algebra(net, net.complement(r), observable);
    const auto lhs = commutant(outside, tol, seed);
    const auto rhs = region_algebra(net, r, observable);
    HaagReport rep;
    rep.lhs_dim = lhs.dim();
    rep.rhs_dim = rhs.dim();
    rep.defect = rep.lhs_dim - rep.rhs_dim;
    rep.inclusion_residual = inclusion_residual(rhs, lhs);
    rep.passes = rep.defect == 0 && rep.inclusion_residual <= 1e-9;
    return rep;
}

InversionSearch dhr_invert(const State& omega, const State& vacuum, const LatticeNet& net,
                           const std::vector<Matrix>& generators, double tol, int max_factors) {
    if (omega.dim() != net.dim() || vacuum.dim() != net.dim()) throw DimensionError("dhr_invert: state dimension mismatch");
    const Region all = net.all_sites();
    InversionSearch out;
    out.distance = observable_distance(net, omega.density(), vacuum.density(), all);
    ++out.tried;
    if (out.distance <= tol) {
        out.morphism = LocalizedMorphism::identity(net);
        return out;
    }
    // placements: (site, generator) pairs; products over strictly increasing sites
    std::vector<std::pair<int, int>> placements;
    for (int s = 0; s < net.sites(); ++s)
        for (int g = 0; g < static_cast<int>(generators.size()); ++g) placements.emplace_back(s, g);
    std::vector<int> chosen;
    std::optional<LocalizedMorphism> best;
    double best_dist = out.distance;
    auto search = [&](auto&& self, std::size_t start, int depth) -> bool {
        if (!chosen.empty()) {
            LocalizedMorphism rho = LocalizedMorphism::identity(net);
            bool first = true;
            for (int c : chosen) {
                const auto& [site, g] = placements[c];
                auto step = LocalizedMorphism::from_local(net, Region{site}, "g" + std::to_string(g) + "@" + std::to_string(site),
                                                          {generators[g]});
                rho = first ? step : compose(rho, step);
                first = false;
            }
            const auto st = rho.multiplet.pull_back(vacuum.density());
            const double dist = observable_distance(net, omega.density(), st, all);
            ++out.tried;
            if (dist < best_dist) {
                best_dist = dist;
                best = rho;
            }
            if (dist <= tol) return true;
        }
        if (depth == max_factors) return false;
        for (std::size_t c = start; c < placements.size(); ++c) {
            if (!chosen.empty() && placements[c].first <= placements[chosen.back()].first) continue;
            chosen.push_back(static_cast<int>(c));
            if (self(self, c + 1, depth + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    for (const auto& g : generators)
        if (g.rows() != net.onsite_dim() || g.cols() != net.onsite_dim() ||
            max_abs_diff(g.adjoint() * g, opalg::identity(net.onsite_dim())) > 1e-10)
            throw PreconditionError("dhr_invert: generators must be on-site unitaries");
    const bool found = search(search, 0, 0);
    out.distance = best_dist;
    if (found) out.morphism = best;
    return out;
}

Matrix transverse_ising(const LatticeNet& net, double j, double h) {
    if (net.onsite_dim() != 2) throw PreconditionError("transverse_ising: needs spin-1/2 sites");
    Matrix out = Matrix::Zero(net.dim(), net.dim());
    for (int s = 0; s + 1 < net.sites(); ++s) out -= j * net.embed({s, s + 1}, kron(pauli::x(), pauli::x()));
    for (int s = 0; s < net.sites(); ++s) out -= h * net.embed({s}, pauli::z());
    return out;
}

}  // namespace opalg
