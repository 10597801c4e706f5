#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "opalg/channels.hpp"
#include "opalg/cuntz.hpp"
#include "opalg/dhrnet.hpp"
#include "opalg/io.hpp"
#include "opalg/sectors.hpp"
#include "opalg/thermal.hpp"

namespace opalg::cli {

namespace {

using io::Json;

struct Globals {
    std::uint64_t seed = kDefaultSeed;
    Tolerances tol;
    std::string format = "json";
    bool format_given = false;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

Json region_json(const Region& r) {
    Json a = Json::array();
    for (int s : r) a.push_back(s);
    return a;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot write '" + path + "'");
    f << text;
}

FiniteGroup load_group(const std::string& arg) {
    if (std::filesystem::exists(arg)) return io::group_from_json(io::read_file(arg));
    return FiniteGroup::named(arg);
}

// ---------------------------------------------------------------- sectors --

struct SectorsArgs {
    std::string field, group, rep, state, hamiltonian;
};

int sectors_analyze(const SectorsArgs& a, const Globals& g, std::ostream& out) {
    const auto field = io::field_from_json(io::read_file(a.field), g.tol);
    const auto group = load_group(a.group);
    const auto rep = io::rep_from_json(io::read_file(a.rep), group);
    const auto dec = decompose_sectors(field, rep, g.tol, g.seed);
    const int centre = center_dimension(rep, g.tol, g.seed);

    std::optional<ProbabilityWeight> charges;
    if (!a.state.empty()) charges = estimate_charge(io::state_from_json(io::read_file(a.state)), dec);
    std::optional<std::vector<double>> energies;
    if (!a.hamiltonian.empty()) {
        const auto sys = io::system_from_json(io::read_file(a.hamiltonian));
        if (sys.dim() != dec.ambient_dim()) throw DimensionError("hamiltonian dimension does not match the representation");
        energies = sector_energies(dec, sys.h());
    }

    if (g.format == "csv") {
        out << "label,dim_h,dim_v" << (charges ? ",charge" : "") << (energies ? ",energy" : "") << "\n";
        for (int k = 0; k < dec.size(); ++k) {
            const auto& s = dec.sectors[k];
            out << csv_field(s.label) << ',' << s.dim_h << ',' << s.dim_v;
            if (charges) out << ',' << io::number((*charges)[k]);
            if (energies) out << ',' << io::number((*energies)[k]);
            out << "\n";
        }
        return kOk;
    }
    Json r;
    r["labels"] = dec.labels();
    Json dims = Json::array();
    for (const auto& s : dec.sectors) dims.push_back(Json{{"label", s.label}, {"dim_h", s.dim_h}, {"dim_v", s.dim_v}});
    r["dims"] = dims;
    r["center_dim"] = centre;
    r["field_full"] = !dec.field_not_full;
    r["reconstruction_residual"] = reconstruction_residual(dec, rep);
    if (charges) {
        Json c = Json::object();
        for (int k = 0; k < dec.size(); ++k) c[dec.sectors[k].label] = (*charges)[k];
        r["charges"] = c;
    }
    if (energies) {
        Json e = Json::object();
        for (int k = 0; k < dec.size(); ++k) e[dec.sectors[k].label] = (*energies)[k];
        r["sector_energies"] = e;
    }
    if (g.format == "text") {
        out << "sectors " << dec.size() << ", center_dim " << centre << "\n";
        for (int k = 0; k < dec.size(); ++k) {
            const auto& s = dec.sectors[k];
            out << s.label << " dim_h=" << s.dim_h << " dim_v=" << s.dim_v;
            if (charges) out << " charge=" << io::number((*charges)[k]);
            if (energies) out << " energy=" << io::number((*energies)[k]);
            out << "\n";
        }
        return kOk;
    }
    out << io::dump(r);
    return kOk;
}

// ---------------------------------------------------------------- thermal --

struct ThermalArgs {
    std::string system, grid, measured, hierarchy, csv;
    double tol = 1e-8;
};

Json weights_json(const ProbabilityWeight& w) {
    Json j = Json::object();
    for (int k = 0; k < w.size(); ++k) j[w.space()[k].name] = w[k];
    return j;
}

std::string thermal_csv(const HamiltonianSystem& sys, const ThermalGrid& grid, const std::vector<Probe>& probes) {
    std::ostringstream os;
    os << "beta,mu";
    for (const auto& p : probes) os << ',' << csv_field(p.name);
    os << "\n";
    std::vector<Vector> cols;
    for (const auto& p : probes) cols.push_back(thermal_function(sys, grid, p.op));
    for (int i = 0; i < grid.size(); ++i) {
        const auto& pt = grid.points()[i];
        os << io::number(pt.beta) << ',' << (pt.mu ? io::number(*pt.mu) : std::string());
        for (const auto& c : cols) os << ',' << io::number(c(i).real());
        os << "\n";
    }
    return os.str();
}

int thermal_estimate(const ThermalArgs& a, const Globals& g, std::ostream& out) {
    const auto sys = io::system_from_json(io::read_file(a.system));
    const auto grid = io::grid_from_json(io::read_file(a.grid));
    const auto hierarchy = io::hierarchy_from_json(io::read_file(a.hierarchy));
    std::vector<Probe> probes;
    for (const auto& level : hierarchy.levels)
        for (const auto& p : level.probes)
            if (std::none_of(probes.begin(), probes.end(), [&](const Probe& q) { return q.name == p.name; }))
                probes.push_back(p);
    for (const auto& p : probes)
        if (p.op.rows() != sys.dim() || p.op.cols() != sys.dim())
            throw DimensionError("probe '" + p.name + "' does not match the system dimension");
    const auto measured = io::measured_from_json(io::read_file(a.measured), probes);
    const auto channel = build_thermal_channel(sys, grid);
    const auto rep = hierarchy_report(measured, hierarchy, channel, a.tol, g.tol);
    const std::string csv = thermal_csv(sys, grid, probes);
    if (!a.csv.empty()) write_file(a.csv, csv);
    const bool accepted = rep.verdicts.empty() || rep.verdicts.back().accepted;

    if (g.format == "csv") {
        out << csv;
        return accepted ? kOk : kRejected;
    }
    Json levels = Json::array();
    for (std::size_t k = 0; k < rep.verdicts.size(); ++k) {
        const auto& v = rep.verdicts[k];
        Json l;
        l["name"] = rep.level_names[k];
        l["accepted"] = v.accepted;
        l["residual"] = v.residual;
        l["unique"] = v.unique;
        l["nullspace_dim"] = v.nullspace_dim;
        l["probes"] = v.probes;
        l["weights"] = weights_json(v.weights);
        l["mean"] = v.mean;
        l["variance"] = v.variance;
        levels.push_back(l);
    }
    Json summary = Json::array();
    for (const auto& pt : grid.points()) {
        const auto s = thermal_summary(sys, pt);
        Json j;
        j["beta"] = pt.beta;
        if (pt.mu) j["mu"] = *pt.mu;
        j["log_partition"] = s.log_partition;
        j["internal_energy"] = s.internal_energy;
        j["free_energy"] = s.free_energy;
        j["entropy"] = s.entropy;
        summary.push_back(j);
    }
    Json r;
    r["accepted"] = accepted;
    r["maximal_accepted"] = rep.maximal_accepted ? Json(rep.level_names[*rep.maximal_accepted]) : Json(nullptr);
    r["monotone"] = rep.monotone;
    r["tol"] = a.tol;
    r["levels"] = levels;
    r["grid_summary"] = summary;
    if (g.format == "text") {
        for (std::size_t k = 0; k < rep.verdicts.size(); ++k)
            out << rep.level_names[k] << ": " << (rep.verdicts[k].accepted ? "accepted" : "rejected")
                << " residual=" << io::number(rep.verdicts[k].residual) << "\n";
        out << "maximal accepted: " << (rep.maximal_accepted ? rep.level_names[*rep.maximal_accepted] : "none") << "\n";
    } else {
        out << io::dump(r);
    }
    return accepted ? kOk : kRejected;
}

// -------------------------------------------------------------------- dhr --

struct DhrArgs {
    std::string net, state, vacuum, generators;
    double tol = 1e-8;
    bool all_subsets = false;
    int max_factors = 2;
};

int dhr_check_cmd(const DhrArgs& a, const Globals& g, std::ostream& out) {
    const auto net = io::net_from_json(io::read_file(a.net));
    const auto omega = io::state_from_json(io::read_file(a.state));
    const auto vacuum = io::state_from_json(io::read_file(a.vacuum));
    const auto rep = dhr_check(omega, vacuum, net, a.tol, a.all_subsets);
    if (g.format == "csv") {
        out << "region,distance,witness\n";
        for (const auto& [r, d] : rep.distances)
            out << csv_field(region_name(r)) << ',' << io::number(d) << ',' << (d <= a.tol ? "true" : "false") << "\n";
    } else if (g.format == "text") {
        out << (rep.passes ? "passes" : "fails") << " with " << rep.witness_regions.size() << " witness regions\n";
        for (const auto& r : rep.witness_regions) out << region_name(r) << "\n";
    } else {
        Json r;
        r["passes"] = rep.passes;
        Json w = Json::array();
        for (const auto& reg : rep.witness_regions) w.push_back(region_json(reg));
        r["witness_regions"] = w;
        Json d = Json::array();
        for (const auto& [reg, dist] : rep.distances) d.push_back(Json{{"region", region_json(reg)}, {"distance", dist}});
        r["distances"] = d;
        r["tol"] = a.tol;
        out << io::dump(r);
    }
    return rep.passes ? kOk : kRejected;
}

int dhr_invert_cmd(const DhrArgs& a, const Globals& g, std::ostream& out) {
    const auto net = io::net_from_json(io::read_file(a.net));
    const auto omega = io::state_from_json(io::read_file(a.state));
    const auto vacuum = io::state_from_json(io::read_file(a.vacuum));
    const Json gj = io::read_file(a.generators);
    const auto gens = io::matrices_from_json(gj.is_object() && gj.contains("generators") ? gj["generators"] : gj,
                                             gj.is_object() ? "$/generators" : "$");
    if (a.max_factors < 1) throw PreconditionError("--max-factors must be positive");
    const auto res = dhr_invert(omega, vacuum, net, gens, a.tol, a.max_factors);
    const auto dec = decompose_sectors(OperatorAlgebra::full(net.dim()), net.global_rep(), g.tol, g.seed);
    const auto charges = estimate_charge(omega, dec);
    if (g.format == "text" || g.format == "csv") {
        if (res.morphism)
            out << "found " << res.morphism->label() << " on " << region_name(res.morphism->region)
                << " distance=" << io::number(res.distance) << "\n";
        else
            out << "not found after " << res.tried << " candidates, best distance=" << io::number(res.distance) << "\n";
    } else {
        Json r;
        r["found"] = res.morphism.has_value();
        r["label"] = res.morphism ? Json(res.morphism->label()) : Json(nullptr);
        r["region"] = res.morphism ? region_json(res.morphism->region) : Json(nullptr);
        r["distance"] = res.distance;
        r["tried"] = res.tried;
        r["charges"] = weights_json(charges);
        out << io::dump(r);
    }
    return res.morphism ? kOk : kRejected;
}

// ------------------------------------------------------------------ cuntz --

struct CuntzArgs {
    int d = 2;
    std::string expr;
    bool sigma = false;
    bool json = false;
};

int cuntz_nf(const CuntzArgs& a, const Globals& g, std::ostream& out) {
    auto p = cuntz::parse(a.expr, a.d);
    if (a.sigma) p = cuntz::canonical_endomorphism(p);
    const std::string format = a.json ? "json" : g.format_given ? g.format : "text";
    if (format == "csv") {
        out << "mu,nu,coefficient,re,im\n";
        for (const auto& [w, c] : p.terms()) {
            auto idx = [](const std::vector<int>& v) {
                std::string s;
                for (int i : v) s += std::to_string(i);
                return s;
            };
            out << idx(w.mu) << ',' << idx(w.nu) << ',' << csv_field(c.str()) << ',' << io::number(c.value().real())
                << ',' << io::number(c.value().imag()) << "\n";
        }
    } else if (format == "json") {
        Json r;
        r["d"] = a.d;
        r["normal_form"] = p.str();
        r["exact"] = p.exact();
        Json terms = Json::array();
        for (const auto& [w, c] : p.terms()) {
            Json t;
            t["mu"] = w.mu;
            t["nu"] = w.nu;
            t["coefficient"] = c.str();
            t["re"] = c.value().real();
            t["im"] = c.value().imag();
            terms.push_back(t);
        }
        r["terms"] = terms;
        out << io::dump(r);
    } else {
        out << p.str() << "\n";
    }
    return kOk;
}

// --------------------------------------------------------------- channels --

struct ChannelArgs {
    std::string channel, probes, data, design_csv;
    double tol = 1e-8;
};

ClassicalQuantumChannel load_channel(const Json& j) {
    if (j.is_object() && j.contains("system"))
        return build_thermal_channel(io::system_from_json(j["system"], "$/system"),
                                     io::grid_from_json(j.contains("grid") ? j["grid"] : Json::object(), "$/grid"));
    if (!j.is_object() || !j.contains("labels") || !j.contains("fibres"))
        throw io::SchemaError("$", "expected {\"labels\", \"fibres\"} or {\"system\", \"grid\"}");
    const Json& labels = j["labels"];
    const Json& fibres = j["fibres"];
    if (!labels.is_array() || !fibres.is_array() || labels.size() != fibres.size())
        throw io::SchemaError("$", "labels and fibres must be arrays of equal length");
    std::vector<std::string> names;
    std::vector<State> states;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (!labels[k].is_string()) throw io::SchemaError("$/labels/" + std::to_string(k), "expected a string");
        names.push_back(labels[k].get<std::string>());
        states.push_back(io::state_from_json(fibres[k], "$/fibres/" + std::to_string(k)));
    }
    return ClassicalQuantumChannel(ClassifyingSpace::labels(names), std::move(states));
}

int channels_invert(const ChannelArgs& a, const Globals& g, std::ostream& out) {
    const auto channel = load_channel(io::read_file(a.channel));
    const auto probes = io::probes_from_json(io::read_file(a.probes));
    const auto measured = io::measured_from_json(io::read_file(a.data), probes);
    std::vector<Matrix> ops;
    std::vector<std::string> names;
    RealVector data(static_cast<Eigen::Index>(probes.size()));
    for (std::size_t k = 0; k < probes.size(); ++k) {
        auto it = measured.find(probes[k].name);
        if (it == measured.end()) throw PreconditionError("no measured value for probe '" + probes[k].name + "'");
        if (probes[k].op.rows() != channel.ambient_dim())
            throw DimensionError("probe '" + probes[k].name + "' does not match the channel dimension");
        ops.push_back(probes[k].op);
        names.push_back(probes[k].name);
        data(static_cast<Eigen::Index>(k)) = it->second;
    }
    const auto res = invert_cq(channel, ops, data, a.tol, g.tol);
    const std::string csv = design_matrix_csv(channel, ops, names);
    if (!a.design_csv.empty()) write_file(a.design_csv, csv);
    const int code = res.within_tolerance ? kOk : kRejected;
    if (g.format == "csv") {
        out << csv;
        return code;
    }
    if (g.format == "text") {
        out << "residual " << io::number(res.residual) << (res.unique ? " unique" : " not unique") << "\n";
        for (int k = 0; k < res.weights.size(); ++k)
            out << res.weights.space()[k].name << ' ' << io::number(res.weights[k]) << "\n";
        return code;
    }
    Json r;
    r["weights"] = weights_json(res.weights);
    r["residual"] = res.residual;
    r["within_tolerance"] = res.within_tolerance;
    r["unique"] = res.unique;
    r["rank"] = res.separation.rank;
    r["sigma_min"] = res.separation.sigma_min;
    r["nullspace_dim"] = res.separation.nullspace_dim;
    r["kkt_residual"] = res.kkt_residual;
    r["converged"] = res.converged;
    r["iterations"] = res.iterations;
    out << io::dump(r);
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-dimensional operator-algebra toolkit", "opalg"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "seed for every random draw")->capture_default_str();
    app.add_option("--tol.rank", g.tol.rank, "relative rank cutoff")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tol.gap", g.tol.gap, "eigenvalue clustering gap")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tol.state", g.tol.state, "state validation tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    auto* format = app.add_option("--format", g.format, "report format (cuntz nf defaults to text)")
                       ->check(CLI::IsMember({"json", "csv", "text"}))
                       ->capture_default_str();

    int code = kOk;

    auto* sectors = app.add_subcommand("sectors", "superselection sectors")->require_subcommand(1);
    SectorsArgs sa;
    auto* analyze = sectors->add_subcommand("analyze", "decompose under a group action");
    analyze->add_option("--field", sa.field, "field algebra JSON")->required();
    analyze->add_option("--group", sa.group, "group JSON or a built-in name such as cyclic:2")->required();
    analyze->add_option("--rep", sa.rep, "representation JSON")->required();
    analyze->add_option("--state", sa.state, "state JSON for charge estimation");
    analyze->add_option("--hamiltonian", sa.hamiltonian, "Hamiltonian JSON for sector energies");
    analyze->callback([&] { code = sectors_analyze(sa, g, out); });

    auto* thermal = app.add_subcommand("thermal", "thermal estimation")->require_subcommand(1);
    ThermalArgs ta;
    auto* estimate = thermal->add_subcommand("estimate", "S-thermality along a probe hierarchy");
    estimate->add_option("--system", ta.system, "system JSON")->required();
    estimate->add_option("--grid", ta.grid, "grid JSON")->required();
    estimate->add_option("--measured", ta.measured, "measured values JSON")->required();
    estimate->add_option("--hierarchy", ta.hierarchy, "probe hierarchy JSON")->required();
    estimate->add_option("--tol", ta.tol, "acceptance tolerance on the residual")->check(CLI::PositiveNumber)->capture_default_str();
    estimate->add_option("--csv", ta.csv, "also write the thermal functions as CSV");
    estimate->callback([&] { code = thermal_estimate(ta, g, out); });

    auto* dhr = app.add_subcommand("dhr", "DHR criterion on lattice nets")->require_subcommand(1);
    DhrArgs da;
    auto* check = dhr->add_subcommand("check", "omega = omega0 mod A(O')");
    auto* invert = dhr->add_subcommand("invert", "search a localized morphism realizing a state");
    for (auto* sub : {check, invert}) {
        sub->add_option("--net", da.net, "net JSON")->required();
        sub->add_option("--state", da.state, "state JSON")->required();
        sub->add_option("--vacuum", da.vacuum, "vacuum state JSON")->required();
        sub->add_option("--tol", da.tol, "distance tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    }
    check->add_flag("--all-subsets", da.all_subsets, "every proper subset instead of intervals (n <= 8)");
    invert->add_option("--generators", da.generators, "on-site unitaries JSON")->required();
    invert->add_option("--max-factors", da.max_factors, "largest number of placements")->capture_default_str();
    check->callback([&] { code = dhr_check_cmd(da, g, out); });
    invert->callback([&] { code = dhr_invert_cmd(da, g, out); });

    auto* cuntz = app.add_subcommand("cuntz", "Cuntz algebra words")->require_subcommand(1);
    CuntzArgs ca;
    auto* nf = cuntz->add_subcommand("nf", "normal form of an expression");
    nf->add_option("--d", ca.d, "number of generators")->check(CLI::Range(1, 64))->capture_default_str();
    nf->add_option("--expr", ca.expr, "expression, e.g. \"s1* s2 s2* s1\"")->required();
    nf->add_flag("--sigma", ca.sigma, "apply the canonical endomorphism");
    nf->add_flag("--json", ca.json, "print the JSON term list");
    nf->callback([&] { code = cuntz_nf(ca, g, out); });

    auto* channels = app.add_subcommand("channels", "classical-quantum channels")->require_subcommand(1);
    ChannelArgs cha;
    auto* cinv = channels->add_subcommand("invert", "weights from probe data");
    cinv->add_option("--channel", cha.channel, "channel JSON")->required();
    cinv->add_option("--probes", cha.probes, "probes JSON")->required();
    cinv->add_option("--data", cha.data, "measured values JSON")->required();
    cinv->add_option("--tol", cha.tol, "residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    cinv->add_option("--design-csv", cha.design_csv, "write the design matrix as CSV");
    cinv->callback([&] { code = channels_invert(cha, g, out); });

    auto* examples = app.add_subcommand("examples", "bundled models")->require_subcommand(1);
    std::string dir = "opalg-examples";
    auto* init = examples->add_subcommand("init", "write the worked examples");
    init->add_option("--dir", dir, "target directory")->capture_default_str();
    init->callback([&] {
        const auto files = write_examples(dir);
        if (g.format == "json") {
            Json r;
            r["dir"] = dir;
            r["files"] = files;
            out << io::dump(r);
        } else {
            for (const auto& f : files) out << f << "\n";
        }
    });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse_complete_callback([&] { g.format_given = format->count() > 0; });
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return code;
}

}  // namespace opalg::cli
