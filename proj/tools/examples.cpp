#include <cmath>
#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "opalg/cuntz.hpp"
#include "opalg/dhrnet.hpp"
#include "opalg/io.hpp"
#include "opalg/thermal.hpp"

namespace opalg::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;

class Bundle {
public:
    explicit Bundle(fs::path root) : root_(std::move(root)) {}

    void put(const std::string& rel, const std::string& text) {
        const fs::path p = root_ / rel;
        fs::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw PreconditionError("cannot write '" + p.string() + "'");
        f << text;
        files_.push_back(rel);
    }
    void put(const std::string& rel, const Json& j) { put(rel, io::dump(j)); }

    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path root_;
    std::vector<std::string> files_;
};

Json density_json(const Matrix& rho) { return Json{{"density", io::matrix_to_json(rho)}}; }

Json z2_group() { return Json{{"order", 2}, {"table", {{0, 1}, {1, 0}}}, {"name", "cyclic:2"}}; }

void z2_chain(Bundle& b, int n) {
    const std::string dir = "z2_chain_" + std::to_string(n) + "/";
    const LatticeNet net = LatticeNet::z2_chain(n);
    const int d = net.dim();

    b.put(dir + "net.json", Json{{"sites", n}, {"onsite_dim", 2}, {"group", z2_group()},
                                 {"onsite_rep", Json{{"generator", io::matrix_to_json(pauli::z())}}}});
    b.put(dir + "field.json", Json{{"dim", d}});
    b.put(dir + "group.json", z2_group());
    b.put(dir + "rep.json", Json{{"generator", io::matrix_to_json(net.global_rep()(1))}});

    const Matrix vac = matrix_unit(d, 0, 0);
    const State vacuum(vac, "vacuum");
    b.put(dir + "vacuum.json", density_json(vac));

    const auto flip = LocalizedMorphism::from_local(net, {0}, "flip@0", {pauli::x()});
    const Matrix charged = selected_state(flip, vacuum).density();
    b.put(dir + "charged.json", density_json(charged));
    b.put(dir + "mixture.json", density_json(0.5 * vac + 0.5 * charged));
    b.put(dir + "generators.json", Json{{"generators", Json::array({io::matrix_to_json(pauli::x())})}});

    const Matrix h = transverse_ising(net, 1.0, 0.5);
    b.put(dir + "hamiltonian.json", Json{{"hamiltonian", io::matrix_to_json(h)}});
    b.put(dir + "gibbs.json", density_json(gibbs_state(HamiltonianSystem(h), 1.0).density()));
}

void two_level(Bundle& b) {
    const std::string dir = "two_level_gibbs/";
    const Matrix h = pauli::z();
    const HamiltonianSystem sys(h);
    const Json system{{"hamiltonian", io::matrix_to_json(h)}};
    const Json grid{{"beta", {0.5, 2.0}}};
    b.put(dir + "system.json", system);
    b.put(dir + "grid.json", grid);

    const Json probes = Json::array({Json{{"name", "identity"}, {"matrix", io::matrix_to_json(identity(2))}},
                                     Json{{"name", "sz"}, {"matrix", io::matrix_to_json(pauli::z())}}});
    b.put(dir + "probes.json", probes);
    b.put(dir + "hierarchy.json",
          Json{{"probes", probes},
               {"levels", Json::array({Json{{"name", "S1"}, {"probes", {"identity"}}},
                                       Json{{"name", "S2"}, {"probes", {"identity", "sz"}}}})}});

    const State g05 = gibbs_state(sys, 0.5);
    const State g2 = gibbs_state(sys, 2.0);
    b.put(dir + "measured.json", Json{{"values", {{"identity", 1.0}, {"sz", g05(pauli::z()).real()}}}});
    b.put(dir + "channel.json", Json{{"system", system}, {"grid", grid}});
    const double mixed = 0.3 * g05(pauli::z()).real() + 0.7 * g2(pauli::z()).real();
    b.put(dir + "data.json", Json{{"values", {{"identity", 1.0}, {"sz", mixed}}}});
}

void cuntz_samples(Bundle& b) {
    const std::vector<std::string> exprs{"s1* s1",         "s1* s2",           "s1 s2* s2 s1*", "s1 s1* + s2 s2*",
                                         "s1* s2 s2* s1", "(s1 s2*)*",        "s1 s2 s2* s1* + s1 s1* s1 s1*",
                                         "1/2 s1 s1* - 1/2 s2 s2*", "2i s1 s2*"};
    Json list = Json::array();
    for (const auto& e : exprs) list.push_back(Json{{"expr", e}, {"normal_form", cuntz::parse(e, 2).str()}});
    b.put("cuntz_d2/expressions.json", Json{{"d", 2}, {"expressions", list}});
}

}  // namespace

std::vector<std::string> write_examples(const std::string& dir) {
    Bundle b(dir);
    z2_chain(b, 2);
    z2_chain(b, 3);
    two_level(b);
    cuntz_samples(b);
    const Json manifest{
        {"models", {"z2_chain_2", "z2_chain_3", "two_level_gibbs", "cuntz_d2"}},
        {"commands",
         {"sectors analyze --field z2_chain_2/field.json --group z2_chain_2/group.json --rep z2_chain_2/rep.json "
          "--state z2_chain_2/mixture.json --hamiltonian z2_chain_2/hamiltonian.json",
          "dhr check --net z2_chain_3/net.json --state z2_chain_3/charged.json --vacuum z2_chain_3/vacuum.json",
          "dhr check --net z2_chain_3/net.json --state z2_chain_3/gibbs.json --vacuum z2_chain_3/vacuum.json --tol 1e-6",
          "dhr invert --net z2_chain_3/net.json --state z2_chain_3/charged.json --vacuum z2_chain_3/vacuum.json "
          "--generators z2_chain_3/generators.json",
          "thermal estimate --system two_level_gibbs/system.json --grid two_level_gibbs/grid.json --measured "
          "two_level_gibbs/measured.json --hierarchy two_level_gibbs/hierarchy.json",
          "channels invert --channel two_level_gibbs/channel.json --probes two_level_gibbs/probes.json --data "
          "two_level_gibbs/data.json",
          "cuntz nf --d 2 --expr \"s1* s2 s2* s1\""}}};
    b.put("manifest.json", manifest);
    return b.files();
}

}  // namespace opalg::cli
