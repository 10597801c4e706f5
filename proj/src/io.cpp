#include "opalg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace opalg::io {

namespace {

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(where, std::string("missing key \"") + key + "\"");
    return *it;
}

double real_of(const Json& j, const std::string& where) {
    if (!j.is_number()) throw SchemaError(where, "expected a number");
    return j.get<double>();
}

int int_of(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) throw SchemaError(where, "expected an integer");
    return j.get<int>();
}

std::vector<double> reals_of(const Json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(real_of(j[k], where + "/" + std::to_string(k)));
    return out;
}

void dump_into(const Json& j, std::string& out, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(it.key()).dump() + ": ";
                dump_into(it.value(), out, depth + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            if (flat) {
                out += "[";
                for (std::size_t k = 0; k < j.size(); ++k) {
                    if (k) out += ", ";
                    dump_into(j[k], out, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ",\n";
                out += pad;
                dump_into(j[k], out, depth + 1);
            }
            out += "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float:
            out += number(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

}  // namespace

std::string number(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        const auto cut = msg.find("; ");
        throw ParseError("malformed JSON" + (cut == std::string::npos ? std::string() : " (" + msg.substr(cut + 2) + ")"),
                         line, col);
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_file(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": malformed JSON", e.line(), e.column());
    }
}

std::string dump(const Json& j) {
    std::string out;
    dump_into(j, out, 0);
    out += "\n";
    return out;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
    if (j.is_array()) {
        const int rows = static_cast<int>(j.size());
        if (rows == 0) throw SchemaError(where, "empty matrix");
        Matrix m(rows, 0);
        for (int r = 0; r < rows; ++r) {
            const auto row = reals_of(j[r], where + "/" + std::to_string(r));
            if (r == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
            if (static_cast<Eigen::Index>(row.size()) != m.cols()) throw SchemaError(where, "ragged matrix rows");
            for (std::size_t c = 0; c < row.size(); ++c) m(r, static_cast<Eigen::Index>(c)) = row[c];
        }
        return m;
    }
    const int rows = int_of(field(j, "rows", where), where + "/rows");
    const int cols = int_of(field(j, "cols", where), where + "/cols");
    if (rows < 1 || cols < 1) throw SchemaError(where, "matrix dimensions must be positive");
    if (rows > kMaxAmbientDim || cols > kMaxAmbientDim) throw DimensionError(where + ": matrix exceeds 256");
    const auto re = reals_of(field(j, "re", where), where + "/re");
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = reals_of(j["im"], where + "/im");
    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    if (re.size() != n) throw SchemaError(where + "/re", "expected rows*cols = " + std::to_string(n) + " entries");
    if (im.size() != n) throw SchemaError(where + "/im", "expected rows*cols = " + std::to_string(n) + " entries");
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = cplx(re[r * cols + c], im[r * cols + c]);
    return m;
}

Json matrix_to_json(const Matrix& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

std::vector<Matrix> matrices_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array of matrices");
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(matrix_from_json(j[k], where + "/" + std::to_string(k)));
    return out;
}

Vector vector_from_json(const Json& j, const std::string& where) {
    std::vector<double> re, im;
    if (j.is_array()) {
        re = reals_of(j, where);
    } else {
        re = reals_of(field(j, "re", where), where + "/re");
        if (j.contains("im")) im = reals_of(j["im"], where + "/im");
    }
    if (im.empty()) im.assign(re.size(), 0.0);
    if (re.empty() || im.size() != re.size()) throw SchemaError(where, "vector parts must be nonempty and equal length");
    Vector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<Eigen::Index>(k)) = cplx(re[k], im[k]);
    return v;
}

FiniteGroup group_from_json(const Json& j, const std::string& where) {
    if (j.is_string()) return FiniteGroup::named(j.get<std::string>());
    if (j.is_object() && j.contains("name") && !j.contains("table")) {
        if (!j["name"].is_string()) throw SchemaError(where + "/name", "expected a string");
        return FiniteGroup::named(j["name"].get<std::string>());
    }
    const int order = int_of(field(j, "order", where), where + "/order");
    const Json& t = field(j, "table", where);
    if (!t.is_array() || static_cast<int>(t.size()) != order) throw SchemaError(where + "/table", "expected order rows");
    std::vector<std::vector<int>> table;
    for (int r = 0; r < order; ++r) {
        const Json& row = t[r];
        const std::string at = where + "/table/" + std::to_string(r);
        if (!row.is_array()) throw SchemaError(at, "expected an array");
        std::vector<int> out;
        for (std::size_t c = 0; c < row.size(); ++c) out.push_back(int_of(row[c], at + "/" + std::to_string(c)));
        table.push_back(std::move(out));
    }
    std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : std::string();
    return FiniteGroup(std::move(table), std::move(name));
}

UnitaryRep rep_from_json(const Json& j, const FiniteGroup& g, const std::string& where) {
    if (j.is_object() && j.contains("generator"))
        return UnitaryRep::cyclic_from_generator(g, matrix_from_json(j["generator"], where + "/generator"));
    const Json& list = j.is_object() ? field(j, "matrices", where) : j;
    const std::string at = j.is_object() ? where + "/matrices" : where;
    auto ms = matrices_from_json(list, at);
    if (static_cast<int>(ms.size()) != g.order())
        throw SchemaError(at, "expected one matrix per group element (" + std::to_string(g.order()) + ")");
    return UnitaryRep(g, std::move(ms));
}

OperatorAlgebra field_from_json(const Json& j, const Tolerances& tol, const std::string& where) {
    if (j.contains("dim")) {
        const int d = int_of(j["dim"], where + "/dim");
        if (d < 1 || d > kMaxAmbientDim) throw DimensionError(where + "/dim: must lie in 1..256");
        return OperatorAlgebra::full(d);
    }
    if (j.contains("generators")) return generate_algebra(matrices_from_json(j["generators"], where + "/generators"), true, tol);
    if (j.contains("basis")) {
        auto ms = matrices_from_json(j["basis"], where + "/basis");
        if (ms.empty()) throw SchemaError(where + "/basis", "empty basis");
        const int d = static_cast<int>(ms.front().rows());
        auto basis = orthonormalize(ms, tol.rank);
        const bool unit = span_residual(basis, identity(d)) <= 1e-9;
        return OperatorAlgebra(d, std::move(basis), unit);
    }
    throw SchemaError(where, "expected \"dim\", \"generators\" or \"basis\"");
}

State state_from_json(const Json& j, const std::string& where) {
    std::string label = j.is_object() && j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
    if (j.is_object() && j.contains("vector")) {
        Vector v = vector_from_json(j["vector"], where + "/vector");
        if (std::abs(v.norm() - 1.0) > 1e-10) throw SchemaError(where + "/vector", "vector is not normalized");
        return State::pure(v, label);
    }
    return State(matrix_from_json(field(j, "density", where), where + "/density"), label);
}

LatticeNet net_from_json(const Json& j, const std::string& where) {
    const int sites = int_of(field(j, "sites", where), where + "/sites");
    const int d0 = int_of(field(j, "onsite_dim", where), where + "/onsite_dim");
    const FiniteGroup g = group_from_json(field(j, "group", where), where + "/group");
    const UnitaryRep rep = rep_from_json(field(j, "onsite_rep", where), g, where + "/onsite_rep");
    if (rep.dim() != d0) throw SchemaError(where + "/onsite_rep", "matrices must be onsite_dim square");
    return LatticeNet(sites, rep);
}

HamiltonianSystem system_from_json(const Json& j, const std::string& where) {
    if (j.is_object() && j.contains("hamiltonian")) {
        Matrix h = matrix_from_json(j["hamiltonian"], where + "/hamiltonian");
        std::optional<Matrix> n;
        if (j.contains("number")) n = matrix_from_json(j["number"], where + "/number");
        return HamiltonianSystem(std::move(h), std::move(n));
    }
    return HamiltonianSystem(matrix_from_json(j, where));
}

ThermalGrid grid_from_json(const Json& j, const std::string& where) {
    if (j.is_object() && j.contains("beta")) {
        const Json& b = j["beta"];
        const std::string at = where + "/beta";
        if (b.is_array()) {
            std::vector<ThermalPoint> pts;
            for (double x : reals_of(b, at)) pts.push_back({x, std::nullopt});
            return ThermalGrid(std::move(pts));
        }
        return ThermalGrid::linear_beta(real_of(field(b, "from", at), at + "/from"), real_of(field(b, "to", at), at + "/to"),
                                        int_of(field(b, "count", at), at + "/count"));
    }
    const Json& pts = field(j, "points", where);
    if (!pts.is_array()) throw SchemaError(where + "/points", "expected an array");
    std::vector<ThermalPoint> out;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const std::string at = where + "/points/" + std::to_string(k);
        ThermalPoint p;
        p.beta = real_of(field(pts[k], "beta", at), at + "/beta");
        if (pts[k].contains("mu")) p.mu = real_of(pts[k]["mu"], at + "/mu");
        out.push_back(p);
    }
    return ThermalGrid(std::move(out));
}

std::vector<Probe> probes_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array of probes");
    std::vector<Probe> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string at = where + "/" + std::to_string(k);
        const Json& name = field(j[k], "name", at);
        if (!name.is_string()) throw SchemaError(at + "/name", "expected a string");
        out.push_back({name.get<std::string>(), matrix_from_json(field(j[k], "matrix", at), at + "/matrix")});
    }
    return out;
}

ObservableHierarchy hierarchy_from_json(const Json& j, const std::string& where) {
    const auto probes = probes_from_json(field(j, "probes", where), where + "/probes");
    const Json& levels = field(j, "levels", where);
    if (!levels.is_array()) throw SchemaError(where + "/levels", "expected an array");
    ObservableHierarchy h;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const std::string at = where + "/levels/" + std::to_string(k);
        ObservableHierarchy::Level level;
        const Json& name = field(levels[k], "name", at);
        if (!name.is_string()) throw SchemaError(at + "/name", "expected a string");
        level.name = name.get<std::string>();
        const Json& names = field(levels[k], "probes", at);
        if (!names.is_array()) throw SchemaError(at + "/probes", "expected an array of probe names");
        for (const auto& n : names) {
            if (!n.is_string()) throw SchemaError(at + "/probes", "expected probe names");
            auto it = std::find_if(probes.begin(), probes.end(), [&](const Probe& p) { return p.name == n.get<std::string>(); });
            if (it == probes.end()) throw SchemaError(at + "/probes", "unknown probe \"" + n.get<std::string>() + "\"");
            level.probes.push_back(*it);
        }
        h.levels.push_back(std::move(level));
    }
    return h;
}

std::map<std::string, double> measured_from_json(const Json& j, const std::vector<Probe>& probes, const std::string& where) {
    std::map<std::string, double> out;
    if (j.is_object() && j.contains("state")) {
        const State s = state_from_json(j["state"], where + "/state");
        for (const auto& p : probes) {
            if (p.op.rows() != s.dim()) throw SchemaError(where + "/state", "state dimension does not match probe " + p.name);
            out[p.name] = s(p.op).real();
        }
        return out;
    }
    const Json& values = field(j, "values", where);
    if (!values.is_object()) throw SchemaError(where + "/values", "expected an object of probe values");
    for (auto it = values.begin(); it != values.end(); ++it)
        out[it.key()] = real_of(it.value(), where + "/values/" + it.key());
    return out;
}

}  // namespace opalg::io
