#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "opalg/algebra.hpp"
#include "opalg/dhrnet.hpp"
#include "opalg/error.hpp"
#include "opalg/groups.hpp"
#include "opalg/thermal.hpp"

namespace opalg::io {

using Json = nlohmann::ordered_json;

/// A well-formed document that does not match the expected schema; `where`
/// is a JSON-pointer-like path.
class SchemaError : public Error {
public:
    SchemaError(const std::string& where, const std::string& what) : Error(where + ": " + what) {}
};

/// Parses JSON text; syntax errors become ParseError with line and column.
Json parse(const std::string& text);
/// Reads and parses a file; a missing file is a PreconditionError.
Json read_file(const std::string& path);
std::string read_text(const std::string& path);

/// Indented JSON with doubles printed to 17 significant digits.
std::string dump(const Json& j);
/// "%.17g"
std::string number(double x);

/// {"rows","cols","re","im"} row-major; "im" may be omitted. A nested array
/// of real rows is accepted as a shorthand.
Matrix matrix_from_json(const Json& j, const std::string& where = "$");
Json matrix_to_json(const Matrix& m);
std::vector<Matrix> matrices_from_json(const Json& j, const std::string& where = "$");
/// {"re":[...],"im":[...]} or a plain array of reals.
Vector vector_from_json(const Json& j, const std::string& where = "$");

/// {"order","table"}, {"name": "cyclic:2"} or the bare name string.
FiniteGroup group_from_json(const Json& j, const std::string& where = "$");
/// {"matrices":[...]} (one per element), {"generator": m} for cyclic groups,
/// or a bare list of matrices.
UnitaryRep rep_from_json(const Json& j, const FiniteGroup& g, const std::string& where = "$");
/// {"dim": d} for all of B(C^d), {"generators":[...]} or {"basis":[...]}.
OperatorAlgebra field_from_json(const Json& j, const Tolerances& tol, const std::string& where = "$");
/// {"density": m} or {"vector": v}.
State state_from_json(const Json& j, const std::string& where = "$");
/// {"sites", "onsite_dim", "group", "onsite_rep"}.
LatticeNet net_from_json(const Json& j, const std::string& where = "$");
/// {"hamiltonian": m, "number": m?} or a bare matrix.
HamiltonianSystem system_from_json(const Json& j, const std::string& where = "$");
/// {"points":[{"beta","mu"?}...]} or {"beta":{"from","to","count"}}.
ThermalGrid grid_from_json(const Json& j, const std::string& where = "$");
/// [{"name","matrix"}...]
std::vector<Probe> probes_from_json(const Json& j, const std::string& where = "$");
/// {"probes":[...], "levels":[{"name","probes":[names]}...]}.
ObservableHierarchy hierarchy_from_json(const Json& j, const std::string& where = "$");
/// {"values": {name: x}} or {"state": state} evaluated on `probes`.
std::map<std::string, double> measured_from_json(const Json& j, const std::vector<Probe>& probes,
                                                 const std::string& where = "$");

}  // namespace opalg::io
