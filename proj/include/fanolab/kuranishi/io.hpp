#pragma once

#include "fanolab/jets/errors.hpp"
#include "fanolab/kuranishi/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fanolab::kuranishi {

using json = nlohmann::ordered_json;

/// Malformed DGLA file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// DGLA file:
///   {"name": str, "degrees": [int], "dims": [int],
///    "differential": [{"degree": k, "matrix": [[q]]}],       dim(k+1) rows
///    "bracket": [{"left": [p, i], "right": [q, j], "result": k, "value": q}],
///    "inner_product": [{"degree": k, "matrix": [[q]]}],      optional
///    "linear": [[q]]}                                        optional, degree-1 vectors
/// where q is a "p/q" string or an integer.
Dgla dgla_from_json(const json& j);
json to_json(const Dgla& d);
/// The "linear" field, if present.
std::optional<std::vector<VectorQ>> linear_from_json(const json& j, const Dgla& d);

Dgla load_dgla(const std::filesystem::path& path);

/// "abelian", "three_element", "obstructed"
const std::vector<std::string>& builtin_names();
Dgla builtin_dgla(const std::string& name);

json to_json(const VectorQ& v);
json to_json(const FormalSeries& s);
json to_json(const KuranishiSolution& s);
json to_json(const ValidationReport& r);

} // namespace fanolab::kuranishi
