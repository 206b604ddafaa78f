#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "supertau/serialize.hpp"
#include "supertau/suite.hpp"

namespace supertau::cli {

struct TableEntry {
    std::string key;
    std::string latex_key;
    DiffPoly value;
};

struct Table {
    std::string target;
    nlohmann::json environment;
    LatexStyle style;
    std::vector<TableEntry> entries;
    std::optional<std::string> timestamp;
};

// Throws std::invalid_argument when the target has no table on this cover.
Table build_table(const std::string& target, const SuiteTarget& on, const SuiteOptions& opt);

// eps -> 0 of the KdV table against the one-dimensional manifold, entry by entry.
Report limit_report(const std::string& target, const SuiteOptions& opt);

nlohmann::json table_to_json(const Table& t);
Table table_from_json(const nlohmann::json& j);
std::string table_to_latex(const Table& t);
std::string table_to_text(const Table& t);

}  // namespace supertau::cli
