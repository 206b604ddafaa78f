#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "supertau/diffpoly.hpp"

namespace supertau {

struct LatexStyle {
    // Display names of the fields v^1..v^n; empty means "v^{alpha}".
    std::vector<std::string> fields;
    // With a single field the field index is dropped from subscripts.
    bool single_field = false;

    static LatexStyle kdv() { return LatexStyle{{"u"}, true}; }
};

std::string to_latex(Gen g, const LatexStyle& style = {});
std::string to_latex(const DiffPoly& p, const LatexStyle& style = {});

// Terms as [coefficient, [[generator, power]...], [odd generators...], eps-power],
// with a fifth entry for the c0 power when it is nonzero. Monomial order is the
// sorted internal order, so output is deterministic.
nlohmann::json to_json(const DiffPoly& p);
DiffPoly from_json(const nlohmann::json& j);

// Inverse of gen_name.
Gen parse_gen_name(const std::string& name);

}  // namespace supertau
