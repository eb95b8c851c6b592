#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qibg/rootsys.hpp"

namespace qibg {

nlohmann::json to_json(const RootSystem& rs);
nlohmann::json to_json(const Projection& p);
// Classes as lists of root coordinate strings, in clockwise order.
nlohmann::json to_json(const RootSystem& rs, const ClassOrdering& ordering);
nlohmann::json to_json(const InvariantReport& r);

// Standalone SVG of the projected positive roots, one ray per class, labelled
// with the class index.
std::string render_svg(const RootSystem& rs, const ClassOrdering& ordering);

}  // namespace qibg
