#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ffbench/binary_cap.hpp"
#include "ffbench/cap_geometry.hpp"
#include "ffbench/ivg.hpp"
#include "ffbench/quasicap.hpp"
#include "ffbench/roots.hpp"

namespace ffbench {

using Json = nlohmann::ordered_json;

// Readers throw Error(ParseError) on any shape or value problem.

Json to_json(const Wall& w);
Wall wall_from_json(const Json& j);

Json to_json(const BoxCap& cap);
BoxCap box_cap_from_json(const Json& j);

/// BoxCap fields plus a "quasicap" block.
Json to_json(const Quasicap& qc);
Quasicap quasicap_from_json(const Json& j);

Json to_json(const VertexCap& cap);
VertexCap vertex_cap_from_json(const Json& j);

Json to_json(const Recipe& recipe);
Recipe recipe_from_json(const Json& j);

Json to_json(const BinaryCap& cap);
BinaryCap binary_cap_from_json(const Json& j);

Json to_json(const RefutationWitness& w);
RefutationWitness witness_from_json(const Json& j);

Json to_json(const RelationReport& rep);
Json to_json(const WallReport& rep);
Json to_json(const CapReport& rep);
Json to_json(const AnalysisReport& rep);

std::string order_to_text(const std::vector<std::size_t>& order);
std::vector<std::size_t> order_from_text(const std::string& text);

/// index,numerator,denominator
std::string strand_csv(const std::vector<Rational>& u);

std::string analysis_csv_header();
std::string analysis_csv_row(const AnalysisReport& rep);

Json parse_json(const std::string& text);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace ffbench
