#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "amptree/catalog.hpp"
#include "amptree/dynamics.hpp"
#include "amptree/learning.hpp"
#include "amptree/leveled.hpp"
#include "amptree/stream.hpp"

namespace amptree {

using Json = nlohmann::ordered_json;

Json to_json(const IntegerPolynomial& p);
Json to_json(const Polynomial& p);
Json to_json(const TreeDistribution& dist);
Json to_json(const FixedPoint& fp);
Json to_json(const FixedPointReport& report);
Json to_json(const ConditionReport& report);
Json to_json(const OrderFit& fit);
Json to_json(const InputSpec& input);
Json to_json(const LevelConfig& config);
Json to_json(const StreamConfig& config);
Json to_json(const PhaseRow& row);
Json to_json(const WidthScalingTable& table);
Json to_json(const HalfProgressReport& report);
Json to_json(const LearnedTree& tree);

TreeDistribution distribution_from_json(const Json& j);
LearnedTree learned_from_json(const Json& j);
InputSpec input_from_json(const Json& j);
LevelConfig level_config_from_json(const Json& j);
StreamConfig stream_config_from_json(const Json& j);

// Bits from "0110..." or [0, 1, 1, 0, ...].
std::vector<std::uint8_t> bits_from_json(const Json& j, const std::string& field);

// Named catalog entry, e.g. {"name": "quad4", "t": 0.5}. Names: valiant,
// linear, quad4..quad7, quad_k, one_step, soft_threshold, staircase, dense,
// amplifier, tree, distribution, complement.
TreeDistribution build_construction(const Json& spec);

Json read_json_file(const std::string& path);

} // namespace amptree
