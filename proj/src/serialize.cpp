#include "amptree/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace amptree {

namespace {

const Json& field(const Json& j, const std::string& key) {
    if (!j.is_object()) throw ConfigError("expected an object holding '" + key + "'");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing field '" + key + "'");
    return *it;
}

double number(const Json& j, const std::string& key) {
    const Json& v = field(j, key);
    if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number");
    return v.get<double>();
}

double number_or(const Json& j, const std::string& key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

template <class Int>
Int integer(const Json& j, const std::string& key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0))
        throw ConfigError("field '" + key + "' must be a nonnegative integer");
    return v.get<Int>();
}

template <class Int>
Int integer_or(const Json& j, const std::string& key, Int fallback) {
    return j.contains(key) ? integer<Int>(j, key) : fallback;
}

std::string text(const Json& j, const std::string& key) {
    const Json& v = field(j, key);
    if (!v.is_string()) throw ConfigError("field '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& key) {
    const Json& v = field(j, key);
    if (!v.is_array()) throw ConfigError("field '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("field '" + key + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

AndOrTree tree_field(const Json& j, const std::string& key) {
    try {
        return parse_sexpr(text(j, key));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("field '" + key + "': " + e.what());
    }
}

} // namespace

Json to_json(const IntegerPolynomial& p) { return Json(p.coeffs); }

Json to_json(const Polynomial& p) { return Json(p.coefficients()); }

Json to_json(const TreeDistribution& dist) {
    Json entries = Json::array();
    for (const auto& e : dist.entries()) entries.push_back({{"tree", to_sexpr(e.tree)}, {"weight", e.weight}});
    return {{"label", dist.label()},
            {"entries", std::move(entries)},
            {"mixture", dist.mixture() ? to_json(*dist.mixture()) : Json(nullptr)}};
}

Json to_json(const FixedPoint& fp) {
    return {{"location", fp.location}, {"derivative", fp.derivative}, {"class", to_string(fp.cls)}};
}

Json to_json(const FixedPointReport& report) {
    Json out = Json::array();
    for (const auto& fp : report.points) out.push_back(to_json(fp));
    return out;
}

Json to_json(const ConditionReport& r) {
    Json violations = Json::array();
    for (const auto& v : r.violations)
        violations.push_back(
            {{"condition", v.condition}, {"lo", v.lo}, {"hi", v.hi}, {"witness", v.witness}, {"value", v.value}});
    return {{"t", r.t},   {"u", r.u},   {"v", r.v},   {"margin", r.margin},
            {"c1", r.c1}, {"c2", r.c2}, {"c3", r.c3}, {"c4", r.c4},
            {"fixed_points", r.fixed_points}, {"violations", std::move(violations)}, {"passed", r.passed()}};
}

Json to_json(const OrderFit& fit) {
    return {{"order", to_string(fit.order)},
            {"slope", std::isfinite(fit.slope) ? Json(fit.slope) : Json(nullptr)},
            {"points", fit.points}};
}

Json to_json(const InputSpec& input) {
    if (input.bernoulli) return {{"n", input.n}, {"bernoulli", *input.bernoulli}};
    std::string bits;
    for (auto b : input.bits) bits += b ? '1' : '0';
    return {{"bits", std::move(bits)}};
}

Json to_json(const LevelConfig& c) {
    return {{"widths", c.widths}, {"input", to_json(c.input)}, {"seed", c.seed}, {"trials", c.trials},
            {"threads", c.threads}};
}

Json to_json(const StreamConfig& c) {
    return {{"input", to_json(c.input)}, {"k", c.k},           {"alpha", c.alpha},
            {"seed", c.seed},            {"trials", c.trials}, {"threads", c.threads},
            {"stride", c.stride},        {"check_ledger", c.check_ledger}};
}

Json to_json(const PhaseRow& r) {
    return {{"phase", r.phase},   {"step_start", r.step_start},     {"step_end", r.step_end},
            {"x_start", r.x_start}, {"x_end", r.x_end},             {"eps_start", r.eps_start},
            {"factor", r.factor}, {"factor_sigma", r.factor_sigma}, {"bound", r.bound},
            {"consistent", r.consistent}};
}

Json to_json(const WidthScalingTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"gamma", r.gamma},
                        {"epsilon", r.epsilon},
                        {"min_width", r.min_width},
                        {"accuracy", r.accuracy},
                        {"predictor", r.predictor}});
    return {{"rows", std::move(rows)},
            {"slope", t.slope},
            {"intercept", t.intercept},
            {"passed", t.passed},
            {"verdict", t.verdict}};
}

Json to_json(const HalfProgressReport& r) {
    return {{"samples", r.samples},   {"violations", r.violations}, {"observed_rate", r.observed_rate},
            {"bound", r.bound},       {"sigma", r.sigma},           {"passed", r.passed}};
}

Json to_json(const LearnedTree& tree) {
    Json levels = Json::array();
    for (const auto& level : tree.levels) {
        Json items = Json::array();
        for (const auto& item : level)
            items.push_back({{"block", item.block == Block::T1 ? "T1" : "T2"}, {"leaves", item.leaves}});
        levels.push_back(std::move(items));
    }
    return {{"n", tree.n}, {"seed", tree.seed}, {"example_ones", tree.example_ones}, {"levels", std::move(levels)}};
}

TreeDistribution distribution_from_json(const Json& j) {
    const Json& entries = field(j, "entries");
    if (!entries.is_array() || entries.empty()) throw ConfigError("field 'entries' must be a nonempty array");
    std::vector<WeightedTree> out;
    for (const auto& e : entries) out.push_back({tree_field(e, "tree"), number(e, "weight")});
    std::string label = j.contains("label") ? text(j, "label") : "distribution";
    try {
        return TreeDistribution(std::move(label), std::move(out));
    } catch (const WeightError& e) {
        throw ConfigError(std::string("field 'entries': ") + e.what());
    }
}

LearnedTree learned_from_json(const Json& j) {
    LearnedTree tree;
    tree.n = integer<std::size_t>(j, "n");
    tree.seed = integer_or<std::uint64_t>(j, "seed", 0);
    tree.example_ones = integer_or<std::size_t>(j, "example_ones", 0);
    const Json& levels = field(j, "levels");
    if (!levels.is_array()) throw ConfigError("field 'levels' must be an array");
    for (const auto& level : levels) {
        if (!level.is_array()) throw ConfigError("field 'levels' must hold arrays of items");
        auto& out = tree.levels.emplace_back();
        for (const auto& item : level) {
            std::string block = text(item, "block");
            if (block != "T1" && block != "T2") throw ConfigError("field 'block' must be T1 or T2");
            const Json& leaves = field(item, "leaves");
            if (!leaves.is_array() || leaves.size() != 3) throw ConfigError("field 'leaves' must hold 3 indices");
            LearnedItem li{block == "T1" ? Block::T1 : Block::T2, {}};
            for (std::size_t i = 0; i < 3; ++i) {
                if (!leaves[i].is_number_unsigned()) throw ConfigError("field 'leaves' must hold nonnegative integers");
                li.leaves[i] = leaves[i].get<std::uint32_t>();
            }
            out.push_back(li);
        }
    }
    try {
        tree.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("field 'levels': ") + e.what());
    }
    return tree;
}

std::vector<std::uint8_t> bits_from_json(const Json& j, const std::string& key) {
    std::vector<std::uint8_t> out;
    if (j.is_string()) {
        for (char c : j.get<std::string>()) {
            if (c == '0' || c == '1')
                out.push_back(static_cast<std::uint8_t>(c - '0'));
            else if (!std::isspace(static_cast<unsigned char>(c)) && c != ',')
                throw ConfigError("field '" + key + "' must contain only 0 and 1");
        }
        return out;
    }
    if (j.is_array()) {
        for (const auto& b : j) {
            if (!b.is_number_integer() || (b.get<long long>() != 0 && b.get<long long>() != 1))
                throw ConfigError("field '" + key + "' must contain only 0 and 1");
            out.push_back(static_cast<std::uint8_t>(b.get<int>()));
        }
        return out;
    }
    throw ConfigError("field '" + key + "' must be a bit string or an array of bits");
}

InputSpec input_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("field 'input' must be an object");
    if (j.contains("bits")) return InputSpec::explicit_bits(bits_from_json(j["bits"], "bits"));
    auto n = integer<std::size_t>(j, "n");
    try {
        if (j.contains("bernoulli")) return InputSpec::bernoulli_p(n, number(j, "bernoulli"));
        return InputSpec::with_fraction(n, number(j, "fraction"));
    } catch (const RangeError& e) {
        throw ConfigError(std::string("field 'input': ") + e.what());
    }
}

LevelConfig level_config_from_json(const Json& j) {
    LevelConfig c;
    if (j.contains("widths")) {
        for (double w : numbers(j, "widths")) {
            if (w < 1 || w != std::floor(w)) throw ConfigError("field 'widths' must hold positive integers");
            c.widths.push_back(static_cast<std::size_t>(w));
        }
    } else {
        c.widths = LevelConfig::constant_width(integer<std::size_t>(j, "width"), integer<std::size_t>(j, "levels"));
    }
    c.input = input_from_json(field(j, "input"));
    c.seed = integer_or<std::uint64_t>(j, "seed", 0);
    c.trials = integer_or<std::size_t>(j, "trials", 1);
    c.threads = integer_or<unsigned>(j, "threads", 1);
    return c;
}

StreamConfig stream_config_from_json(const Json& j) {
    StreamConfig c;
    c.input = input_from_json(field(j, "input"));
    c.k = integer<std::size_t>(j, "k");
    c.alpha = number_or(j, "alpha", 0.0);
    c.seed = integer_or<std::uint64_t>(j, "seed", 0);
    c.trials = integer_or<std::size_t>(j, "trials", 1);
    c.threads = integer_or<unsigned>(j, "threads", 1);
    c.stride = integer_or<std::size_t>(j, "stride", 0);
    if (j.contains("check_ledger")) {
        if (!j["check_ledger"].is_boolean()) throw ConfigError("field 'check_ledger' must be a boolean");
        c.check_ledger = j["check_ledger"].get<bool>();
    }
    return c;
}

TreeDistribution build_construction(const Json& spec) {
    if (spec.is_string()) return build_construction(Json{{"name", spec}});
    const std::string name = text(spec, "name");
    if (name == "valiant") return valiant();
    if (name == "linear") return linear_threshold(number(spec, "t"));
    if (name == "quad4") return quad4(number(spec, "t"));
    if (name == "quad5") return quad5(number(spec, "t"));
    if (name == "quad6") return quad6(number(spec, "t"));
    if (name == "quad7") return quad7(number(spec, "t"));
    if (name == "quad_k") return quad_k(number(spec, "t"));
    if (name == "one_step") return one_step(number(spec, "alpha"));
    if (name == "soft_threshold") return soft_threshold(integer<int>(spec, "k"));
    if (name == "staircase") {
        StaircaseSpec s{numbers(spec, "breakpoints"), numbers(spec, "heights"), number(spec, "epsilon"),
                        number(spec, "delta")};
        return staircase(s, integer_or<std::uint64_t>(spec, "leaf_cap", kDefaultLeafCap));
    }
    if (name == "dense") {
        double t = number(spec, "t");
        auto r = dense_fixed_point(t, number(spec, "epsilon"),
                                   integer_or<std::uint64_t>(spec, "leaf_cap", kDefaultLeafCap));
        std::ostringstream label;
        label << "dense(" << t << ")";
        return TreeDistribution(label.str(), {{r.tree, 1.0}});
    }
    if (name == "amplifier") {
        AndOrTree base = tree_field(spec, "tree");
        double anchor = spec.contains("t") ? number(spec, "t") : interior_fixed_point(base);
        auto r = amplifier(base, anchor, number(spec, "delta"), number(spec, "epsilon"),
                           integer_or<std::uint64_t>(spec, "leaf_cap", kDefaultLeafCap));
        return TreeDistribution("amplifier^" + std::to_string(r.k), {{r.tree, 1.0}});
    }
    if (name == "tree") return TreeDistribution(spec.value("label", std::string("tree")), {{tree_field(spec, "sexpr"), 1.0}});
    if (name == "distribution") return distribution_from_json(spec);
    if (name == "complement") return build_construction(field(spec, "of")).complement();
    throw ConfigError("unknown construction name '" + name + "'");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace amptree
