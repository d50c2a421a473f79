// amptree: command line front end for the AND/OR tree library.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "amptree/io.hpp"

using namespace amptree;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kRuntime = 3 };

struct Globals {
    std::string config_path;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

struct ConstructionFlags {
    std::string name;
    std::optional<double> t, alpha, epsilon, delta;
    std::optional<int> k;
    std::string tree;

    void add(CLI::App* app) {
        app->add_option("--construction", name, "catalog name (valiant, linear, quad4, quad_k, ...)");
        app->add_option("--t", t, "threshold parameter");
        app->add_option("--k", k, "integer parameter (soft_threshold)");
        app->add_option("--alpha", alpha, "weight parameter (one_step)");
        app->add_option("--epsilon", epsilon, "epsilon parameter (dense, staircase, amplifier)");
        app->add_option("--delta", delta, "delta parameter (staircase, amplifier)");
        app->add_option("--tree", tree, "s-expression for the tree and amplifier constructions");
    }

    void apply(Json& cfg) const {
        if (!name.empty()) cfg["construction"] = Json{{"name", name}};
        if (!cfg.contains("construction")) {
            if (!(t || k || alpha || epsilon || delta || !tree.empty())) return;
            throw ConfigError("missing field 'construction'");
        }
        Json& c = cfg["construction"];
        if (c.is_string()) c = Json{{"name", c.get<std::string>()}};
        if (t) c["t"] = *t;
        if (k) c["k"] = *k;
        if (alpha) c["alpha"] = *alpha;
        if (epsilon) c["epsilon"] = *epsilon;
        if (delta) c["delta"] = *delta;
        if (!tree.empty()) c[c.value("name", "") == "tree" ? "sexpr" : "tree"] = tree;
    }
};

Json load_config(const Globals& g) {
    Json cfg = g.config_path.empty() ? Json::object() : read_json_file(g.config_path);
    if (!cfg.is_object()) throw ConfigError(g.config_path + ": config must be a JSON object");
    if (g.seed) cfg["seed"] = *g.seed;
    if (g.threads) cfg["threads"] = *g.threads;
    if (!g.out.empty()) cfg["out"] = g.out;
    if (!g.format.empty()) cfg["format"] = g.format;
    return cfg;
}

std::string format_of(const Json& cfg, const std::string& fallback) {
    std::string f = cfg.value("format", fallback);
    if (f != "csv" && f != "json") throw ConfigError("field 'format' must be csv or json");
    return f;
}

void emit(const Json& cfg, const std::string& body) {
    std::string path = cfg.value("out", "");
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << body;
    if (!f) throw std::runtime_error("write failed for " + path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

TreeDistribution construction_of(const Json& cfg) {
    if (!cfg.contains("construction")) throw ConfigError("missing field 'construction'");
    return build_construction(cfg["construction"]);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A bit file is either JSON ("0101", [0,1,..] or {"bits": ...}) or plain 0/1 text.
std::vector<std::uint8_t> read_bits_file(const std::string& path) {
    std::string body = read_text_file(path);
    auto first = body.find_first_not_of(" \t\r\n");
    bool structured = first != std::string::npos && std::string_view("[{\"").find(body[first]) != std::string_view::npos;
    Json j = structured ? Json::parse(body, nullptr, false) : Json(body);
    if (j.is_discarded()) throw ConfigError(path + ": malformed JSON");
    if (j.is_object()) {
        if (!j.contains("bits")) throw ConfigError(path + ": missing field 'bits'");
        j = j["bits"];
    }
    auto bits = bits_from_json(j, path);
    if (bits.empty()) throw ConfigError(path + ": no bits found");
    return bits;
}

int cmd_enumerate(const Json& cfg) {
    int max_degree = cfg.value("max_degree", 5);
    auto rows = enumerate_achievable(max_degree);
    if (format_of(cfg, "csv") == "csv") {
        std::ostringstream os;
        os << "degree,coefficients,witness\n";
        for (const auto& r : rows) {
            os << r.poly.degree() << ",\"";
            for (std::size_t i = 0; i < r.poly.coeffs.size(); ++i) os << (i ? " " : "") << r.poly.coeffs[i];
            os << "\"," << to_sexpr(r.witness) << '\n';
        }
        emit(cfg, os.str());
        return kOk;
    }
    Json out = Json::array();
    for (const auto& r : rows)
        out.push_back({{"degree", r.poly.degree()}, {"coefficients", to_json(r.poly)}, {"witness", to_sexpr(r.witness)}});
    emit(cfg, dump({{"max_degree", max_degree}, {"count", rows.size()}, {"polynomials", out}}));
    return kOk;
}

int cmd_analyze(const Json& cfg) {
    auto dist = construction_of(cfg);
    auto fps = fixed_points(dist);
    int status = kOk;
    std::optional<ConditionReport> cond;
    if (cfg.contains("conditions")) {
        const Json& c = cfg["conditions"];
        auto get = [&](const char* key) {
            if (!c.contains(key) || !c[key].is_number()) throw ConfigError(std::string("missing field 'conditions.") + key + "'");
            return c[key].get<double>();
        };
        cond = verify_conditions(dist, get("t"), get("u"), get("v"), c.value("margin", 1e-4));
        if (!cond->passed()) status = kCheckFailed;
        if (c.contains("max_c3") && cond->c3 > c["max_c3"].get<double>()) status = kCheckFailed;
        if (c.contains("max_c4") && cond->c4 > c["max_c4"].get<double>()) status = kCheckFailed;
    }
    if (format_of(cfg, "json") == "csv") {
        std::ostringstream os;
        os << std::setprecision(17) << "location,derivative,class\n";
        for (const auto& fp : fps.points) os << fp.location << ',' << fp.derivative << ',' << to_string(fp.cls) << '\n';
        emit(cfg, os.str());
        return status;
    }
    Json out{{"construction", cfg["construction"]},
             {"distribution", to_json(dist)},
             {"max_leaves", dist.max_leaves()},
             {"fixed_points", to_json(fps)},
             {"interior_count", fps.interior().size()}};
    if (cond) out["conditions"] = to_json(*cond);
    out["status"] = status == kOk ? "ok" : "check_failed";
    emit(cfg, dump(out));
    return status;
}

int cmd_iterate(const Json& cfg) {
    auto dist = construction_of(cfg);
    if (!cfg.contains("p") || !cfg["p"].is_number()) throw ConfigError("missing field 'p'");
    auto prof = profile(dist, cfg["p"].get<double>(), cfg.value("levels", 60));
    if (format_of(cfg, "csv") == "csv") {
        std::ostringstream os;
        write_profile_csv(os, prof);
        emit(cfg, os.str());
        return kOk;
    }
    emit(cfg, dump({{"construction", cfg["construction"]},
                    {"p", prof.p},
                    {"t", std::isfinite(prof.t) ? Json(prof.t) : Json(nullptr)},
                    {"limit", prof.limit},
                    {"iterates", prof.iterates},
                    {"errors", prof.errors},
                    {"order", to_json(prof.order_fit())}}));
    return kOk;
}

int cmd_simulate(const Json& cfg) {
    auto dist = construction_of(cfg);
    std::string mode = cfg.value("mode", "leveled");
    std::string fmt = format_of(cfg, "csv");
    if (mode == "leveled" || mode == "counts") {
        LevelConfig lc = level_config_from_json(cfg);
        auto trace = mode == "leveled" ? simulate_leveled(dist, lc) : simulate_leveled_counts(dist, lc);
        if (fmt == "csv") {
            std::ostringstream os;
            write_trace_csv(os, trace);
            emit(cfg, os.str());
            return kOk;
        }
        std::vector<double> means(trace.fractions.empty() ? 0 : trace.fractions[0].size(), 0.0);
        for (const auto& tr : trace.fractions)
            for (std::size_t l = 0; l < tr.size(); ++l) means[l] += tr[l] / static_cast<double>(trace.fractions.size());
        emit(cfg, dump({{"mode", mode},
                        {"construction", cfg["construction"]},
                        {"config", to_json(lc)},
                        {"level_means", means},
                        {"final_fraction_mean", trace.final_fraction_mean()},
                        {"final_firing_rate", trace.final_firing_rate()}}));
        return kOk;
    }
    if (mode != "stream") throw ConfigError("field 'mode' must be leveled, counts or stream");
    StreamConfig sc = stream_config_from_json(cfg);
    auto trace = simulate_stream(dist, sc);
    int status = kOk;
    if (sc.check_ledger && trace.ledger_max_error > 1e-9) status = kCheckFailed;
    if (fmt == "csv") {
        std::ostringstream os;
        write_stream_csv(os, trace);
        emit(cfg, os.str());
        return status;
    }
    Json out{{"mode", mode},
             {"construction", cfg["construction"]},
             {"config", to_json(sc)},
             {"final_one_rate", trace.final_accuracy(true)},
             {"renormalizations", trace.renormalizations}};
    if (sc.check_ledger) out["ledger_max_error"] = trace.ledger_max_error;
    if (cfg.contains("threshold")) {
        double t = cfg["threshold"].get<double>();
        Json phases = Json::array();
        for (const auto& row : phase_progress_report(trace, t)) phases.push_back(to_json(row));
        out["phases"] = std::move(phases);
    }
    out["status"] = status == kOk ? "ok" : "check_failed";
    emit(cfg, dump(out));
    return status;
}

int cmd_learn(const Json& cfg) {
    if (!cfg.contains("examples")) throw ConfigError("missing field 'examples'");
    auto x = read_bits_file(cfg["examples"].get<std::string>());
    if (!cfg.contains("levels") || !cfg.contains("width")) throw ConfigError("missing field 'levels' or 'width'");
    auto tree = learn_threshold(cfg["levels"].get<std::size_t>(), cfg["width"].get<std::size_t>(), x,
                                cfg.value("seed", std::uint64_t{0}));
    emit(cfg, to_json(tree).dump() + "\n");
    return kOk;
}

int cmd_eval(const Json& cfg) {
    if (!cfg.contains("learned")) throw ConfigError("missing field 'learned'");
    if (!cfg.contains("input")) throw ConfigError("missing field 'input'");
    std::string learned_path = cfg["learned"].get<std::string>();
    auto tree = learned_from_json(read_json_file(learned_path));
    auto input = read_bits_file(cfg["input"].get<std::string>());
    std::size_t sample = cfg.value("sample", std::size_t{0});
    if (format_of(cfg, "json") == "csv") {
        std::ostringstream os;
        os << std::setprecision(17) << "level,fraction\n";
        auto trace = learned_trace(tree, input);
        for (std::size_t l = 0; l < trace.size(); ++l) os << l << ',' << trace[l] << '\n';
        emit(cfg, os.str());
        return kOk;
    }
    emit(cfg, dump({{"n", tree.n},
                    {"levels", tree.levels.size()},
                    {"sample", sample},
                    {"fraction", evaluate_learned(tree, input, sample)},
                    {"trace", learned_trace(tree, input)}}));
    return kOk;
}

std::string error_kind(const Error& e) {
    if (dynamic_cast<const InputShapeError*>(&e)) return "input_shape";
    if (dynamic_cast<const CapacityError*>(&e)) return "capacity";
    if (dynamic_cast<const DegenerateInputError*>(&e)) return "degenerate_input";
    if (dynamic_cast<const UnsupportedThresholdError*>(&e)) return "unsupported_threshold";
    if (dynamic_cast<const RangeError*>(&e)) return "range";
    if (dynamic_cast<const WeightError*>(&e)) return "weight";
    if (dynamic_cast<const InconsistentFixedPointError*>(&e)) return "inconsistent_fixed_point";
    if (dynamic_cast<const InvalidStaircaseError*>(&e)) return "invalid_staircase";
    return "runtime";
}

void report_failure(const std::string& kind, const std::string& message) {
    std::cerr << Json{{"status", "error"}, {"error", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"AND/OR tree threshold constructions"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output path (default stdout)");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "root seed");
    app.add_option("--threads", g.threads, "worker thread cap");
    app.fallthrough();

    std::optional<int> max_degree;
    auto* en = app.add_subcommand("enumerate", "table of achievable polynomials");
    en->add_option("--max-degree", max_degree, "largest degree (<= 7)");

    ConstructionFlags an_c, it_c, sim_c;
    auto* an = app.add_subcommand("analyze", "fixed points and condition certificates");
    an_c.add(an);
    std::optional<double> cu, cv, ct;
    an->add_option("--u", cu, "lower corridor end for the condition check");
    an->add_option("--v", cv, "upper corridor end for the condition check");
    an->add_option("--check-t", ct, "threshold for the condition check (default --t)");

    auto* it = app.add_subcommand("iterate", "infinite-width iteration profile");
    it_c.add(it);
    std::optional<double> it_p;
    std::optional<int> it_levels;
    it->add_option("--p", it_p, "starting probability");
    it->add_option("--levels", it_levels, "number of levels");

    auto* sim = app.add_subcommand("simulate", "finite-width or streaming simulation");
    sim_c.add(sim);
    std::string mode;
    std::optional<std::size_t> n, width, levels, trials, items, stride;
    std::optional<double> fraction, bernoulli, decay, threshold;
    bool ledger = false;
    sim->add_option("--mode", mode, "leveled, counts or stream")->check(CLI::IsMember({"leveled", "counts", "stream"}));
    sim->add_option("--n", n, "input size");
    sim->add_option("--fraction", fraction, "exact fraction of firing inputs");
    sim->add_option("--bernoulli", bernoulli, "fresh Bernoulli(p) inputs per trial");
    sim->add_option("--width", width, "level width");
    sim->add_option("--levels", levels, "number of levels");
    sim->add_option("--trials", trials, "independent trials");
    sim->add_option("--items", items, "items to create in stream mode");
    sim->add_option("--decay", decay, "stream decay rate, 0 for the wild construction");
    sim->add_option("--stride", stride, "extra stream recording stride");
    sim->add_option("--threshold", threshold, "threshold for the stream phase report");
    sim->add_flag("--check-ledger", ledger, "recheck the stream weight ledger");

    auto* le = app.add_subcommand("learn", "learn a threshold from one example");
    std::string examples;
    std::optional<std::size_t> le_levels, le_width;
    le->add_option("--examples", examples, "file holding the example bits");
    le->add_option("--levels", le_levels, "number of levels");
    le->add_option("--width", le_width, "level width");

    auto* ev = app.add_subcommand("eval", "evaluate a learned tree");
    std::string learned, input;
    std::optional<std::size_t> sample;
    ev->add_option("--learned", learned, "learned tree JSON");
    ev->add_option("--input", input, "file holding the input bits");
    ev->add_option("--sample", sample, "top-level items to read, 0 for all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        report_failure("usage", e.what());
        return kUsage;
    }

    try {
        Json cfg = load_config(g);
        if (en->parsed()) {
            if (max_degree) cfg["max_degree"] = *max_degree;
            return cmd_enumerate(cfg);
        }
        if (an->parsed()) {
            an_c.apply(cfg);
            if (cu || cv || ct) {
                Json& c = cfg["conditions"];
                if (cu) c["u"] = *cu;
                if (cv) c["v"] = *cv;
                if (ct) c["t"] = *ct;
            }
            if (cfg.contains("conditions") && !cfg["conditions"].contains("t") && cfg.contains("construction") &&
                cfg["construction"].contains("t"))
                cfg["conditions"]["t"] = cfg["construction"]["t"];
            return cmd_analyze(cfg);
        }
        if (it->parsed()) {
            it_c.apply(cfg);
            if (it_p) cfg["p"] = *it_p;
            if (it_levels) cfg["levels"] = *it_levels;
            return cmd_iterate(cfg);
        }
        if (sim->parsed()) {
            sim_c.apply(cfg);
            if (!mode.empty()) cfg["mode"] = mode;
            if (n || fraction || bernoulli) {
                Json& in = cfg["input"];
                if (!in.is_object()) in = Json::object();
                if (n) in["n"] = *n;
                if (fraction) {
                    in.erase("bernoulli");
                    in["fraction"] = *fraction;
                }
                if (bernoulli) {
                    in.erase("fraction");
                    in["bernoulli"] = *bernoulli;
                }
            }
            if (width) cfg["width"] = *width;
            if (levels) cfg["levels"] = *levels;
            if (width || levels) cfg.erase("widths");
            if (trials) cfg["trials"] = *trials;
            if (items) cfg["k"] = *items;
            if (decay) cfg["alpha"] = *decay;
            if (stride) cfg["stride"] = *stride;
            if (threshold) cfg["threshold"] = *threshold;
            if (ledger) cfg["check_ledger"] = true;
            return cmd_simulate(cfg);
        }
        if (le->parsed()) {
            if (!examples.empty()) cfg["examples"] = examples;
            if (le_levels) cfg["levels"] = *le_levels;
            if (le_width) cfg["width"] = *le_width;
            return cmd_learn(cfg);
        }
        if (ev->parsed()) {
            if (!learned.empty()) cfg["learned"] = learned;
            if (!input.empty()) cfg["input"] = input;
            if (sample) cfg["sample"] = *sample;
            return cmd_eval(cfg);
        }
    } catch (const ConfigError& e) {
        report_failure("config", e.what());
        return kUsage;
    } catch (const Json::exception& e) {
        report_failure("config", e.what());
        return kUsage;
    } catch (const Error& e) {
        report_failure(error_kind(e), e.what());
        return kRuntime;
    } catch (const std::exception& e) {
        report_failure("runtime", e.what());
        return kRuntime;
    }
    return kUsage;
}
