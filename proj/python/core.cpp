#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amptree/io.hpp"

namespace py = pybind11;
using namespace amptree;

namespace {

std::vector<std::uint8_t> to_bits(const std::vector<int>& v) {
    std::vector<std::uint8_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0 && v[i] != 1) throw InputShapeError("bits must be 0 or 1");
        out[i] = static_cast<std::uint8_t>(v[i]);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "AND/OR tree threshold constructions";

    auto base = py::register_exception<Error>(m, "AmptreeError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());

    py::class_<TreeDistribution>(m, "Distribution")
        .def_property_readonly("label", &TreeDistribution::label)
        .def("value", &TreeDistribution::value, py::arg("p"))
        .def("slope", &TreeDistribution::slope, py::arg("p"))
        .def("complement", &TreeDistribution::complement)
        .def_property_readonly("max_leaves", &TreeDistribution::max_leaves)
        .def("to_json", [](const TreeDistribution& d) { return to_json(d).dump(); })
        .def("fixed_points", [](const TreeDistribution& d) { return to_json(fixed_points(d)).dump(); })
        .def("iterate", [](const TreeDistribution& d, double p, int k) { return iterate_point(d, p, k); },
             py::arg("p"), py::arg("levels"))
        .def("__repr__", [](const TreeDistribution& d) { return "<Distribution " + d.label() + ">"; });

    m.def("build", [](const std::string& spec) { return build_construction(Json::parse(spec)); }, py::arg("spec"));

    m.def("polynomial", [](const std::string& sexpr) { return tree_polynomial(parse_sexpr(sexpr)).coeffs; },
          py::arg("sexpr"));

    m.def(
        "enumerate",
        [](int max_degree) {
            std::vector<std::tuple<int, std::vector<std::int64_t>, std::string>> out;
            for (const auto& r : enumerate_achievable(max_degree))
                out.emplace_back(r.poly.degree(), r.poly.coeffs, to_sexpr(r.witness));
            return out;
        },
        py::arg("max_degree"));

    m.def(
        "profile",
        [](const TreeDistribution& d, double p, int levels) {
            auto prof = profile(d, p, levels);
            Json j{{"p", prof.p},
                   {"t", std::isnan(prof.t) ? Json(nullptr) : Json(prof.t)},
                   {"limit", prof.limit},
                   {"iterates", prof.iterates},
                   {"errors", prof.errors},
                   {"order", to_json(prof.order_fit())}};
            return j.dump();
        },
        py::arg("dist"), py::arg("p"), py::arg("levels"));

    m.def(
        "verify_conditions",
        [](const TreeDistribution& d, double t, double u, double v) { return to_json(verify_conditions(d, t, u, v)).dump(); },
        py::arg("dist"), py::arg("t"), py::arg("u"), py::arg("v"));

    m.def(
        "simulate_leveled",
        [](const TreeDistribution& d, const std::string& config, bool counts) {
            auto cfg = level_config_from_json(Json::parse(config));
            py::gil_scoped_release release;
            return (counts ? simulate_leveled_counts(d, cfg) : simulate_leveled(d, cfg)).fractions;
        },
        py::arg("dist"), py::arg("config"), py::arg("counts") = false);

    m.def(
        "simulate_stream",
        [](const TreeDistribution& d, const std::string& config) {
            auto cfg = stream_config_from_json(Json::parse(config));
            StreamTrace trace;
            {
                py::gil_scoped_release release;
                trace = simulate_stream(d, cfg);
            }
            std::vector<std::vector<std::pair<std::size_t, double>>> out;
            for (const auto& pts : trace.points) {
                auto& row = out.emplace_back();
                for (const auto& p : pts) row.emplace_back(p.step, p.x);
            }
            return py::make_tuple(out, trace.final_bit);
        },
        py::arg("dist"), py::arg("config"));

    m.def(
        "learn",
        [](const std::vector<int>& example, std::size_t levels, std::size_t width, std::uint64_t seed) {
            return to_json(learn_threshold(levels, width, to_bits(example), seed)).dump();
        },
        py::arg("example"), py::arg("levels"), py::arg("width"), py::arg("seed") = 0);

    m.def(
        "evaluate",
        [](const std::string& learned, const std::vector<int>& input, std::size_t sample) {
            return evaluate_learned(learned_from_json(Json::parse(learned)), to_bits(input), sample);
        },
        py::arg("learned"), py::arg("input"), py::arg("sample") = 0);
}
