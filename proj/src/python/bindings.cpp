#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlcake/io.hpp"

namespace py = pybind11;

namespace {

mlcake::Rational rat(const std::string& s) { return mlcake::Rational::parse(s); }

std::vector<std::vector<std::string>> matrix_strings(const mlcake::ValueMatrix& m) {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : m.entries) {
        std::vector<std::string> cells;
        for (const auto& v : row) cells.push_back(v.str());
        out.push_back(std::move(cells));
    }
    return out;
}

} // namespace

PYBIND11_MODULE(mlcake, m) {
    m.doc() = "Exact protocols for multi-layered cake cutting";

    py::class_<mlcake::Instance>(m, "Instance")
        .def_property_readonly("n", &mlcake::Instance::n)
        .def_property_readonly("m", &mlcake::Instance::m)
        .def("to_json", &mlcake::save_instance);

    py::class_<mlcake::MultiAllocation>(m, "MultiAllocation")
        .def_property_readonly("agents", &mlcake::MultiAllocation::agents);

    py::class_<mlcake::ProtocolResult>(m, "ProtocolResult")
        .def_readonly("allocation", &mlcake::ProtocolResult::allocation)
        .def_property_readonly("certificate", [](const mlcake::ProtocolResult& r) {
            return mlcake::certificate_name(r.certificate);
        });

    py::register_exception<mlcake::validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<mlcake::unsupported_shape_error>(m, "UnsupportedShapeError",
                                                            PyExc_ValueError);

    m.def("load_instance", &mlcake::load_instance, py::arg("json_text"));
    m.def("generate_instance", &mlcake::generate_instance, py::arg("seed"), py::arg("n"),
          py::arg("m"), py::arg("cells") = 3);
    m.def("solve", &mlcake::run_protocol, py::arg("protocol"), py::arg("instance"));
    m.def(
        "allocation_json",
        [](const mlcake::Instance& inst, const mlcake::ProtocolResult& r,
           const std::string& protocol) { return mlcake::save_allocation(inst, r, protocol); },
        py::arg("instance"), py::arg("result"), py::arg("protocol"));
    m.def(
        "fairness_report",
        [](const mlcake::Instance& inst, const mlcake::MultiAllocation& alloc) {
            return mlcake::save_report(mlcake::fairness_report(inst, alloc));
        },
        py::arg("instance"), py::arg("allocation"),
        "JSON fairness report for an allocation");
    m.def(
        "value_matrix",
        [](const mlcake::Instance& inst, const mlcake::MultiAllocation& alloc) {
            return matrix_strings(mlcake::value_matrix(inst, alloc));
        },
        py::arg("instance"), py::arg("allocation"), "V_i(P_j) as rational strings");
    m.def("render_svg", &mlcake::render_svg, py::arg("instance"), py::arg("allocation"));

    m.def(
        "eval_short",
        [](const mlcake::Instance& inst, std::size_t agent, std::size_t layer,
           const std::string& x, const std::string& y) {
            return mlcake::eval_short(inst.agents.at(agent), layer, rat(x), rat(y)).str();
        },
        py::arg("instance"), py::arg("agent"), py::arg("layer"), py::arg("x"), py::arg("y"));
    m.def(
        "cut_short",
        [](const mlcake::Instance& inst, std::size_t agent, std::size_t layer,
           const std::string& x, const std::string& p) {
            return mlcake::cut_short(inst.agents.at(agent), layer, rat(x), rat(p)).str();
        },
        py::arg("instance"), py::arg("agent"), py::arg("layer"), py::arg("x"), py::arg("p"));
    m.def(
        "eval_long",
        [](const mlcake::Instance& inst, std::size_t agent, const std::string& x) {
            return mlcake::eval_long(inst.agents.at(agent), inst.cake, rat(x)).str();
        },
        py::arg("instance"), py::arg("agent"), py::arg("x"));
    m.def(
        "cut_long",
        [](const mlcake::Instance& inst, std::size_t agent, const std::string& p) {
            return mlcake::cut_long(inst.agents.at(agent), inst.cake, rat(p)).str();
        },
        py::arg("instance"), py::arg("agent"), py::arg("p"));
    m.def(
        "switching_point",
        [](const mlcake::Instance& inst, std::size_t agent) {
            return mlcake::switching_point(inst.agents.at(agent), inst.cake).str();
        },
        py::arg("instance"), py::arg("agent"));
}
