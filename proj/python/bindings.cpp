#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "seqc/codegen.hpp"
#include "seqc/dsl.hpp"
#include "seqc/error.hpp"
#include "seqc/model.hpp"
#include "seqc/program_io.hpp"
#include "seqc/simulator.hpp"
#include "seqc/validator.hpp"

namespace py = pybind11;
using namespace seqc;

PYBIND11_MODULE(_seqc, m) {
    m.doc() = "seqc core bindings; see the seqc package for the Python-facing API";

    static py::exception<Error> error_type(m, "SeqcError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            // args: (message, code, line, subjects)
            py::tuple args = py::make_tuple(e.what(), std::string(to_string(e.code())), e.line(), e.subjects());
            PyErr_SetObject(error_type.ptr(), args.ptr());
        }
    });

    py::class_<RobotClassDsl>(m, "Dsl")
        .def_property_readonly("name", &RobotClassDsl::name)
        .def_property_readonly("components",
                               [](const RobotClassDsl& d) {
                                   std::vector<std::string> out;
                                   for (const auto& c : d.components()) out.push_back(c.type_name);
                                   return out;
                               })
        .def_property_readonly("mutex_pairs", [](const RobotClassDsl& d) {
            return std::vector<MutexPair>(d.mutex_relation().begin(), d.mutex_relation().end());
        });

    py::class_<Program>(m, "Program")
        .def_property_readonly("name", &Program::name)
        .def_property_readonly("robot_class", &Program::robot_class)
        .def_property_readonly("actions",
                               [](const Program& p) {
                                   std::vector<std::string> out;
                                   for (const auto& a : p.actions()) out.push_back(a.name());
                                   return out;
                               })
        .def("__eq__", [](const Program& a, const Program& b) { return a == b; });

    m.def("load_dsl", [](const std::string& text) { return load_dsl(text); }, py::arg("text"));
    m.def("save_dsl", &save_dsl, py::arg("dsl"));
    m.def("parse_program", [](const std::string& text) { return parse_program(text); }, py::arg("text"));
    m.def("load_program", [](const std::string& text, const RobotClassDsl& dsl) { return load_program(text, dsl); },
          py::arg("text"), py::arg("dsl"));
    m.def("save_program", &save_program, py::arg("program"));
    m.def("export_dot", &export_dot, py::arg("program"));
    m.def("topological_order", &topological_order, py::arg("program"));
    m.def("critical_path_length", &critical_path_length, py::arg("program"), py::arg("durations"));

    m.def("validate_json", [](const Program& p, const RobotClassDsl& d) { return validate(p, d).to_json(); },
          py::arg("program"), py::arg("dsl"));
    m.def(
        "simulate_json",
        [](const Program& p, const RobotClassDsl& d, std::map<std::string, Ticks> durations, Ticks fallback,
           bool force) { return simulate(p, d, DurationMap(std::move(durations), fallback), force).to_json(); },
        py::arg("program"), py::arg("dsl"), py::arg("durations"), py::arg("default"), py::arg("force"));
    m.def(
        "generate",
        [](const Program& p, const RobotClassDsl& d, const std::filesystem::path& config,
           const std::vector<std::filesystem::path>& search_roots, bool lenient) {
            auto cfg = load_generator_config_file(config, search_roots);
            auto out = generate(p, d, cfg, lenient ? tmpl::Mode::Lenient : tmpl::Mode::Strict);
            return std::make_pair(out.files, out.warnings);
        },
        py::arg("program"), py::arg("dsl"), py::arg("config"), py::arg("search_roots"), py::arg("lenient"));
}
