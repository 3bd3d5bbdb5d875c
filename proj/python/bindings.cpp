#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "llcent/cli_io.hpp"

namespace py = pybind11;
using namespace llcent;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact algebraic entropy of banded operators on locally linearly compact spaces";

    static py::exception<Error> error_type(m, "LlcentError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = std::string(error_code_name(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::enum_<ShiftDirection>(m, "ShiftDirection").value("Left", ShiftDirection::Left).value("Right", ShiftDirection::Right);
    py::enum_<EngineChoice>(m, "EngineChoice")
        .value("Trajectory", EngineChoice::Trajectory)
        .value("LimitFree", EngineChoice::LimitFree)
        .value("Both", EngineChoice::Both);
    py::enum_<EntropyStatus>(m, "EntropyStatus")
        .value("Exact", EntropyStatus::Exact)
        .value("PlateauDetected", EntropyStatus::PlateauDetected)
        .value("LowerBound", EntropyStatus::LowerBound);
    py::enum_<Verdict>(m, "Verdict")
        .value("Verified", Verdict::Verified)
        .value("Violated", Verdict::Violated)
        .value("Inconclusive", Verdict::Inconclusive);

    py::class_<FieldSpec>(m, "FieldSpec")
        .def_static("prime", &FieldSpec::prime)
        .def_static("rationals", &FieldSpec::rationals)
        .def_static("parse", &FieldSpec::parse)
        .def_property_readonly("is_finite", &FieldSpec::is_finite)
        .def_property_readonly("characteristic", &FieldSpec::characteristic)
        .def(py::self == py::self)
        .def("__str__", &FieldSpec::to_string)
        .def("__repr__", [](const FieldSpec& f) { return "FieldSpec(" + f.to_string() + ")"; });

    py::class_<DimensionProfile>(m, "DimensionProfile")
        .def(py::init<const FieldSpec&, std::size_t, int, std::vector<std::size_t>, std::size_t>(), py::arg("field"),
             py::arg("d_left"), py::arg("n_left"), py::arg("boundary"), py::arg("d_right"))
        .def_static("constant", &DimensionProfile::constant)
        .def_static("discrete", &DimensionProfile::discrete)
        .def_static("compact", &DimensionProfile::compact)
        .def_property_readonly("field", &DimensionProfile::field)
        .def_property_readonly("d_left", &DimensionProfile::d_left)
        .def_property_readonly("d_right", &DimensionProfile::d_right)
        .def_property_readonly("n_left", &DimensionProfile::n_left)
        .def_property_readonly("n_right", &DimensionProfile::n_right)
        .def("dim", &DimensionProfile::dim)
        .def(py::self == py::self)
        .def("__repr__", &DimensionProfile::describe);

    py::class_<BandedOperator>(m, "BandedOperator")
        .def_static("identity", &BandedOperator::identity)
        .def_static("zero", &BandedOperator::zero)
        .def_property_readonly("profile", &BandedOperator::profile)
        .def_property_readonly("width", &BandedOperator::width)
        .def(py::self == py::self);
    m.def("make_shift", &make_shift, py::arg("profile"), py::arg("direction"));
    m.def("compose", &compose, "f after g", py::arg("f"), py::arg("g"));
    m.def("power", &power, py::arg("op"), py::arg("k"));
    m.def("verify_inverse", &verify_inverse, py::arg("f"), py::arg("g"));
    m.def("direct_sum", &direct_sum, py::arg("op1"), py::arg("op2"));

    py::class_<CompactOpenSubspace>(m, "CompactOpenSubspace")
        .def_static("tail", &CompactOpenSubspace::tail)
        .def_property_readonly("tail_cut", &CompactOpenSubspace::tail_cut)
        .def_property_readonly("window_top", &CompactOpenSubspace::window_top)
        .def(py::self == py::self)
        .def("__repr__", &CompactOpenSubspace::describe);
    m.def("cofinal_chain", &cofinal_chain, py::arg("profile"), py::arg("m"));
    m.def("open_quotient_dim", &open_quotient_dim, py::arg("big"), py::arg("small"));

    py::class_<BlockwisePattern>(m, "BlockwisePattern")
        .def_static("full", &BlockwisePattern::full)
        .def_static("zero", &BlockwisePattern::zero)
        .def_static("slots", &BlockwisePattern::slots);

    py::class_<EntropyConfig>(m, "EntropyConfig")
        .def(py::init<>())
        .def_readwrite("plateau_streak", &EntropyConfig::plateau_streak)
        .def_readwrite("max_trajectory_steps", &EntropyConfig::max_trajectory_steps)
        .def_readwrite("max_chain_index", &EntropyConfig::max_chain_index)
        .def_readwrite("strict", &EntropyConfig::strict);

    py::class_<EntropyResult>(m, "EntropyResult")
        .def_readonly("value", &EntropyResult::value)
        .def_readonly("status", &EntropyResult::status)
        .def_readonly("certificate", &EntropyResult::certificate)
        .def_readonly("witness", &EntropyResult::witness)
        .def_readonly("iterations", &EntropyResult::iterations)
        .def("__repr__", [](const EntropyResult& r) {
            return "EntropyResult(value=" + std::to_string(r.value) + ", status=" + std::string(status_name(r.status)) +
                   ")";
        });

    py::class_<AlgebraicEntropy>(m, "AlgebraicEntropy")
        .def_readonly("value", &AlgebraicEntropy::value)
        .def_readonly("ent", &AlgebraicEntropy::ent)
        .def_readonly("characteristic", &AlgebraicEntropy::characteristic)
        .def_readonly("symbolic", &AlgebraicEntropy::symbolic)
        .def_readonly("decimal", &AlgebraicEntropy::decimal);

    const EntropyConfig defaults;
    m.def("total_entropy",
          py::overload_cast<const BandedOperator&, const EntropyConfig&, const std::optional<BandedOperator>&>(
              &total_entropy),
          py::arg("op"), py::arg("config") = defaults, py::arg("inverse") = std::nullopt);
    m.def("total_entropy",
          py::overload_cast<const BandedOperator&, const EntropyConfig&, EngineChoice,
                            const std::optional<BandedOperator>&>(&total_entropy),
          py::arg("op"), py::arg("config"), py::arg("engine"), py::arg("inverse") = std::nullopt);
    m.def("relative_entropy", &relative_entropy, py::arg("op"), py::arg("subspace"), py::arg("config") = defaults,
          py::arg("engine") = EngineChoice::Trajectory, py::arg("inverse") = std::nullopt);
    m.def("shift_closed_form", &shift_closed_form, py::arg("profile"), py::arg("direction"), py::arg("k") = 1);
    m.def("ent_dim_discrete", &ent_dim_discrete, py::arg("op"), py::arg("f"), py::arg("config") = defaults);
    m.def("h_alg_value", &h_alg_value, py::arg("result"), py::arg("field"));

    py::class_<PropertyReport>(m, "PropertyReport")
        .def_readonly("property", &PropertyReport::property)
        .def_readonly("inputs", &PropertyReport::inputs)
        .def_readonly("side_checks", &PropertyReport::side_checks)
        .def_readonly("verdict", &PropertyReport::verdict)
        .def_readonly("witness", &PropertyReport::witness)
        .def_property_readonly("values", [](const PropertyReport& r) {
            std::vector<std::pair<std::size_t, std::size_t>> out;
            for (const auto& c : r.comparisons) {
                out.emplace_back(c.lhs_value(), c.rhs_value());
            }
            return out;
        });
    m.def("check_addition", &check_addition, py::arg("op"), py::arg("pattern"), py::arg("config") = defaults,
          py::arg("inverse") = std::nullopt);
    m.def("check_log_law", &check_log_law, py::arg("op"), py::arg("k"), py::arg("config") = defaults,
          py::arg("inverse") = std::nullopt);
    m.def("check_conjugation", &check_conjugation, py::arg("op"), py::arg("a"), py::arg("a_inverse"),
          py::arg("config") = defaults, py::arg("inverse") = std::nullopt);
    m.def("check_weak_addition", &check_weak_addition, py::arg("op1"), py::arg("op2"), py::arg("config") = defaults,
          py::arg("inverse1") = std::nullopt, py::arg("inverse2") = std::nullopt);
    m.def("check_engine_agreement", &check_engine_agreement, py::arg("op"), py::arg("inverse"),
          py::arg("config") = defaults);

    py::class_<CampaignSummary>(m, "CampaignSummary")
        .def_readonly("name", &CampaignSummary::name)
        .def_readonly("seed", &CampaignSummary::seed)
        .def_readonly("instances", &CampaignSummary::instances)
        .def_readonly("verified", &CampaignSummary::verified)
        .def_readonly("violated", &CampaignSummary::violated)
        .def_readonly("inconclusive", &CampaignSummary::inconclusive);
    m.def("run_automorphism_campaign", &run_automorphism_campaign, py::arg("seed"), py::arg("instances"),
          py::arg("config") = defaults);
    m.def("run_addition_campaign", &run_addition_campaign, py::arg("seed"), py::arg("instances"),
          py::arg("config") = defaults);

    py::class_<SpecFile>(m, "SpecFile")
        .def_readonly("profile", &SpecFile::profile)
        .def_readonly("op", &SpecFile::op)
        .def_readonly("inverse", &SpecFile::inverse)
        .def_readonly("subspace", &SpecFile::subspace)
        .def_readonly("config", &SpecFile::config)
        .def(py::self == py::self);
    m.def("parse_spec", &parse_spec, py::arg("text"));
    m.def("serialize_spec", &serialize_spec, py::arg("spec"));
    m.def(
        "run_command",
        [](const std::string& command, const SpecFile& spec, const std::string& check_kind, std::uint64_t seed,
           bool strict) {
            CommandOptions o;
            o.command = command;
            o.check_kind = check_kind;
            o.seed = seed;
            o.strict = strict;
            auto out = run_command(o, spec);
            return py::make_tuple(out.exit_code, out.report, out.diagnostics);
        },
        "Returns (exit_code, json_report, diagnostics).", py::arg("command"), py::arg("spec"),
        py::arg("check_kind") = "", py::arg("seed") = 0, py::arg("strict") = false);

    m.attr("__version__") = kToolVersion;
}
