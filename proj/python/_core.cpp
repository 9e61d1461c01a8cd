#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hamcount/analysis.hpp"
#include "hamcount/digraph.hpp"
#include "hamcount/edge_list.hpp"
#include "hamcount/errors.hpp"
#include "hamcount/exact.hpp"
#include "hamcount/frieze.hpp"
#include "hamcount/harness.hpp"
#include "hamcount/matching.hpp"
#include "hamcount/pipeline.hpp"
#include "hamcount/process.hpp"

namespace py = pybind11;
using namespace hamcount;

namespace {

py::int_ to_py(const BigCount& x) {
    const std::string s = to_decimal(x);
    return py::reinterpret_steal<py::int_>(PyLong_FromString(s.c_str(), nullptr, 10));
}

py::object to_py(const BigRational& q) {
    static py::handle fraction = py::module_::import("fractions").attr("Fraction").cast<py::object>().release();
    return fraction(to_py(BigCount(q.get_num())), to_py(BigCount(q.get_den())));
}

py::object to_py(const nlohmann::json& j) {
    static py::handle loads = py::module_::import("json").attr("loads").cast<py::object>().release();
    return loads(j.dump());
}

nlohmann::json from_py(const py::object& o) {
    static py::handle dumps = py::module_::import("json").attr("dumps").cast<py::object>().release();
    return nlohmann::json::parse(dumps(o).cast<std::string>());
}

std::vector<std::pair<Vertex, Vertex>> edge_pairs(const std::vector<Edge>& edges) {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edges.size());
    for (const Edge& e : edges) out.emplace_back(e.from, e.to);
    return out;
}

Digraph make_digraph(std::uint32_t n, bool loops, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    Digraph d(n, loops);
    for (const auto& [u, v] : edges) d.add_edge(u, v);
    return d;
}

Universe universe_of(bool loops) { return loops ? Universe::kLoopful : Universe::kLoopless; }

py::dict constants_dict(const Constants& c) {
    py::dict d;
    d["n"] = c.n;
    d["m0"] = c.m0;
    d["m1"] = c.m1;
    d["m3"] = c.m3;
    d["large_threshold"] = c.large_threshold;
    d["e1_width"] = c.e1_width;
    d["isolation_distance"] = c.isolation_distance;
    d["short_cycle_len"] = c.short_cycle_len;
    d["degree_window_eps"] = c.degree_window_eps;
    d["good_loop_cap"] = c.good_loop_cap;
    d["good_cycle_cap"] = c.good_cycle_cap;
    d["degree_cap"] = c.degree_cap;
    return d;
}

py::dict tail_dict(const TailBound& b) {
    py::dict d;
    d["value"] = b.value;
    d["log_value"] = b.log_value;
    d["valid"] = b.valid;
    d["threshold"] = b.threshold;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random digraph processes, exact counting and the 1-factor Hamilton cycle search";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);

    py::class_<Digraph>(m, "Digraph")
        .def(py::init(&make_digraph), py::arg("n"), py::arg("allow_loops") = false,
             py::arg("edges") = std::vector<std::pair<Vertex, Vertex>>{})
        .def_property_readonly("n", &Digraph::n)
        .def_property_readonly("allow_loops", &Digraph::allow_loops)
        .def_property_readonly("num_edges", &Digraph::num_edges)
        .def("add_edge", py::overload_cast<Vertex, Vertex>(&Digraph::add_edge))
        .def("has_edge", py::overload_cast<Vertex, Vertex>(&Digraph::has_edge, py::const_))
        .def("edges", [](const Digraph& d) { return edge_pairs(d.edges()); })
        .def("out_neighbors", &Digraph::out, py::return_value_policy::copy)
        .def("in_neighbors", &Digraph::in, py::return_value_policy::copy)
        .def("without_loops", &Digraph::without_loops)
        .def("__len__", &Digraph::num_edges)
        .def("__repr__", [](const Digraph& d) {
            return "<Digraph n=" + std::to_string(d.n()) + " edges=" + std::to_string(d.num_edges()) + ">";
        });

    m.def("gen_binomial", &gen_binomial, py::arg("n"), py::arg("p"), py::arg("loops") = false,
          py::arg("seed") = 0);
    m.def("complete_digraph", &complete_digraph, py::arg("n"), py::arg("loops") = false);

    m.def(
        "gen_process",
        [](std::uint32_t n, bool loops, std::uint64_t seed, std::optional<std::size_t> length) {
            const EdgeSequence s = length ? gen_process_prefix(n, universe_of(loops), seed, *length)
                                          : gen_process(n, universe_of(loops), seed);
            return edge_pairs(s.order());
        },
        py::arg("n"), py::arg("loops") = false, py::arg("seed") = 0, py::arg("length") = py::none(),
        "Edge order of the random process, or its first `length` edges.");
    m.def(
        "process_prefix",
        [](std::uint32_t n, bool loops, std::uint64_t seed, std::size_t m) {
            return gen_process_prefix(n, universe_of(loops), seed, m).prefix(m);
        },
        py::arg("n"), py::arg("loops") = false, py::arg("seed") = 0, py::arg("m") = 0);
    m.def(
        "hitting_time",
        [](std::uint32_t n, std::uint64_t seed) {
            const CoupledProcess cp = sample_coupled_until_hitting(n, seed);
            return std::make_pair(hitting_time(cp.loopless), hitting_time(cp.loopful));
        },
        py::arg("n"), py::arg("seed") = 0,
        "(m*, m*') for the coupled loopless and loopful processes.");

    m.def(
        "count_hamilton_cycles",
        [](const Digraph& d, std::uint32_t cap) { return to_py(count_hamilton_cycles(d, cap)); },
        py::arg("d"), py::arg("cap") = kDefaultExactCap);
    m.def(
        "count_one_factors",
        [](const Digraph& d, std::uint32_t cap) { return to_py(count_one_factors(d, cap)); },
        py::arg("d"), py::arg("cap") = kDefaultExactCap);
    m.def(
        "enumerate_one_factors",
        [](const Digraph& d, std::size_t limit) {
            const FactorEnumeration e = enumerate_one_factors(d, limit);
            std::vector<std::vector<Vertex>> images;
            for (const OneFactor& f : e.factors) images.push_back(f.image());
            return std::make_pair(images, e.truncated);
        },
        py::arg("d"), py::arg("limit") = 1000000);
    m.def(
        "find_one_factor",
        [](const Digraph& d, std::uint64_t seed) -> std::optional<std::vector<Vertex>> {
            const auto f = find_one_factor(d, seed);
            if (!f) return std::nullopt;
            return f->image();
        },
        py::arg("d"), py::arg("seed") = 0);
    m.def("rencontres", [](std::uint32_t n, std::uint32_t k) { return to_py(rencontres(n, k)); });
    m.def("derangements", [](std::uint32_t n) { return to_py(derangements(n)); });

    m.def("compute_constants", [](std::uint32_t n) { return constants_dict(compute_constants(n)); });
    m.def(
        "find_hamilton",
        [](std::uint32_t n, std::uint64_t seed, double c_h, std::size_t relabel_retries,
           std::size_t merge_retries, const std::string& edge_mode, std::size_t rotation_budget,
           std::size_t max_states) {
            PipelineOptions opts;
            opts.c_h = c_h;
            opts.relabel_retries = relabel_retries;
            opts.merge_retries = merge_retries;
            if (edge_mode == "reserved") {
                opts.edge_mode = EdgeMode::kReserved;
            } else if (edge_mode != "full") {
                throw DomainError("edge_mode must be 'full' or 'reserved'");
            }
            opts.close.rotation_budget = rotation_budget;
            opts.close.max_states = max_states;
            HamiltonResult r;
            {
                py::gil_scoped_release release;
                r = run_pipeline(n, seed, opts);
            }
            py::dict d;
            d["success"] = r.success;
            d["cycle"] = r.cycle;
            d["overlap"] = r.overlap;
            d["overlap_bound"] = r.overlap_bound;
            d["phase"] = r.phase;
            d["reason"] = r.reason;
            d["log"] = to_py(r.log);
            return d;
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("c_h") = 10.0, py::arg("relabel_retries") = 25,
        py::arg("merge_retries") = 5, py::arg("edge_mode") = "full", py::arg("rotation_budget") = 0,
        py::arg("max_states") = 4096);

    m.def("chernoff_upper", [](double a, std::uint64_t n, double p) { return tail_dict(chernoff_upper(a, n, p)); });
    m.def("chernoff_two_sided",
          [](double eps, std::uint64_t n, double p) { return tail_dict(chernoff_two_sided(eps, n, p)); });
    m.def("binomial_upper_tail", [](std::uint32_t n, double p, std::int64_t k) {
        return to_py(ExactBinomial(n, p).upper_tail(k));
    });
    m.def("expected_hamilton_binomial",
          [](std::uint32_t n, double p) { return to_py(expected_hamilton_binomial(n, p)); });
    m.def("expected_hamilton_uniform",
          [](std::uint32_t n, std::uint64_t mm) { return to_py(expected_hamilton_uniform(n, mm)); });
    m.def("subsample_ratio", [](std::uint64_t n, std::uint64_t mm, std::uint64_t mp) {
        return to_py(subsample_ratio(n, mm, mp));
    });
    m.def("good_permutation_fraction", [](std::uint32_t n) { return to_py(good_permutation_fraction(n)); });
    m.def("falikman_bound", &falikman_bound);

    m.def("experiment_names", &experiment_names);
    m.def(
        "run_experiment",
        [](const py::object& config) {
            const ExperimentConfig cfg = ExperimentConfig::from_json(from_py(config));
            Report r;
            {
                py::gil_scoped_release release;
                r = run_experiment(cfg);
            }
            return to_py(r.to_json());
        },
        py::arg("config"), "Runs an experiment from a config dict and returns the report dict.");
    m.def(
        "aggregate_trials",
        [](const py::object& config, const py::object& trials) {
            const ExperimentConfig cfg = ExperimentConfig::from_json(from_py(config));
            const nlohmann::json t = from_py(trials);
            return to_py(aggregate_trials(cfg, std::vector<nlohmann::json>(t.begin(), t.end())));
        },
        py::arg("config"), py::arg("trials"));

    m.def(
        "read_edge_list",
        [](const std::string& text, bool one_indexed) {
            std::istringstream in(text);
            return read_edge_list(in, one_indexed);
        },
        py::arg("text"), py::arg("one_indexed") = false);
    m.def(
        "write_edge_list",
        [](const Digraph& d, bool one_indexed) {
            std::ostringstream out;
            write_edge_list(out, d, one_indexed);
            return out.str();
        },
        py::arg("d"), py::arg("one_indexed") = false);
}
