#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "roughdiv/divisor_structure.hpp"
#include "roughdiv/errors.hpp"
#include "roughdiv/exact_counters.hpp"
#include "roughdiv/experiment.hpp"
#include "roughdiv/sieve_core.hpp"
#include "roughdiv/theory_formulas.hpp"
#include "roughdiv/volume_mc.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace roughdiv;

PYBIND11_MODULE(_core, m) {
  m.doc() = R"pbdoc(
        roughdiv core
        -------------

        Exact counters, divisor-clustering functionals, order formulas and
        Monte Carlo simplex volumes.
    )pbdoc";

  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
  static py::exception<ResourceError> resource_error(m, "ResourceError", PyExc_MemoryError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      domain_error(e.what());
    } catch (const ResourceError& e) {
      resource_error(e.what());
    }
  });

  // sieve_core
  py::class_<SpfTable>(m, "SpfTable")
      .def_property_readonly("limit", &SpfTable::limit)
      .def("spf", &SpfTable::spf)
      .def("__getitem__", &SpfTable::spf)
      .def("is_prime", &SpfTable::is_prime);
  m.def("build_spf", &build_spf, py::arg("limit"), py::arg("budget") = kDefaultSpfBudget);
  m.def(
      "factorize",
      [](std::uint64_t n, const SpfTable& table) {
        std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
        for (const auto& f : factorize(n, table).factors) out.emplace_back(f.prime, f.exponent);
        return out;
      },
      py::arg("n"), py::arg("table"), "Factorization as a list of (prime, exponent).");
  m.def("is_rough", &is_rough, py::arg("n"), py::arg("w"), py::arg("table"));
  m.def("mertens_sum", &mertens_sum, py::arg("a"), py::arg("b"));
  m.def("primes_in_range", &primes_in_range, py::arg("lo"), py::arg("hi"));

  py::class_<LambdaLadder>(m, "LambdaLadder")
      .def_readonly("lambdas", &LambdaLadder::lambdas)
      .def_readonly("blocks", &LambdaLadder::blocks)
      .def("block_sum", &LambdaLadder::block_sum)
      .def("__len__", &LambdaLadder::size);
  m.def("lambda_ladder", &lambda_ladder, py::arg("limit"));
  m.def("ladder_spread", &ladder_spread);

  // divisor_structure
  m.def("divisors", [](std::uint64_t n) { return divisors(n).divisors; }, py::arg("n"));
  m.def("tau_interval", py::overload_cast<std::uint64_t, double, double>(&tau_interval), py::arg("n"), py::arg("y"),
        py::arg("z"));
  m.def(
      "script_L",
      [](std::uint64_t a) {
        std::vector<std::pair<double, double>> out;
        for (const auto& iv : script_L(a).intervals()) out.emplace_back(iv.lo, iv.hi);
        return out;
      },
      py::arg("a"), "Merged half-open intervals [lo, hi) on the log scale.");
  m.def("L", &L_measure, py::arg("a"));
  m.def("W_star", py::overload_cast<std::uint64_t>(&W_star), py::arg("a"));
  m.def("isolated_divisor_count", py::overload_cast<std::uint64_t>(&isolated_divisor_count), py::arg("a"));

  // exact_counters
  m.def(
      "count_H",
      [](std::uint64_t x, std::uint64_t y, std::uint64_t z, std::uint64_t w, bool squarefree_only) {
        py::gil_scoped_release release;
        return count_H({x, y, z, w, squarefree_only});
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("w") = 1, py::arg("squarefree_only") = false);
  m.def(
      "rough_count", [](std::uint64_t x, std::uint64_t z, bool half) { return rough_count(x, z, half); }, py::arg("x"),
      py::arg("z"), py::arg("half") = false);
  m.def("mult_table_count", &mult_table_count, py::arg("N"), py::arg("w") = 1, py::arg("max_bits") = kDefaultTableBits);
  m.def("farey_product_count", &farey_product_count, py::arg("N"));
  m.def(
      "sum_over_P",
      [](std::uint64_t w, std::uint64_t t, std::optional<std::int64_t> k, const std::string& weight) {
        return sum_over_P({w, t, k, parse_weight(weight)});
      },
      py::arg("w"), py::arg("t"), py::arg("k") = py::none(), py::arg("weight") = "reciprocal");
  m.def(
      "sum_over_Ab",
      [](const BlockVector& b, const LambdaLadder& ladder, const std::string& weight) {
        return sum_over_Ab(b, ladder, parse_weight(weight));
      },
      py::arg("b"), py::arg("ladder"), py::arg("weight") = "reciprocal");

  // theory_formulas
  m.attr("E") = erdos_ford_tenenbaum_constant();
  py::class_<RegimeParams>(m, "RegimeParams")
      .def_readonly("x", &RegimeParams::x)
      .def_readonly("y", &RegimeParams::y)
      .def_readonly("w", &RegimeParams::w)
      .def_readonly("delta", &RegimeParams::delta)
      .def_readonly("E", &RegimeParams::E)
      .def_readonly("B", &RegimeParams::B)
      .def_readonly("relaxed", &RegimeParams::relaxed)
      .def_property_readonly("regime",
                             [](const RegimeParams& r) { return r.regime == Regime::NoClustering ? "i" : "ii"; });
  m.def("regime", &regime, py::arg("x"), py::arg("y"), py::arg("w"));
  m.def("theorem1_order", &theorem1_order, py::arg("x"), py::arg("y"), py::arg("w"));
  m.def("hxy2y_order", &hxy2y_order, py::arg("x"), py::arg("y"));
  m.def("heuristic_estimate", &heuristic_estimate, py::arg("x"), py::arg("y"), py::arg("w"));
  m.def("poisson_partial_sum", &poisson_partial_sum, py::arg("x"), py::arg("h"), py::arg("m"));
  m.def("norton_bound", &norton_bound, py::arg("x"), py::arg("h"), py::arg("m"));

  py::class_<BlockVector>(m, "BlockVector")
      .def(py::init(&make_block_vector), py::arg("J1"), py::arg("J2"), py::arg("M"), py::arg("counts"))
      .def_readonly("J1", &BlockVector::J1)
      .def_readonly("J2", &BlockVector::J2)
      .def_readonly("M", &BlockVector::M)
      .def_readonly("counts", &BlockVector::counts)
      .def("__eq__", [](const BlockVector& a, const BlockVector& b) { return a == b; });
  m.def("is_in_Bk", &is_in_Bk, py::arg("bv"), py::arg("k"));
  m.def(
      "enumerate_Bk",
      [](std::int64_t J1, std::int64_t J2, std::int64_t M, std::int64_t k) { return enumerate_Bk(J1, J2, M, k); },
      py::arg("J1"), py::arg("J2"), py::arg("M"), py::arg("k"));

  // volume_mc
  py::class_<VolumeEstimate>(m, "VolumeEstimate")
      .def_readonly("mean", &VolumeEstimate::mean)
      .def_readonly("stderr", &VolumeEstimate::std_error)
      .def_readonly("samples", &VolumeEstimate::samples)
      .def_readonly("seed", &VolumeEstimate::seed)
      .def_readonly("hit_count", &VolumeEstimate::hit_count);
  using release = py::call_guard<py::gil_scoped_release>;
  m.def(
      "vol_Yk",
      [](std::int64_t k, std::int64_t s, std::int64_t v, std::int64_t M, std::uint64_t samples, std::uint64_t seed) {
        return vol_Yk(k, s, v, M, samples, seed);
      },
      py::arg("k"), py::arg("s"), py::arg("v"), py::arg("M"), py::arg("samples"), py::arg("seed"), release());
  m.def(
      "vol_T",
      [](std::int64_t k, std::int64_t v, std::int64_t gamma, std::uint64_t samples, std::uint64_t seed) {
        return vol_T(k, v, gamma, samples, seed);
      },
      py::arg("k"), py::arg("v"), py::arg("gamma"), py::arg("samples"), py::arg("seed"), release());
  m.def(
      "U_k_estimate",
      [](std::int64_t k, std::int64_t v, std::int64_t u, std::uint64_t samples, std::uint64_t seed) {
        return U_k_estimate(k, v, u, samples, seed);
      },
      py::arg("k"), py::arg("v"), py::arg("u"), py::arg("samples"), py::arg("seed"), release());

  // experiment
  m.def(
      "run_lambda_ladder_csv",
      [](std::uint64_t limit) {
        ExperimentConfig c;
        c.subcommand = Subcommand::LambdaLadder;
        c.limit = {limit};
        std::ostringstream os;
        run(c, os);
        return os.str();
      },
      py::arg("limit"), "The lambda-ladder CSV as emitted by the CLI.");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
