#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "domroots/analysis.hpp"
#include "domroots/census.hpp"
#include "domroots/errors.hpp"
#include "domroots/exact_roots.hpp"
#include "domroots/factor_int.hpp"
#include "domroots/families.hpp"

namespace py = pybind11;
using namespace domroots;

// JSON strings cross the boundary; the Python layer decodes them.
PYBIND11_MODULE(_domroots, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);
  py::register_exception<InsufficientData>(m, "InsufficientData", PyExc_ValueError);

  m.def("parse_poly", [](const std::string& s) { return parse_poly(s).to_string(); });
  m.def("modulus_profile", [](const std::string& s, unsigned long ceiling) {
    RootConfig cfg;
    cfg.precision_ceiling = ceiling;
    IntPoly f = parse_poly(s);
    py::gil_scoped_release nogil;
    return modulus_profile(f, cfg).to_json();
  }, py::arg("poly"), py::arg("precision_ceiling") = 1UL << 16);
  m.def("dominant_root_count", [](const std::string& s) { return dominant_root_count(parse_poly(s)); });
  m.def("factor", [](const std::string& s) { return factor_monic(parse_poly(s)).to_json(); });
  m.def("is_irreducible", [](const std::string& s) { return is_irreducible(parse_poly(s)); });
  m.def("classify", [](const std::string& s) {
    Classification c = classify_one(parse_poly(s));
    return py::make_tuple(c.k, c.irreducible, c.height.get_str());
  });

  m.def("census", [](int n, long max_height, std::vector<long> heights, unsigned threads, std::uint64_t budget) {
    CensusConfig c;
    c.n = n;
    c.max_height = max_height;
    c.heights = std::move(heights);
    c.threads = threads;
    c.budget = budget;
    py::gil_scoped_release nogil;
    return run_census(c).to_csv();
  }, py::arg("n"), py::arg("max_height"), py::arg("heights") = std::vector<long>{}, py::arg("threads") = 0,
     py::arg("budget") = std::uint64_t(1) << 31);
  m.def("compare_csv", [](const std::string& csv, double slack, double ratio_limit) {
    return compare(CensusTable::from_csv(csv), slack, ratio_limit).to_json();
  }, py::arg("csv"), py::arg("slack") = 0.35, py::arg("ratio_limit") = 3.0);

  m.def("compute_e", [](int n, int k) {
    mpq_class e = compute_e(n, k);
    return py::make_tuple(e.get_num().get_str(), e.get_den().get_str());
  });

  m.def("families", [](const std::string& name, int n, int k, long H, std::uint64_t limit) {
    FamilySpec s;
    s.name = family_from_string(name);
    s.n = n;
    s.k = k;
    s.H = H;
    std::vector<std::string> out;
    generate(s, [&](const FamilyMember& mb) { return out.push_back(mb.to_json()), true; }, limit);
    return out;
  }, py::arg("name"), py::arg("n"), py::arg("k"), py::arg("H"), py::arg("limit") = 0);

  m.attr("__version__") = DOMROOTS_VERSION;
}
