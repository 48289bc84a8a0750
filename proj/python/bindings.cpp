#include "gkz/cli.hpp"
#include "gkz/error.hpp"
#include "gkz/linalg.hpp"
#include "gkz/periods.hpp"
#include "gkz/system.hpp"
#include "gkz/toric_curve.hpp"
#include "gkz/volume.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

// Python ints of any size travel as decimal strings.
gkz::Integer to_integer(const py::handle& v) { return gkz::Integer(py::str(v).cast<std::string>()); }

py::int_ to_py(const gkz::Integer& v) {
  return py::reinterpret_steal<py::int_>(
      PyLong_FromString(gkz::to_string(v).c_str(), nullptr, 10));
}

gkz::IntMatrix to_matrix(const py::sequence& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : py::len(rows[0]);
  gkz::IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const py::sequence row = rows[i];
    if (row.size() != c) throw gkz::Error(gkz::ErrorCode::ShapeError, "ragged matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = to_integer(row[j]);
  }
  return m;
}

py::list from_matrix(const gkz::IntMatrix& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(to_py(m(i, j)));
    rows.append(row);
  }
  return rows;
}

gkz::IntVector to_vector(const py::sequence& seq) {
  gkz::IntVector v;
  for (const auto& e : seq) v.push_back(to_integer(e));
  return v;
}

gkz::GkzSystem make_system(const py::sequence& weights, const std::vector<std::string>& beta) {
  std::vector<gkz::WeightBlock> blocks;
  std::size_t n = 0;
  for (const auto& block : weights) {
    gkz::WeightBlock wb;
    for (const auto& w : block.cast<py::sequence>()) {
      wb.push_back(to_vector(w.cast<py::sequence>()));
      n = wb.back().size();
    }
    blocks.push_back(std::move(wb));
  }
  gkz::RatVector b;
  for (const auto& s : beta) b.push_back(gkz::parse_rational(s));
  return gkz::assemble_system(blocks.size(), n, blocks, b);
}

gkz::EvaluationPoint to_point(const std::vector<std::vector<std::complex<double>>>& x) {
  return gkz::EvaluationPoint{x};
}

py::object json_to_py(const gkz::cli::Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GKZ systems on toric curves: exact invariants and numerical periods";

  // Messages start with the error name, e.g. "IntegralBeta: ...".
  py::register_exception<gkz::Error>(m, "GkzError", PyExc_ValueError);

  m.def(
      "smith_normal_form",
      [](const py::sequence& a) {
        const auto snf = gkz::smith_normal_form(to_matrix(a));
        return py::make_tuple(from_matrix(snf.S), from_matrix(snf.U), from_matrix(snf.V));
      },
      py::arg("matrix"), "Return (S, U, V) with U @ A @ V = S in Smith normal form.");

  m.def(
      "integer_kernel",
      [](const py::sequence& a) {
        py::list out;
        for (const auto& v : gkz::integer_kernel_basis(to_matrix(a))) {
          py::list col;
          for (const auto& e : v) col.append(to_py(e));
          out.append(col);
        }
        return out;
      },
      py::arg("matrix"), "Basis of the integer kernel lattice.");

  m.def(
      "normalized_volume",
      [](const py::sequence& points) {
        gkz::PointConfiguration cfg;
        for (const auto& p : points) cfg.points.push_back(to_vector(p.cast<py::sequence>()));
        return to_py(gkz::normalized_volume(cfg));
      },
      py::arg("points"), "Lattice-normalized volume of the convex hull of the points.");

  py::class_<gkz::GkzSystem>(m, "System")
      .def(py::init(&make_system), py::arg("weights"), py::arg("beta"))
      .def_property_readonly("r", &gkz::GkzSystem::r)
      .def_property_readonly("n", &gkz::GkzSystem::n)
      .def_property_readonly("m", &gkz::GkzSystem::m)
      .def_property_readonly("matrix", [](const gkz::GkzSystem& s) { return from_matrix(s.matrix()); })
      .def_property_readonly("beta",
                             [](const gkz::GkzSystem& s) {
                               std::vector<std::string> out;
                               for (const auto& b : s.beta()) out.push_back(gkz::to_string(b));
                               return out;
                             })
      .def("hypothesis", &gkz::check_semi_nonresonant)
      .def("volume",
           [](const gkz::GkzSystem& s) {
             return to_py(gkz::normalized_volume(gkz::PointConfiguration{s.columns()}));
           })
      .def("solution_rank", &gkz::solution_rank)
      .def(
          "box_operators",
          [](const gkz::GkzSystem& s, std::optional<std::size_t> degree) {
            std::vector<std::string> out;
            for (const auto& op : gkz::box_operators(s, degree.value_or(gkz::default_degree_bound(s))))
              out.push_back(gkz::render(op));
            return out;
          },
          py::arg("degree_bound") = py::none())
      .def("euler_operators",
           [](const gkz::GkzSystem& s) {
             std::vector<std::string> out;
             for (const auto& op : gkz::euler_operators(s)) out.push_back(gkz::render(op));
             return out;
           })
      .def(
          "twisted_period",
          [](const gkz::GkzSystem& s, const std::vector<std::vector<std::complex<double>>>& x,
             double radius, std::size_t nodes) {
            gkz::CycleSpec c;
            c.radius = radius;
            c.nodes = nodes;
            return gkz::twisted_period(s, to_point(x), c).value;
          },
          py::arg("x"), py::arg("radius") = 1.0, py::arg("nodes") = 4096)
      .def(
          "period_rank",
          [](const gkz::GkzSystem& s, const std::vector<std::vector<std::complex<double>>>& x,
             int max_order, double tol, std::size_t nodes) {
            py::gil_scoped_release release;
            return gkz::period_matrix_rank(s, to_point(x), max_order, tol, nodes);
          },
          py::arg("x"), py::arg("max_order") = 2, py::arg("tol") = 1e-6, py::arg("nodes") = 4096);

  m.def(
      "run",
      [](const std::string& subcommand, std::optional<std::string> problem) {
        std::optional<gkz::cli::ProblemFile> p;
        if (problem) p = gkz::cli::parse_problem_text(*problem);
        return json_to_py(gkz::cli::run(subcommand, p ? &*p : nullptr, {}));
      },
      py::arg("subcommand"), py::arg("problem") = py::none(),
      "Run a command-line subcommand on a problem given as JSON text; returns the report.");

  m.attr("schema_version") = gkz::cli::kSchemaVersion;
}
