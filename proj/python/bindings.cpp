#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphlogm/analysis.hpp"
#include "graphlogm/bench.hpp"
#include "graphlogm/driver.hpp"
#include "graphlogm/errors.hpp"
#include "graphlogm/scheme.hpp"
#include "graphlogm/sqrtm.hpp"

namespace py = pybind11;
using namespace graphlogm;

namespace {

template <Scalar T>
Matrix<T> from_numpy(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw DimensionError("expected a square 2-D array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  return Matrix<T>(n, std::vector<T>(a.data(), a.data() + n * n));
}

template <Scalar T>
py::array_t<T> to_numpy(const Matrix<T>& m) {
  const auto n = static_cast<py::ssize_t>(m.size());
  py::array_t<T> out({n, n});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

py::dict report_dict(const LogmReport& r) {
  py::dict d;
  d["s"] = r.s;
  d["k"] = r.k_selected;
  d["m"] = r.m_selected;
  d["theta"] = r.theta_selected;
  d["alpha"] = r.alpha_used;
  d["products"] = r.counter.products;
  d["divisions"] = r.counter.divisions;
  d["equivalent_m"] = r.counter.equivalent_m();
  d["eval_products"] = r.eval_products;
  d["square_products"] = r.square_products;
  d["norm_estimations"] = r.norm_estimations;
  d["balanced"] = r.balanced;
  return d;
}

LogmOptions make_options(const std::string& method, int max_k, bool balance) {
  LogmOptions o;
  o.max_k = max_k;
  o.balance = balance;
  if (method == "ps") {
    o.evaluator = Evaluator::paterson_stockmeyer;
    o.theta_table = taylor_theta_table(shipped_theta_table());
  } else if (method != "graph") {
    throw ArgumentError("method must be graph or ps");
  }
  return o;
}

template <Scalar T>
py::tuple logm_impl(const py::array& a, const std::string& method, int max_k, bool balance) {
  LogmReport rep;
  const Matrix<T> l = logm(from_numpy<T>(a), make_options(method, max_k, balance), &rep);
  return py::make_tuple(to_numpy(l), report_dict(rep));
}

bool is_complex_array(const py::array& a) { return a.dtype().kind() == 'c'; }

}  // namespace

PYBIND11_MODULE(_graphlogm, m) {
  m.doc() = "Matrix logarithm by degree-optimal polynomial evaluation schemes";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def(
      "logm",
      [](const py::array& a, const std::string& method, int max_k, bool balance) {
        return is_complex_array(a) ? logm_impl<cplx>(a, method, max_k, balance)
                                   : logm_impl<double>(a, method, max_k, balance);
      },
      py::arg("a"), py::arg("method") = "graph", py::arg("max_k") = 9, py::arg("balance") = true,
      "Principal logarithm. Returns (L, report).");

  m.def(
      "sqrtm",
      [](const py::array& a) -> py::object {
        OpCounter c;
        if (is_complex_array(a)) return to_numpy(sqrt_db(from_numpy<cplx>(a), 0.0, 50, c));
        return to_numpy(sqrt_db(from_numpy<double>(a), 0.0, 50, c));
      },
      py::arg("a"), "Principal square root by the scaled Denman-Beavers iteration.");

  m.def(
      "relative_error",
      [](const py::array_t<double>& l, const py::array_t<double>& ref) {
        return relative_error(from_numpy<double>(l), from_numpy<double>(ref));
      },
      py::arg("l"), py::arg("ref"));

  m.def(
      "theta_table",
      [](const std::string& which) {
        const ThetaTable t = which == "published" ? published_theta_table() : shipped_theta_table();
        py::list rows;
        for (const ThetaRow& r : t.rows) {
          py::dict d;
          d["k"] = r.k;
          d["m"] = r.order_label();
          d["degree"] = r.degree;
          d["theta"] = r.theta;
          rows.append(d);
        }
        return rows;
      },
      py::arg("which") = "shipped");

  m.def(
      "scheme",
      [](int k) {
        const GraphScheme& s = builtin_scheme(k);
        py::dict d;
        d["k"] = s.k;
        d["h"] = s.h;
        d["g"] = s.g;
        d["y"] = s.y;
        d["m"] = s.meta.m_order;
        d["theta"] = s.meta.theta;
        return d;
      },
      py::arg("k"));

  m.def(
      "stability",
      [](int k, int digits) { return stability_indicator(builtin_scheme(k), digits).max_in_u(); },
      py::arg("k"), py::arg("digits") = kDefaultDigits, "Max stability indicator of a bundled scheme, in u.");

  m.def(
      "test_matrix",
      [](const std::string& family, std::uint64_t seed, std::size_t n, double kappa, int index) {
        if (family.size() != 1) throw ArgumentError("family must be one of a, b, c, d");
        FamilyOptions o;
        o.n = n;
        o.kappa = kappa;
        const TestMatrix t = make_test_matrix(family[0], seed, o, index);
        return py::make_tuple(to_numpy(t.a), to_numpy(t.log_ref));
      },
      py::arg("family"), py::arg("seed") = 1, py::arg("n") = 16, py::arg("kappa") = 10.0, py::arg("index") = 0,
      "Synthetic matrix and its reference logarithm.");

  m.attr("unit_roundoff") = kUnitRoundoff;
}
