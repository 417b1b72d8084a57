#include "graphlogm/eig.hpp"

#include <Eigen/Eigenvalues>

namespace graphlogm {

template <Scalar T>
std::vector<cplx> eig_small(const Matrix<T>& a, std::size_t cap) {
  const std::size_t n = a.size();
  if (n > cap) throw ArgumentError("eig_small: dimension exceeds cap");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("eig_small: QR iteration did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

bool touches_negative_axis(const std::vector<cplx>& eigenvalues, double scale) {
  const double tol = 64.0 * kUnitRoundoff * std::max(scale, 1e-300);
  for (const cplx& l : eigenvalues) {
    if (std::abs(l) <= tol) return true;
    if (l.real() < 0.0 && std::abs(l.imag()) <= tol) return true;
  }
  return false;
}

template std::vector<cplx> eig_small(const Matrix<double>&, std::size_t);
template std::vector<cplx> eig_small(const Matrix<cplx>&, std::size_t);

}  // namespace graphlogm
