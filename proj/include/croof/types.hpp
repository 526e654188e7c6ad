#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace croof {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Complex-combined gradient: entry j holds df/dRe x_j + i df/dIm x_j.
using ComplexGradient = Eigen::VectorXcd;
using ComplexMatrixGradient = Eigen::MatrixXcd;

/// Dimensions of the tensor factors of a Hilbert space, most significant first
/// (Kronecker-product ordering).
class SubsystemShape {
public:
  SubsystemShape() = default;
  SubsystemShape(std::initializer_list<int> dims) : dims_(dims) { validate(); }
  explicit SubsystemShape(std::vector<int> dims) : dims_(std::move(dims)) { validate(); }

  const std::vector<int>& dims() const { return dims_; }
  int size() const { return static_cast<int>(dims_.size()); }
  int operator[](int i) const { return dims_.at(static_cast<std::size_t>(i)); }

  int total() const {
    return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
  }

  /// n qubits.
  static SubsystemShape qubits(int n) { return SubsystemShape(std::vector<int>(static_cast<std::size_t>(n), 2)); }

private:
  void validate() const {
    if (dims_.empty()) throw std::invalid_argument("SubsystemShape: no subsystems");
    for (int d : dims_)
      if (d < 1) throw std::invalid_argument("SubsystemShape: dimensions must be positive");
  }

  std::vector<int> dims_;
};

/// Nonzero part of the spectrum of a density matrix, eigenvalues decreasing.
struct SpectralData {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;  // dim x rank, column i belongs to eigenvalue i

  int rank() const { return static_cast<int>(eigenvalues.size()); }
  int dim() const { return static_cast<int>(eigenvectors.rows()); }
};

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// max_ij |(U^dag U - I)_ij|
inline double orthonormality_defect(const ComplexMatrix& u) {
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()));
}

inline double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

}  // namespace croof
