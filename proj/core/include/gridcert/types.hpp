#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace gridcert {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for all gridcert errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DisconnectedNetwork : public Error {
public:
  using Error::Error;
};
class SingularYLL : public Error {
public:
  using Error::Error;
};
class DuplicateBranch : public Error {
public:
  using Error::Error;
};
class UnknownBranch : public Error {
public:
  using Error::Error;
};
class InvalidInput : public Error {
public:
  using Error::Error;
};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace gridcert
