#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gevpnoise {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class NonHermitian : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure did not converge; `trace` holds one value per iteration
/// (energy for SCF, gradient norm for VQE).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// The overlap matrix is not positive definite (or produced non-finite values)
/// and no threshold was requested.
class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double min_overlap_eigenvalue, double condition_number)
      : Error(what), min_eigenvalue_(min_overlap_eigenvalue), condition_number_(condition_number) {}
  double min_overlap_eigenvalue() const noexcept { return min_eigenvalue_; }
  double condition_number() const noexcept { return condition_number_; }

 private:
  double min_eigenvalue_;
  double condition_number_;
};

class EmptySubspace : public Error {
 public:
  using Error::Error;
};

}  // namespace gevpnoise
