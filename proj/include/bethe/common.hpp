#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bethe {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: inadmissible label, out-of-range parameter, bad config.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A pairing <lambda, alpha^vee> vanished where a c-function or BAE factor
/// would divide by it. `root_index` indexes RootSystem::positive_roots.
class PoleError : public Error {
public:
  PoleError(const std::string& what, int root_index)
      : Error(what), root_index_(root_index) {}
  int root_index() const noexcept { return root_index_; }

private:
  int root_index_;
};

/// Weyl group enumeration would exceed the configured order cap.
class CapExceeded : public Error {
public:
  using Error::Error;
};

/// Newton iteration did not reach the gradient tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, Vector last_iterate, double grad_norm,
                   int iterations)
      : Error(what), last_iterate_(std::move(last_iterate)), grad_norm_(grad_norm),
        iterations_(iterations) {}
  const Vector& last_iterate() const noexcept { return last_iterate_; }
  double grad_norm() const noexcept { return grad_norm_; }
  int iterations() const noexcept { return iterations_; }

private:
  Vector last_iterate_;
  double grad_norm_;
  int iterations_;
};

/// A converged minimizer failed its chamber or BAE certificate. This cannot
/// happen for exact arithmetic and indicates a defect or precision loss.
class CertificateError : public Error {
public:
  using Error::Error;
};

} // namespace bethe
