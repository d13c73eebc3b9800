#pragma once

#include <stdexcept>
#include <string>

namespace statichedge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside an operation's domain (t >= T, a >= b, bad order, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to produce a finite or converged result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An integrand evaluated to a non-finite value at a quadrature node.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, int node_index, double node)
      : NumericalError(what), node_index_(node_index), node_(node) {}

  int node_index() const noexcept { return node_index_; }
  double node() const noexcept { return node_; }

 private:
  int node_index_;
  double node_;
};

}  // namespace statichedge
