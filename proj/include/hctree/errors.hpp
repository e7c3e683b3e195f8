#pragma once

#include <stdexcept>
#include <string>

namespace hctree {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The model parameters are outside the regime an operation is defined for
// (e.g. the BG construction outside the contractive window).
class RegimeError : public Error {
 public:
  using Error::Error;
};

// A root bracket could not be found where theory says one exists.
class SolverError : public Error {
 public:
  using Error::Error;
};

// An orbit did not settle within the step budget.
class NotConverged : public Error {
 public:
  explicit NotConverged(const std::string& what, long steps)
      : Error(what), steps_(steps) {}
  long steps() const noexcept { return steps_; }

 private:
  long steps_;
};

// The depth cap was hit before the certified bound reached the tolerance.
class DepthCapped : public Error {
 public:
  DepthCapped(const std::string& what, int depth, double achieved_bound)
      : Error(what), depth_(depth), achieved_bound_(achieved_bound) {}
  int depth() const noexcept { return depth_; }
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  int depth_;
  double achieved_bound_;
};

// Brute-force enumeration refused because the configuration space is too big.
class VolumeTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace hctree
