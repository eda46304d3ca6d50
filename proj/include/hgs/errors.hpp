#ifndef HGS_ERRORS_HPP
#define HGS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hgs {

// Bad numeric input (non-finite values, malformed grids, short trajectories).
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// A shooting bracket whose endpoints do not witness distinct outcomes.
class bracket_error : public std::runtime_error {
 public:
  explicit bracket_error(const std::string& what) : std::runtime_error(what) {}
};

// The phase portrait did not match the single-flip assumption of the search.
class structure_error : public std::runtime_error {
 public:
  explicit structure_error(const std::string& what) : std::runtime_error(what) {}
};

// Decay-fit window shorter than the minimum supported length.
class window_error : public std::runtime_error {
 public:
  explicit window_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hgs

#endif
