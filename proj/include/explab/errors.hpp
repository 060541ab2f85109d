#pragma once

#include <stdexcept>
#include <string>

namespace explab {

// An iterative solver failed to converge within its budget.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured cap (dimension, search bound, memory guard) was exceeded.
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Two independent computations of the same quantity disagree.
struct consistency_error : std::logic_error {
  explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace explab
