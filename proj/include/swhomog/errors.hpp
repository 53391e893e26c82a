#pragma once

#include <stdexcept>
#include <string>

namespace swhomog {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInput : Error {
  using Error::Error;
};

struct SolverFailure : Error {
  using Error::Error;
};

}  // namespace swhomog
