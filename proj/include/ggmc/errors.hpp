#pragma once

#include <stdexcept>
#include <string>

namespace ggmc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

struct InvalidSpec : Error {
  using Error::Error;
};

struct InvalidLambda : Error {
  using Error::Error;
};

struct InvalidRho : Error {
  using Error::Error;
};

struct GridTooSmall : Error {
  using Error::Error;
};

struct DegenerateResidual : Error {
  using Error::Error;
};

struct DegenerateScale : Error {
  using Error::Error;
};

struct NotBanded : Error {
  using Error::Error;
};

// CSV/config parse failure with a 1-based position for diagnostics.
struct ParseError : Error {
  ParseError(const std::string& msg, long line, long column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  long line;
  long column;
};

}  // namespace ggmc
