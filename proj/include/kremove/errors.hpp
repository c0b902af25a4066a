#pragma once

#include <stdexcept>
#include <string>

namespace kremove {

/// Base class for every domain failure raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NoSuchPath : public Error {
  public:
    using Error::Error;
};

class NoSuchFan : public Error {
  public:
    using Error::Error;
};

class NotASubtree : public Error {
  public:
    using Error::Error;
};

class EmbeddingFailed : public Error {
  public:
    using Error::Error;
};

class NoSubdivision : public Error {
  public:
    using Error::Error;
};

class NotFound : public Error {
  public:
    using Error::Error;
};

class SearchFailed : public Error {
  public:
    using Error::Error;
};

class GenerationExhausted : public Error {
  public:
    using Error::Error;
};

/// Input graph misses the connectivity or minimum-degree hypothesis a search relies on.
class HypothesisUnmet : public Error {
  public:
    using Error::Error;
};

/// An improvement step reached a state its correctness argument rules out.
class InternalContradiction : public Error {
  public:
    InternalContradiction(std::string stage, const std::string &what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string &stage() const noexcept { return stage_; }

  private:
    std::string stage_;
};

/// Malformed graph, tree or embedding input. Carries a "source:line:column" location.
class ParseError : public Error {
  public:
    ParseError(const std::string &source, int line, int column, const std::string &what)
        : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

  private:
    int line_;
    int column_;
};

} // namespace kremove
