#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semcomm {

struct Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : public Error {
  ParseError(const std::string& msg, std::size_t line, std::size_t column,
             const std::string& file = {})
      : Error((file.empty() ? "" : file + ":") + std::to_string(line) + ":" +
              std::to_string(column) + ": " + msg),
        message(msg),
        line(line),
        column(column) {}
  std::string message;
  std::size_t line;
  std::size_t column;
};

struct ArityError : public Error { using Error::Error; };
struct InconsistencyError : public Error { using Error::Error; };
struct CapacityError : public Error { using Error::Error; };
struct DomainError : public Error { using Error::Error; };
struct UnsupportedConfigError : public Error { using Error::Error; };

struct DecodeError : public Error {
  DecodeError(const std::string& msg, std::size_t position)
      : Error("byte " + std::to_string(position) + ": " + msg), position(position) {}
  std::size_t position;
};

struct InfeasibleError : public Error {
  InfeasibleError(const std::string& msg, double max_achievable)
      : Error(msg), max_achievable(max_achievable) {}
  double max_achievable;
};

}  // namespace semcomm
