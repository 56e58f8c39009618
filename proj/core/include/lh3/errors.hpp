#pragma once

#include <stdexcept>
#include <string>

namespace lh3 {

enum class ErrorKind {
  NearBoundary,
  ChartSingular,
  DegenerateGeodesic,
  BaseMismatch,
  OutOfDomain,
  DegenerateFrame,
  DegenerateMetric,
  WrongRank,
  InsufficientOrder,
  NotLagrangian,
  FlatPoint,
  PoleInDomain,
  NonPositiveRho0,
  SyntaxError,
  UnknownIdentifier,
  DivisionByZero,
  DomainError,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, const std::string& what, std::size_t offset)
      : Error(kind, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NearBoundary: return "NearBoundary";
    case ErrorKind::ChartSingular: return "ChartSingular";
    case ErrorKind::DegenerateGeodesic: return "DegenerateGeodesic";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::WrongRank: return "WrongRank";
    case ErrorKind::InsufficientOrder: return "InsufficientOrder";
    case ErrorKind::NotLagrangian: return "NotLagrangian";
    case ErrorKind::FlatPoint: return "FlatPoint";
    case ErrorKind::PoleInDomain: return "PoleInDomain";
    case ErrorKind::NonPositiveRho0: return "NonPositiveRho0";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace lh3
