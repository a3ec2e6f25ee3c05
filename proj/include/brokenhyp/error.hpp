#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace brokenhyp {

enum class ErrorKind {
  InvalidInput,
  SlotReused,
  SlotUnglued,
  Disconnected,
  InvalidDecoration,
  DegenerateEdge,
  TriangleInequalityViolated,
  ChartMismatch,
  DegenerateRays,
  DegeneratePair,
  OpenPath,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::SlotReused: return "SlotReused";
    case ErrorKind::SlotUnglued: return "SlotUnglued";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::InvalidDecoration: return "InvalidDecoration";
    case ErrorKind::DegenerateEdge: return "DegenerateEdge";
    case ErrorKind::TriangleInequalityViolated: return "TriangleInequalityViolated";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::DegenerateRays: return "DegenerateRays";
    case ErrorKind::DegeneratePair: return "DegeneratePair";
    case ErrorKind::OpenPath: return "OpenPath";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Absolute slack used when deciding that an O(1) quantity is zero or nonnegative.
inline constexpr double kZeroSlack = 1e-12;

}  // namespace brokenhyp
