#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptampc {

enum class ErrorKind {
  UnknownState,
  IllegalPath,
  ZeroLengthPath,
  MalformedRedundantChain,
  UnknownRedundantPath,
  InvalidObjective,
  CurrentStateFailed,
  NonTermination,
  InvalidScenario,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::IllegalPath: return "IllegalPath";
    case ErrorKind::ZeroLengthPath: return "ZeroLengthPath";
    case ErrorKind::MalformedRedundantChain: return "MalformedRedundantChain";
    case ErrorKind::UnknownRedundantPath: return "UnknownRedundantPath";
    case ErrorKind::InvalidObjective: return "InvalidObjective";
    case ErrorKind::CurrentStateFailed: return "CurrentStateFailed";
    case ErrorKind::NonTermination: return "NonTermination";
    case ErrorKind::InvalidScenario: return "InvalidScenario";
  }
  return "Unknown";
}

class PtaError : public std::runtime_error {
 public:
  PtaError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ptampc
