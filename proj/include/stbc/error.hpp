#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stbc {

enum class ErrorKind {
  DimensionMismatch,
  RankDeficient,
  NormalizationViolated,
  UnitarityViolated,
  OutOfRange,
  BudgetExceeded,
  NotFastDecodable,
  WrongStructure,
  ZeroDifference,
  ConfigInvalid,
  MissingResults,
  UnknownCode,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NormalizationViolated: return "NormalizationViolated";
    case ErrorKind::UnitarityViolated: return "UnitarityViolated";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotFastDecodable: return "NotFastDecodable";
    case ErrorKind::WrongStructure: return "WrongStructure";
    case ErrorKind::ZeroDifference: return "ZeroDifference";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::MissingResults: return "MissingResults";
    case ErrorKind::UnknownCode: return "UnknownCode";
  }
  return "Unknown";
}

/// Library exception; `kind()` is the machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace stbc
