#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hermikron {

enum class ErrorCode {
  InvalidArgument,
  SingularTransform,
  NotHermitian,
  NotSkewHermitian,
  TooLarge,
  InvalidBlock,
  InvalidDescriptor,
  SamplingFailed,
  EigenvalueCollision,
  AmbiguousRank,
  InvalidParams,
  NotRegular,
  InferenceUnstable,
  UnpairedComplex,
  AmbiguousSign,
  RankAmbiguity,
  IoError,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotSkewHermitian: return "NotSkewHermitian";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidBlock: return "InvalidBlock";
    case ErrorCode::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::SamplingFailed: return "SamplingFailed";
    case ErrorCode::EigenvalueCollision: return "EigenvalueCollision";
    case ErrorCode::AmbiguousRank: return "AmbiguousRank";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::InferenceUnstable: return "InferenceUnstable";
    case ErrorCode::UnpairedComplex: return "UnpairedComplex";
    case ErrorCode::AmbiguousSign: return "AmbiguousSign";
    case ErrorCode::RankAmbiguity: return "RankAmbiguity";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hermikron
