#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfx {

enum class Errc {
  EmptySeries,
  NonFinite,
  InvalidArgument,
  ScaleTooLarge,
  DegenerateFit,
  AllSegmentsDegenerate,
  InsufficientScales,
  InsufficientData,
  InsufficientQPoints,
  BandOutOfRange,
  SampleRateTooLow,
  TooManyLevels,
  TooShort,
  BadImfIndex,
  SilentInput,
  RecordingTooShort,
  BadPart,
  NoSheets,
  EmptyCell,
  EmptyReport,
  MissingChannel,
  ParseError,
  IoFailure,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures are reported with this exception type; the code
// identifies the failed precondition, the message carries the context.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  Errc code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace mfx
