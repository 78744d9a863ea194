#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bitextdir {

enum class Errc {
  // corpus-io
  MissingFile,
  LineCountMismatch,
  DuplicateName,
  ManifestSyntax,
  OneSidedBlankLine,
  InvalidUtf8,
  // textstats
  EmptyInput,
  InvalidEpsilon,
  EmptyPartition,
  // direction
  EmptyClass,
  InvalidAlpha,
  SideMismatch,
  VersionMismatch,
  CorruptModel,
  // pseudoqe
  InconsistentScript,
  MissingMtLine,
  // pipeline
  Shortfall,
  MissingScore,
  InsufficientSynthetic,
  // evalmetrics
  LengthMismatch,
  ConstantInput,
  MissingClassInGold,
  // general
  InvalidArgument,
  Io,
  FormatViolation,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library. `code()` identifies the contract that
/// was violated; `what()` carries the human-readable detail (file and line
/// where one applies).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, std::string(errc_name(code)) + ": " + message);
}

}  // namespace bitextdir
