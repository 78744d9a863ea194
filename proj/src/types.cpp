#include "bitextdir/error.hpp"
#include "bitextdir/types.hpp"

namespace bitextdir {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingFile: return "MissingFile";
    case Errc::LineCountMismatch: return "LineCountMismatch";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::ManifestSyntax: return "ManifestSyntax";
    case Errc::OneSidedBlankLine: return "OneSidedBlankLine";
    case Errc::InvalidUtf8: return "InvalidUtf8";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidEpsilon: return "InvalidEpsilon";
    case Errc::EmptyPartition: return "EmptyPartition";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::InvalidAlpha: return "InvalidAlpha";
    case Errc::SideMismatch: return "SideMismatch";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::CorruptModel: return "CorruptModel";
    case Errc::InconsistentScript: return "InconsistentScript";
    case Errc::MissingMtLine: return "MissingMtLine";
    case Errc::Shortfall: return "Shortfall";
    case Errc::MissingScore: return "MissingScore";
    case Errc::InsufficientSynthetic: return "InsufficientSynthetic";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ConstantInput: return "ConstantInput";
    case Errc::MissingClassInGold: return "MissingClassInGold";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
    case Errc::FormatViolation: return "FormatViolation";
  }
  return "Unknown";
}

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::SourceOriginal: return "SourceOriginal";
    case Direction::TargetOriginal: return "TargetOriginal";
    case Direction::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(Decision d) noexcept {
  switch (d) {
    case Decision::SourceOriginal: return "SourceOriginal";
    case Decision::TargetOriginal: return "TargetOriginal";
    case Decision::Abstain: return "Abstain";
  }
  return "Abstain";
}

std::string_view to_string(Side s) noexcept {
  return s == Side::Source ? "source" : "target";
}

std::optional<Direction> parse_direction(std::string_view text) noexcept {
  if (text == "SourceOriginal" || text == "source-original" || text == "S-O") {
    return Direction::SourceOriginal;
  }
  if (text == "TargetOriginal" || text == "target-original" || text == "T-O") {
    return Direction::TargetOriginal;
  }
  if (text == "Unknown") return Direction::Unknown;
  return std::nullopt;
}

std::optional<Decision> parse_decision(std::string_view text) noexcept {
  if (text == "SourceOriginal") return Decision::SourceOriginal;
  if (text == "TargetOriginal") return Decision::TargetOriginal;
  if (text == "Abstain") return Decision::Abstain;
  return std::nullopt;
}

std::optional<Side> parse_side(std::string_view text) noexcept {
  if (text == "source" || text == "Source" || text == "src") return Side::Source;
  if (text == "target" || text == "Target" || text == "tgt") return Side::Target;
  return std::nullopt;
}

}  // namespace bitextdir
