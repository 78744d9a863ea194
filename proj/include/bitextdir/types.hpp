#pragma once

#include <optional>
#include <string_view>

namespace bitextdir {

/// Which side of a bitext produced the original text.
enum class Direction { SourceOriginal, TargetOriginal, Unknown };

/// Decision of the ensemble classifier. Abstain only occurs with a non-zero
/// abstain band.
enum class Decision { SourceOriginal, TargetOriginal, Abstain };

enum class Side { Source, Target };

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(Decision d) noexcept;
std::string_view to_string(Side s) noexcept;

std::optional<Direction> parse_direction(std::string_view text) noexcept;
std::optional<Decision> parse_decision(std::string_view text) noexcept;
std::optional<Side> parse_side(std::string_view text) noexcept;

}  // namespace bitextdir
