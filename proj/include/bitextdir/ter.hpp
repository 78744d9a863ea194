#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace bitextdir {

namespace edit {

/// Hypothesis token h_idx is kept and aligned to reference token r_idx.
struct Match {
  std::size_t h_idx;
  std::size_t r_idx;
  friend bool operator==(const Match&, const Match&) = default;
};
/// Hypothesis token h_idx is replaced by `token` (== ref[r_idx]).
struct Substitute {
  std::size_t h_idx;
  std::size_t r_idx;
  std::string token;
  friend bool operator==(const Substitute&, const Substitute&) = default;
};
/// Reference token r_idx is inserted.
struct Insert {
  std::size_t r_idx;
  std::string token;
  friend bool operator==(const Insert&, const Insert&) = default;
};
/// Hypothesis token h_idx is dropped.
struct Delete {
  std::size_t h_idx;
  friend bool operator==(const Delete&, const Delete&) = default;
};
/// Moves the span [start, start+length) of the current hypothesis so that,
/// after removing it, it is re-inserted before position `new_position`.
struct Shift {
  std::size_t start;
  std::size_t length;
  std::size_t new_position;
  friend bool operator==(const Shift&, const Shift&) = default;
};

}  // namespace edit

using EditOp = std::variant<edit::Match, edit::Substitute, edit::Insert, edit::Delete, edit::Shift>;

/// Shift ops come first, in application order. The remaining ops walk the
/// shifted hypothesis left to right; their h_idx refer to positions in the
/// ORIGINAL hypothesis, so word tags can be read off directly.
struct EditScript {
  std::vector<EditOp> ops;
  std::size_t n_edits = 0;  // non-Match ops; a Shift counts as one

  std::size_t n_shifts() const noexcept;
};

/// Executes the script against `hyp`. Throws InconsistentScript if the ops do
/// not consume the (shifted) hypothesis exactly once, in order.
std::vector<std::string> apply_script(std::span<const std::string> hyp, const EditScript& script);

/// Shift-free minimum edit script (unit costs). Backtrace ties prefer
/// Match > Substitute > Delete > Insert.
EditScript levenshtein_script(std::span<const std::string> hyp, std::span<const std::string> ref);

/// Shift-free edit distance only.
std::size_t levenshtein_distance(std::span<const std::string> hyp, std::span<const std::string> ref);

struct TerOptions {
  std::size_t max_shift_distance = 10;
  std::size_t max_shift_size = 10;
};

struct TerResult {
  double score = 0.0;  // n_edits / ref_len, capped at 1
  std::size_t n_edits = 0;
  std::size_t n_shifts = 0;
  std::size_t ref_len = 0;
};

struct TerOutput {
  TerResult result;
  EditScript script;
};

/// Translation edit rate with greedy block shifts.
TerOutput ter(std::span<const std::string> hyp, std::span<const std::string> ref,
              const TerOptions& opts = {});

enum class QualityTag { OK, BAD };

const char* to_string(QualityTag tag) noexcept;

struct WordTags {
  std::vector<QualityTag> tgt_tags;  // one per hypothesis token
  std::vector<QualityTag> gap_tags;  // hyp_len + 1 gaps
};

/// OK iff a hypothesis token is consumed by a Match (shifted-then-matched
/// tokens are OK). A gap is BAD iff at least one Insert lands in it. Inserts
/// belong to the gap after the most recent hypothesis token in alignment
/// order (gap 0 when none precedes).
WordTags word_tags(const EditScript& script, std::size_t hyp_len);

}  // namespace bitextdir
