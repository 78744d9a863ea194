#include "bitextdir/ter.hpp"

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <unordered_map>

#include "bitextdir/error.hpp"

namespace bitextdir {

namespace {

using Seq = std::vector<std::int32_t>;

struct Interned {
  Seq hyp;
  Seq ref;
};

Interned intern(std::span<const std::string> hyp, std::span<const std::string> ref) {
  std::unordered_map<std::string_view, std::int32_t> ids;
  auto id_of = [&](const std::string& t) {
    return ids.try_emplace(t, static_cast<std::int32_t>(ids.size())).first->second;
  };
  Interned out;
  out.hyp.reserve(hyp.size());
  out.ref.reserve(ref.size());
  for (const auto& t : hyp) out.hyp.push_back(id_of(t));
  for (const auto& t : ref) out.ref.push_back(id_of(t));
  return out;
}

std::size_t distance(const Seq& hyp, const Seq& ref) {
  std::vector<std::size_t> prev(ref.size() + 1), cur(ref.size() + 1);
  for (std::size_t j = 0; j <= ref.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      const std::size_t diag = prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      cur[j] = std::min({diag, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[ref.size()];
}

enum class Step : std::uint8_t { Match, Substitute, Delete, Insert };

/// Full-table alignment; returns steps in left-to-right order.
std::vector<Step> align(const Seq& hyp, const Seq& ref) {
  const std::size_t n = hyp.size(), m = ref.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  std::vector<Step> steps;
  steps.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0 && hyp[i - 1] == ref[j - 1] && here == at(i - 1, j - 1)) {
      steps.push_back(Step::Match);
      --i, --j;
    } else if (i > 0 && j > 0 && hyp[i - 1] != ref[j - 1] && here == at(i - 1, j - 1) + 1) {
      steps.push_back(Step::Substitute);
      --i, --j;
    } else if (i > 0 && here == at(i - 1, j) + 1) {
      steps.push_back(Step::Delete);
      --i;
    } else {
      steps.push_back(Step::Insert);
      --j;
    }
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

/// Builds the alignment ops for `hyp` (with provenance) against the reference.
void emit_alignment(const Seq& hyp, const Seq& ref, std::span<const std::size_t> provenance,
                    std::span<const std::string> ref_tokens, EditScript& script) {
  std::size_t i = 0, j = 0;
  for (Step step : align(hyp, ref)) {
    switch (step) {
      case Step::Match:
        script.ops.emplace_back(edit::Match{provenance[i], j});
        ++i, ++j;
        break;
      case Step::Substitute:
        script.ops.emplace_back(edit::Substitute{provenance[i], j, ref_tokens[j]});
        ++script.n_edits;
        ++i, ++j;
        break;
      case Step::Delete:
        script.ops.emplace_back(edit::Delete{provenance[i]});
        ++script.n_edits;
        ++i;
        break;
      case Step::Insert:
        script.ops.emplace_back(edit::Insert{j, ref_tokens[j]});
        ++script.n_edits;
        ++j;
        break;
    }
  }
}

template <class T>
void move_span(std::vector<T>& seq, std::size_t start, std::size_t length, std::size_t new_position) {
  std::vector<T> span(seq.begin() + static_cast<std::ptrdiff_t>(start),
                      seq.begin() + static_cast<std::ptrdiff_t>(start + length));
  seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(start),
            seq.begin() + static_cast<std::ptrdiff_t>(start + length));
  seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(new_position), span.begin(), span.end());
}

struct SeqHash {
  std::size_t operator()(const Seq& s) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : s) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct ShiftCandidate {
  std::size_t gain = 0;
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t displacement = 0;
  std::size_t new_position = 0;
};

// Larger gain wins; ties go to the smaller span, then the smaller
// displacement, then the leftmost span, then the leftmost destination.
bool better(const ShiftCandidate& a, const ShiftCandidate& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.length != b.length) return a.length < b.length;
  if (a.displacement != b.displacement) return a.displacement < b.displacement;
  if (a.start != b.start) return a.start < b.start;
  return a.new_position < b.new_position;
}

}  // namespace

std::size_t EditScript::n_shifts() const noexcept {
  return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](const EditOp& op) {
    return std::holds_alternative<edit::Shift>(op);
  }));
}

std::vector<std::string> apply_script(std::span<const std::string> hyp, const EditScript& script) {
  auto inconsistent = [](const std::string& why) { fail(Errc::InconsistentScript, why); };

  std::vector<std::size_t> order(hyp.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;

  std::vector<std::string> out;
  std::size_t cursor = 0;  // next position of the shifted hypothesis to consume
  bool aligning = false;
  std::size_t edits = 0;
  auto consume = [&](std::size_t h_idx) {
    if (cursor >= order.size() || order[cursor] != h_idx) {
      inconsistent("hypothesis token " + std::to_string(h_idx) + " consumed out of order");
    }
    ++cursor;
  };

  for (const auto& op : script.ops) {
    if (const auto* s = std::get_if<edit::Shift>(&op)) {
      if (aligning) inconsistent("shift after alignment ops");
      if (s->length == 0 || s->start + s->length > order.size() ||
          s->new_position > order.size() - s->length) {
        inconsistent("shift out of range");
      }
      move_span(order, s->start, s->length, s->new_position);
      ++edits;
      continue;
    }
    aligning = true;
    if (const auto* m = std::get_if<edit::Match>(&op)) {
      consume(m->h_idx);
      out.push_back(hyp[m->h_idx]);
    } else if (const auto* sub = std::get_if<edit::Substitute>(&op)) {
      consume(sub->h_idx);
      out.push_back(sub->token);
      ++edits;
    } else if (const auto* ins = std::get_if<edit::Insert>(&op)) {
      out.push_back(ins->token);
      ++edits;
    } else if (const auto* del = std::get_if<edit::Delete>(&op)) {
      consume(del->h_idx);
      ++edits;
    }
  }
  if (cursor != order.size()) inconsistent("hypothesis tokens left unconsumed");
  if (edits != script.n_edits) inconsistent("edit count does not match ops");
  return out;
}

EditScript levenshtein_script(std::span<const std::string> hyp, std::span<const std::string> ref) {
  const auto seqs = intern(hyp, ref);
  std::vector<std::size_t> provenance(hyp.size());
  for (std::size_t k = 0; k < provenance.size(); ++k) provenance[k] = k;
  EditScript script;
  emit_alignment(seqs.hyp, seqs.ref, provenance, ref, script);
  return script;
}

std::size_t levenshtein_distance(std::span<const std::string> hyp, std::span<const std::string> ref) {
  const auto seqs = intern(hyp, ref);
  return distance(seqs.hyp, seqs.ref);
}

TerOutput ter(std::span<const std::string> hyp, std::span<const std::string> ref,
              const TerOptions& opts) {
  const auto seqs = intern(hyp, ref);
  const Seq& r = seqs.ref;
  Seq cur = seqs.hyp;
  std::vector<std::size_t> provenance(cur.size());
  for (std::size_t k = 0; k < provenance.size(); ++k) provenance[k] = k;

  std::unordered_map<Seq, std::size_t, SeqHash> cache;
  auto dist = [&](const Seq& s) {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    const std::size_t d = distance(s, r);
    cache.emplace(s, d);
    return d;
  };

  EditScript script;
  const std::size_t n = cur.size();
  for (;;) {
    const std::size_t current = dist(cur);
    if (current == 0) break;

    // Alignment errors of the current hypothesis and reference positions.
    std::vector<bool> herr(n, true), rerr(r.size(), true);
    {
      std::size_t i = 0, j = 0;
      for (Step step : align(cur, r)) {
        if (step == Step::Match) herr[i] = false, rerr[j] = false;
        if (step != Step::Insert) ++i;
        if (step != Step::Delete) ++j;
      }
    }

    ShiftCandidate best;
    bool found = false;
    const std::size_t max_len = std::min(opts.max_shift_size, n);
    for (std::size_t len = 1; len <= max_len; ++len) {
      for (std::size_t start = 0; start + len <= n; ++start) {
        // The span must equal some reference subsequence that is not already
        // correctly aligned on both sides.
        bool eligible = false;
        for (std::size_t j = 0; j + len <= r.size() && !eligible; ++j) {
          if (!std::equal(cur.begin() + static_cast<std::ptrdiff_t>(start),
                          cur.begin() + static_cast<std::ptrdiff_t>(start + len),
                          r.begin() + static_cast<std::ptrdiff_t>(j))) {
            continue;
          }
          for (std::size_t k = 0; k < len && !eligible; ++k) {
            eligible = herr[start + k] || rerr[j + k];
          }
        }
        if (!eligible) continue;

        const std::size_t lo = start > opts.max_shift_distance ? start - opts.max_shift_distance : 0;
        const std::size_t hi = std::min(n - len, start + opts.max_shift_distance);
        for (std::size_t pos = lo; pos <= hi; ++pos) {
          if (pos == start) continue;
          Seq moved = cur;
          move_span(moved, start, len, pos);
          const std::size_t d = dist(moved);
          if (d >= current) continue;
          ShiftCandidate cand{current - d, start, len, pos > start ? pos - start : start - pos, pos};
          if (!found || better(cand, best)) {
            best = cand;
            found = true;
          }
        }
      }
    }
    if (!found) break;
    move_span(cur, best.start, best.length, best.new_position);
    move_span(provenance, best.start, best.length, best.new_position);
    script.ops.emplace_back(edit::Shift{best.start, best.length, best.new_position});
    ++script.n_edits;
  }

  emit_alignment(cur, r, provenance, ref, script);

  TerOutput out;
  out.script = std::move(script);
  out.result.n_edits = out.script.n_edits;
  out.result.n_shifts = out.script.n_shifts();
  out.result.ref_len = ref.size();
  if (ref.empty()) {
    out.result.score = hyp.empty() ? 0.0 : 1.0;
  } else {
    out.result.score =
        std::min(1.0, static_cast<double>(out.result.n_edits) / static_cast<double>(ref.size()));
  }
  return out;
}

const char* to_string(QualityTag tag) noexcept { return tag == QualityTag::OK ? "OK" : "BAD"; }

WordTags word_tags(const EditScript& script, std::size_t hyp_len) {
  WordTags tags;
  tags.tgt_tags.assign(hyp_len, QualityTag::BAD);
  tags.gap_tags.assign(hyp_len + 1, QualityTag::OK);
  std::vector<bool> seen(hyp_len, false);
  std::size_t gap = 0;

  auto visit = [&](std::size_t h_idx, QualityTag tag) {
    if (h_idx >= hyp_len || seen[h_idx]) {
      fail(Errc::InconsistentScript, "hypothesis index " + std::to_string(h_idx) +
                                         " invalid or consumed twice (hyp_len=" +
                                         std::to_string(hyp_len) + ")");
    }
    seen[h_idx] = true;
    tags.tgt_tags[h_idx] = tag;
    gap = h_idx + 1;
  };

  for (const auto& op : script.ops) {
    if (const auto* m = std::get_if<edit::Match>(&op)) {
      visit(m->h_idx, QualityTag::OK);
    } else if (const auto* s = std::get_if<edit::Substitute>(&op)) {
      visit(s->h_idx, QualityTag::BAD);
    } else if (const auto* d = std::get_if<edit::Delete>(&op)) {
      visit(d->h_idx, QualityTag::BAD);
    } else if (std::holds_alternative<edit::Insert>(op)) {
      tags.gap_tags[gap] = QualityTag::BAD;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    fail(Errc::InconsistentScript, "script leaves hypothesis tokens unaligned");
  }
  return tags;
}

}  // namespace bitextdir
