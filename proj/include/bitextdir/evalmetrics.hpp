#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bitextdir {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
};

/// Sample Pearson correlation (two-pass, mean-centred). Requires equal lengths
/// of at least 2 and non-constant inputs.
double pearson(std::span<const double> x, std::span<const double> y);

/// Binary confusion counts with `positive` as the positive label.
ConfusionMatrix confusion(std::span<const int> pred, std::span<const int> gold, int positive);

/// Matthews correlation; 0.0 when any denominator factor is zero.
double mcc(const ConfusionMatrix& cm);
double mcc(std::span<const int> pred, std::span<const int> gold, int positive = 1);

struct ClassScores {
  int label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MacroF1 {
  double macro_f1 = 0.0;
  std::vector<ClassScores> per_class;  // in `classes` order
};

/// Unweighted mean of per-class F1 over `classes`. Predictions outside
/// `classes` (e.g. abstentions) are wrong for every class. Every class must
/// occur in `gold`.
MacroF1 macro_f1(std::span<const int> pred, std::span<const int> gold, std::span<const int> classes);

}  // namespace bitextdir
