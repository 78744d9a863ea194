#include "bitextdir/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bitextdir/error.hpp"

namespace bitextdir {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    fail(Errc::LengthMismatch,
         std::string(what) + ": lengths differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "pearson");
  if (x.size() < 2) fail(Errc::EmptyInput, "pearson: need at least 2 observations");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(Errc::ConstantInput, "pearson: constant input sequence");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ConfusionMatrix confusion(std::span<const int> pred, std::span<const int> gold, int positive) {
  require_same_length(pred.size(), gold.size(), "confusion");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == positive, g = gold[i] == positive;
    if (p && g) ++cm.tp;
    else if (p) ++cm.fp;
    else if (g) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

double mcc(const ConfusionMatrix& cm) {
  if (cm.total() == 0) fail(Errc::EmptyInput, "mcc: empty confusion matrix");
  const double tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn), tn = static_cast<double>(cm.tn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

double mcc(std::span<const int> pred, std::span<const int> gold, int positive) {
  require_same_length(pred.size(), gold.size(), "mcc");
  if (pred.empty()) fail(Errc::EmptyInput, "mcc: empty input");
  return mcc(confusion(pred, gold, positive));
}

MacroF1 macro_f1(std::span<const int> pred, std::span<const int> gold, std::span<const int> classes) {
  require_same_length(pred.size(), gold.size(), "macro_f1");
  if (gold.empty() || classes.empty()) fail(Errc::EmptyInput, "macro_f1: empty input");
  MacroF1 out;
  double sum = 0.0;
  for (int label : classes) {
    const auto cm = confusion(pred, gold, label);
    if (cm.tp + cm.fn == 0) {
      fail(Errc::MissingClassInGold, "macro_f1: class " + std::to_string(label) + " absent from gold");
    }
    ClassScores s;
    s.label = label;
    s.precision = cm.tp + cm.fp ? static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp) : 0.0;
    s.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    sum += s.f1;
    out.per_class.push_back(s);
  }
  out.macro_f1 = sum / static_cast<double>(classes.size());
  return out;
}

}  // namespace bitextdir
