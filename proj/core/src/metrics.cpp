// Copyright 2026 The efnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "efnet/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <numeric>
#include <sstream>

#include "efnet/csv.hpp"
#include "efnet/error.hpp"
#include "efnet/nn.hpp"

namespace efnet {

ConfusionMatrix ConfusionMatrix::from_counts(
    const std::vector<std::vector<std::size_t>>& counts) {
  ConfusionMatrix cm(counts.size());
  for (std::size_t t = 0; t < counts.size(); ++t) {
    if (counts[t].size() != counts.size()) {
      throw UsageError("confusion matrix must be square");
    }
    for (std::size_t p = 0; p < counts.size(); ++p) {
      cm.counts_(t, p) = counts[t][p];
    }
  }
  return cm;
}

void ConfusionMatrix::add(int truth, int predicted, std::size_t count) {
  const auto k = static_cast<int>(class_count());
  if (truth < 0 || truth >= k || predicted < 0 || predicted >= k) {
    throw DataError("class index outside [0, " + std::to_string(k) + ")");
  }
  counts_(static_cast<std::size_t>(truth), static_cast<std::size_t>(predicted)) +=
      count;
}

std::size_t ConfusionMatrix::total() const noexcept {
  const auto v = counts_.data();
  return std::accumulate(v.begin(), v.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < class_count(); ++i) sum += counts_(i, i);
  return sum;
}

std::size_t ConfusionMatrix::row_total(std::size_t truth) const {
  const auto r = counts_.row(truth);
  return std::accumulate(r.begin(), r.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::column_total(std::size_t predicted) const {
  std::size_t sum = 0;
  for (std::size_t t = 0; t < class_count(); ++t) sum += counts_(t, predicted);
  return sum;
}

std::optional<double> auroc_ovr(std::span<const double> scores,
                                std::span<const bool> positive) {
  if (scores.size() != positive.size()) {
    throw UsageError("AUROC: score and label lengths differ");
  }
  const std::size_t n = scores.size();
  const auto pos = static_cast<std::size_t>(
      std::count(positive.begin(), positive.end(), true));
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) return std::nullopt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // sum of 1-based average ranks over positives; every value is a multiple
  // of 1/2, so the sum is exact
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (positive[order[t]]) rank_sum += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

EvalReport evaluate_confusion(const ConfusionMatrix& confusion) {
  const std::size_t k = confusion.class_count();
  EvalReport report;
  report.confusion = confusion;
  report.samples = confusion.total();
  if (report.samples == 0) throw DataError("cannot evaluate zero samples");
  report.accuracy = static_cast<double>(confusion.trace()) /
                    static_cast<double>(report.samples);
  report.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto& m = report.per_class[c];
    const std::size_t tp = confusion.at(c, c);
    const std::size_t predicted = confusion.column_total(c);
    m.support = confusion.row_total(c);
    m.precision = predicted == 0 ? 0.0
                                 : static_cast<double>(tp) /
                                       static_cast<double>(predicted);
    m.recall = m.support == 0 ? 0.0
                              : static_cast<double>(tp) /
                                    static_cast<double>(m.support);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    const double share = static_cast<double>(m.support) /
                         static_cast<double>(report.samples);
    report.macro.precision += m.precision;
    report.macro.recall += m.recall;
    report.macro.f1 += m.f1;
    report.weighted.precision += share * m.precision;
    report.weighted.recall += share * m.recall;
    report.weighted.f1 += share * m.f1;
  }
  report.macro.precision /= static_cast<double>(k);
  report.macro.recall /= static_cast<double>(k);
  report.macro.f1 /= static_cast<double>(k);
  return report;
}

EvalReport evaluate(const Matrix& probabilities, std::span<const int> labels) {
  const std::size_t k = probabilities.cols();
  if (labels.size() != probabilities.rows()) {
    throw DataError("evaluate: " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(probabilities.rows()) +
                    " rows");
  }
  if (labels.empty()) throw DataError("cannot evaluate zero samples");
  ConfusionMatrix confusion(k);
  const auto predicted = argmax_rows(probabilities);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    confusion.add(labels[i], predicted[i]);
  }
  EvalReport report = evaluate_confusion(confusion);

  std::vector<double> scores(labels.size());
  std::unique_ptr<bool[]> positive(new bool[labels.size()]);
  double auroc_sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      scores[i] = probabilities(i, c);
      positive[i] = static_cast<std::size_t>(labels[i]) == c;
    }
    report.per_class[c].auroc = auroc_ovr(
        scores, std::span<const bool>(positive.get(), labels.size()));
    if (report.per_class[c].auroc) {
      auroc_sum += *report.per_class[c].auroc;
      ++defined;
    }
  }
  if (defined > 0) report.auroc_macro = auroc_sum / static_cast<double>(defined);
  return report;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report,
                              const std::vector<std::string>& class_labels) {
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    per_class.push_back({{"label", class_labels.at(c)},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support},
                         {"auroc", optional_json(m.auroc)}});
  }
  nlohmann::json confusion = nlohmann::json::array();
  for (std::size_t t = 0; t < report.confusion.class_count(); ++t) {
    std::vector<std::size_t> row;
    for (std::size_t p = 0; p < report.confusion.class_count(); ++p) {
      row.push_back(report.confusion.at(t, p));
    }
    confusion.push_back(row);
  }
  return {{"samples", report.samples},
          {"accuracy", report.accuracy},
          {"macro",
           {{"precision", report.macro.precision},
            {"recall", report.macro.recall},
            {"f1", report.macro.f1}}},
          {"weighted",
           {{"precision", report.weighted.precision},
            {"recall", report.weighted.recall},
            {"f1", report.weighted.f1}}},
          {"auroc_macro", optional_json(report.auroc_macro)},
          {"per_class", std::move(per_class)},
          {"confusion", std::move(confusion)}};
}

std::string format_report(const EvalReport& report,
                          const std::vector<std::string>& class_labels) {
  std::ostringstream out;
  out << "samples            " << report.samples << '\n'
      << "accuracy           " << fixed(report.accuracy) << '\n'
      << "precision weighted " << fixed(report.weighted.precision)
      << "  macro " << fixed(report.macro.precision) << '\n'
      << "recall    weighted " << fixed(report.weighted.recall) << "  macro "
      << fixed(report.macro.recall) << '\n'
      << "f1        weighted " << fixed(report.weighted.f1) << "  macro "
      << fixed(report.macro.f1) << '\n'
      << "auroc     macro    "
      << (report.auroc_macro ? fixed(*report.auroc_macro) : "n/a") << '\n';
  out << "per class (precision recall f1 support auroc):\n";
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    out << "  " << class_labels.at(c) << ": " << fixed(m.precision) << ' '
        << fixed(m.recall) << ' ' << fixed(m.f1) << ' ' << m.support << ' '
        << (m.auroc ? fixed(*m.auroc) : "n/a") << '\n';
  }
  return out.str();
}

std::string confusion_to_csv(const ConfusionMatrix& confusion,
                             const std::vector<std::string>& class_labels) {
  std::ostringstream out;
  CsvRecord header = {"true/predicted"};
  for (std::size_t c = 0; c < confusion.class_count(); ++c) {
    header.push_back(class_labels.at(c));
  }
  write_csv_record(out, header);
  for (std::size_t t = 0; t < confusion.class_count(); ++t) {
    CsvRecord row = {class_labels.at(t)};
    for (std::size_t p = 0; p < confusion.class_count(); ++p) {
      row.push_back(std::to_string(confusion.at(t, p)));
    }
    write_csv_record(out, row);
  }
  return out.str();
}

}  // namespace efnet
