// Copyright 2026 The locmt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "locmt/error.hpp"
#include "locmt/metrics.hpp"
#include "locmt/util.hpp"

namespace locmt::metrics {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

std::int64_t ConfusionMatrix::row_sum(std::size_t i) const {
  std::int64_t t = 0;
  for (auto c : counts.at(i)) t += c;
  return t;
}

std::int64_t ConfusionMatrix::col_sum(std::size_t j) const {
  std::int64_t t = 0;
  for (const auto& row : counts) t += row.at(j);
  return t;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i].at(i);
  return t;
}

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

ClassReport report_from_confusion(ConfusionMatrix cm) {
  const std::size_t k = cm.classes.size();
  if (cm.counts.size() != k) throw ValidationError("confusion matrix has " + std::to_string(cm.counts.size()) + " rows for " + std::to_string(k) + " classes");
  for (const auto& row : cm.counts) {
    if (row.size() != k) throw ValidationError("confusion matrix is not square");
    for (auto c : row) {
      if (c < 0) throw ValidationError("negative confusion count");
    }
  }
  ClassReport r;
  double f_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    ClassMetrics m;
    m.label = cm.classes[i];
    m.support = cm.row_sum(i);
    m.precision = ratio(cm.counts[i][i], cm.col_sum(i));
    m.recall = ratio(cm.counts[i][i], m.support);
    m.f1 = harmonic(m.precision, m.recall);
    f_sum += m.f1;
    r.per_class.push_back(m);
  }
  r.accuracy = ratio(cm.trace(), cm.total());
  r.macro_f1 = k ? f_sum / static_cast<double>(k) : 0.0;
  r.confusion = std::move(cm);
  return r;
}

ClassReport classification_report(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                                  const std::vector<std::string>& classes) {
  if (truth.size() != predicted.size()) {
    throw ValidationError("truth/prediction length mismatch: " + std::to_string(truth.size()) + " vs " +
                          std::to_string(predicted.size()));
  }
  auto index_of = [&](const std::string& label) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw ValidationError("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - classes.begin());
  };
  ConfusionMatrix cm{classes, std::vector<std::vector<std::int64_t>>(classes.size(), std::vector<std::int64_t>(classes.size(), 0))};
  for (std::size_t i = 0; i < truth.size(); ++i) ++cm.counts[index_of(truth[i])][index_of(predicted[i])];
  return report_from_confusion(std::move(cm));
}

Json to_json(const ClassReport& r) {
  Json classes = Json::array();
  for (const auto& m : r.per_class) {
    classes.push_back({{"label", m.label}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}});
  }
  return Json{{"classes", classes},
              {"accuracy", r.accuracy},
              {"macro_f1", r.macro_f1},
              {"confusion", {{"classes", r.confusion.classes}, {"counts", r.confusion.counts}}}};
}

ClassReport class_report_from_json(const Json& j) {
  ClassReport r;
  for (const auto& c : j.at("classes")) {
    r.per_class.push_back({c.at("label").get<std::string>(), c.at("precision").get<double>(), c.at("recall").get<double>(),
                           c.at("f1").get<double>(), c.at("support").get<std::int64_t>()});
  }
  r.accuracy = j.at("accuracy").get<double>();
  r.macro_f1 = j.value("macro_f1", 0.0);
  if (j.contains("confusion")) {
    r.confusion.classes = j["confusion"].at("classes").get<std::vector<std::string>>();
    r.confusion.counts = j["confusion"].at("counts").get<std::vector<std::vector<std::int64_t>>>();
  }
  return r;
}

std::string render_text(const ClassReport& r) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %9s %9s %9s %9s\n", "class", "precision", "recall", "f1", "support");
  os << line;
  for (const auto& m : r.per_class) {
    std::snprintf(line, sizeof line, "%-12s %9.2f %9.2f %9.2f %9lld\n", m.label.c_str(), round_half_up(m.precision, 2),
                  round_half_up(m.recall, 2), round_half_up(m.f1, 2), static_cast<long long>(m.support));
    os << line;
  }
  std::snprintf(line, sizeof line, "%-12s %9.2f\n%-12s %9.2f\n", "accuracy", round_half_up(r.accuracy, 2), "macro-f1",
                round_half_up(r.macro_f1, 2));
  os << line;
  if (!r.confusion.classes.empty()) {
    os << "confusion (rows = true, columns = predicted):\n";
    std::snprintf(line, sizeof line, "%-12s", "");
    os << line;
    for (const auto& c : r.confusion.classes) {
      std::snprintf(line, sizeof line, " %9s", c.c_str());
      os << line;
    }
    os << "\n";
    for (std::size_t i = 0; i < r.confusion.counts.size(); ++i) {
      std::snprintf(line, sizeof line, "%-12s", r.confusion.classes[i].c_str());
      os << line;
      for (auto c : r.confusion.counts[i]) {
        std::snprintf(line, sizeof line, " %9lld", static_cast<long long>(c));
        os << line;
      }
      os << "\n";
    }
  }
  return os.str();
}

std::vector<Violation> validate_report_consistency(const ClassReport& report, double tolerance) {
  std::vector<Violation> out;
  auto check = [&](const std::string& where, const std::string& what, double reported, double expected) {
    if (!(std::fabs(reported - expected) <= tolerance)) {
      out.push_back({where, what + " " + fmt(reported) + " differs from " + fmt(expected)});
    }
  };
  auto in_unit = [&](const std::string& where, const std::string& what, double v) {
    if (!(v >= 0.0 && v <= 1.0)) out.push_back({where, what + " " + fmt(v) + " outside [0,1]"});
  };

  for (const auto& m : report.per_class) {
    in_unit(m.label, "precision", m.precision);
    in_unit(m.label, "recall", m.recall);
    in_unit(m.label, "f1", m.f1);
    check(m.label, "f1", m.f1, harmonic(m.precision, m.recall));
  }
  if (report.per_class.empty()) return out;
  in_unit("overall", "accuracy", report.accuracy);

  const auto& cm = report.confusion;
  if (cm.classes.empty()) return out;
  const std::size_t k = cm.classes.size();
  if (cm.counts.size() != k || std::any_of(cm.counts.begin(), cm.counts.end(), [&](const auto& row) { return row.size() != k; })) {
    out.push_back({"confusion", "matrix dimensions do not match " + std::to_string(k) + " classes"});
    return out;
  }
  if (report.per_class.size() != k) {
    out.push_back({"confusion", "report has " + std::to_string(report.per_class.size()) + " classes, matrix has " + std::to_string(k)});
    return out;
  }
  check("overall", "accuracy", report.accuracy, ratio(cm.trace(), cm.total()));
  for (std::size_t i = 0; i < k; ++i) {
    const auto& m = report.per_class[i];
    if (m.label != cm.classes[i]) out.push_back({m.label, "class order differs from confusion matrix ('" + cm.classes[i] + "')"});
    if (m.support != cm.row_sum(i)) {
      out.push_back({m.label, "support " + std::to_string(m.support) + " differs from row sum " + std::to_string(cm.row_sum(i))});
    }
    check(m.label, "precision", m.precision, ratio(cm.counts[i][i], cm.col_sum(i)));
    check(m.label, "recall", m.recall, ratio(cm.counts[i][i], cm.row_sum(i)));
  }
  return out;
}

std::vector<Violation> validate_report_consistency(const ReportedMetrics& reported, double tolerance) {
  std::vector<Violation> out;
  const double h = reported.input_rounding;
  auto where = [&](const std::string& label) { return reported.name.empty() ? label : reported.name + "/" + label; };
  auto in_unit = [&](const std::string& w, const std::string& what, const std::optional<double>& v) {
    if (v && !(*v >= 0.0 && *v <= 1.0)) out.push_back({w, what + " " + fmt(*v) + " outside [0,1]"});
  };

  for (const auto& c : reported.classes) {
    in_unit(where(c.label), "precision", c.precision);
    in_unit(where(c.label), "recall", c.recall);
    in_unit(where(c.label), "f1", c.f1);
    if (!c.precision || !c.recall || !c.f1) continue;
    const double lo = harmonic(std::max(*c.precision - h, 0.0), std::max(*c.recall - h, 0.0));
    const double hi = harmonic(std::min(*c.precision + h, 1.0), std::min(*c.recall + h, 1.0));
    if (*c.f1 < lo - tolerance || *c.f1 > hi + tolerance) {
      out.push_back({where(c.label), "f1 " + fmt(*c.f1) + " outside [" + fmt(lo) + ", " + fmt(hi) + "] implied by P=" +
                                         fmt(*c.precision) + ", R=" + fmt(*c.recall)});
    }
  }
  in_unit(where("overall"), "accuracy", reported.accuracy);

  const bool binary_f = reported.classes.size() == 2 && reported.classes[0].f1 && reported.classes[1].f1;
  if (reported.accuracy && binary_f) {
    // odds(acc) = sum over both classes of F/(2(1-F)); increasing in each F.
    auto odds_term = [](double f) { return f >= 1.0 ? INFINITY : f / (2.0 * (1.0 - f)); };
    auto acc_of = [&](double f1, double f2) {
      const double x = odds_term(std::clamp(f1, 0.0, 1.0)) + odds_term(std::clamp(f2, 0.0, 1.0));
      return std::isinf(x) ? 1.0 : x / (1.0 + x);
    };
    const double f1 = *reported.classes[0].f1;
    const double f2 = *reported.classes[1].f1;
    const double lo = acc_of(f1 - h, f2 - h);
    const double hi = acc_of(f1 + h, f2 + h);
    if (*reported.accuracy < lo - tolerance || *reported.accuracy > hi + tolerance) {
      out.push_back({where("overall"), "accuracy " + fmt(*reported.accuracy) + " outside [" + fmt(lo) + ", " + fmt(hi) +
                                           "] implied by the per-class F scores"});
    }
  }
  return out;
}

}  // namespace locmt::metrics
