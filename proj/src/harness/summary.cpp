// Copyright 2026 The gaitbo Authors
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

#include "gaitbo/harness/summary.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "gaitbo/errors.h"

namespace gaitbo::harness {

const StrategySummary* Summary::find(Strategy s) const {
  for (const auto& st : strategies) {
    if (st.strategy == s) return &st;
  }
  return nullptr;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw ParameterError("quantile of an empty set");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

std::map<int, std::vector<double>> curves_by_run(const std::vector<RunResult>& results, Strategy s) {
  std::map<int, std::vector<double>> out;
  for (const auto& r : results) {
    if (r.strategy == s) out[r.run_id] = r.history.best_so_far;
  }
  return out;
}

Summary summarize(const std::vector<RunResult>& results, std::optional<double> optimum) {
  if (results.empty()) throw ParameterError("nothing to summarize");
  Summary out;
  out.optimum = optimum;
  for (Strategy s : all_strategies()) {
    std::vector<const RunResult*> rs;
    for (const auto& r : results) {
      if (r.strategy == s) rs.push_back(&r);
    }
    if (rs.empty()) continue;
    StrategySummary st;
    st.strategy = s;
    st.runs = static_cast<int>(rs.size());
    std::size_t len = 0;
    for (const auto* r : rs) {
      len = std::max(len, r->history.best_so_far.size());
      if (r->success) ++st.successes;
      if (r->first_success > 0) st.first_success.push_back(r->first_success);
    }
    st.success_rate = static_cast<double>(st.successes) / static_cast<double>(st.runs);
    for (std::size_t t = 0; t < len; ++t) {
      std::vector<double> v;
      for (const auto* r : rs) {
        if (t < r->history.best_so_far.size()) v.push_back(r->history.best_so_far[t]);
      }
      CurvePoint p;
      p.trial = static_cast<int>(t) + 1;
      p.n = static_cast<int>(v.size());
      double sum = 0.0;
      for (double x : v) sum += x;
      p.mean = sum / static_cast<double>(v.size());
      p.median = quantile(v, 0.5);
      p.q25 = quantile(v, 0.25);
      p.q75 = quantile(v, 0.75);
      p.min = *std::min_element(v.begin(), v.end());
      p.max = *std::max_element(v.begin(), v.end());
      st.curve.push_back(p);
    }
    out.strategies.push_back(std::move(st));
  }
  return out;
}

void write_curve_csv(std::ostream& out, const Summary& s) {
  out.precision(17);
  out << "strategy,trial,n,mean,median,q25,q75,min,max\n";
  for (const auto& st : s.strategies) {
    for (const auto& p : st.curve) {
      out << to_string(st.strategy) << ',' << p.trial << ',' << p.n << ',' << p.mean << ','
          << p.median << ',' << p.q25 << ',' << p.q75 << ',' << p.min << ',' << p.max << '\n';
    }
  }
  if (s.optimum) out << "optimum,0,0," << *s.optimum << ',' << *s.optimum << ",,,,\n";
}

void write_success_csv(std::ostream& out, const Summary& s) {
  out.precision(17);
  out << "strategy,runs,successes,rate,median_first_success\n";
  for (const auto& st : s.strategies) {
    out << to_string(st.strategy) << ',' << st.runs << ',' << st.successes << ',' << st.success_rate
        << ',';
    if (!st.first_success.empty()) {
      std::vector<double> v(st.first_success.begin(), st.first_success.end());
      out << quantile(v, 0.5);
    }
    out << '\n';
  }
}

void write_convergence_svg(std::ostream& out, const Summary& s, const std::string& title) {
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};
  const double w = 720, h = 440, ml = 70, mr = 150, mt = 40, mb = 50;
  int max_trial = 1;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& st : s.strategies) {
    for (const auto& p : st.curve) {
      max_trial = std::max(max_trial, p.trial);
      lo = std::min(lo, p.q25);
      hi = std::max(hi, p.q75);
    }
  }
  if (s.optimum) {
    lo = std::min(lo, *s.optimum);
    hi = std::max(hi, *s.optimum);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto px = [&](double t) { return ml + (w - ml - mr) * (t - 1.0) / std::max(1, max_trial - 1); };
  auto py = [&](double v) { return mt + (h - mt - mb) * (hi - v) / (hi - lo); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
        << std::setprecision(3) << v << "</text>\n";
    const double t = 1.0 + (max_trial - 1) * k / 4.0;
    out << "<text x=\"" << px(t) << "\" y=\"" << h - mb + 16 << "\" text-anchor=\"middle\">"
        << std::lround(t) << "</text>\n";
  }
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\">trial</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + h - mb) / 2 << "\" transform=\"rotate(-90 16 "
      << (mt + h - mb) / 2 << ")\" text-anchor=\"middle\">best cost so far</text>\n";

  for (std::size_t i = 0; i < s.strategies.size(); ++i) {
    const auto& st = s.strategies[i];
    const char* c = kColors[static_cast<int>(st.strategy) % 5];
    std::ostringstream band, line;
    band << std::setprecision(6);
    line << std::setprecision(6);
    for (const auto& p : st.curve) band << px(p.trial) << ',' << py(p.q75) << ' ';
    for (auto it = st.curve.rbegin(); it != st.curve.rend(); ++it) band << px(it->trial) << ',' << py(it->q25) << ' ';
    for (const auto& p : st.curve) line << px(p.trial) << ',' << py(p.median) << ' ';
    out << "<polygon points=\"" << band.str() << "\" fill=\"" << c << "\" fill-opacity=\"0.15\"/>\n";
    out << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << c
        << "\" stroke-width=\"2\"/>\n";
    const double ly = mt + 18.0 * static_cast<double>(i);
    out << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << w - mr + 30 << "\" y2=\""
        << ly << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << w - mr + 36 << "\" y=\"" << ly + 4 << "\">" << to_string(st.strategy)
        << "</text>\n";
  }
  if (s.optimum) {
    out << "<line x1=\"" << ml << "\" y1=\"" << py(*s.optimum) << "\" x2=\"" << w - mr << "\" y2=\""
        << py(*s.optimum) << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
    const double ly = mt + 18.0 * static_cast<double>(s.strategies.size());
    out << "<text x=\"" << w - mr + 10 << "\" y=\"" << ly + 4 << "\">estimated optimum</text>\n";
  }
  out << "</svg>\n";
}

void write_summary_files(const std::string& dir, const Summary& s, const std::string& title) {
  std::filesystem::create_directories(dir);
  std::ofstream a(std::filesystem::path(dir) / "summary.csv");
  write_curve_csv(a, s);
  std::ofstream b(std::filesystem::path(dir) / "success.csv");
  write_success_csv(b, s);
  std::ofstream c(std::filesystem::path(dir) / "convergence.svg");
  write_convergence_svg(c, s, title);
  if (!a || !b || !c) throw FormatError("failed to write summary files in " + dir);
}

}  // namespace gaitbo::harness
