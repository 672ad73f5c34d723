// Copyright 2026 The Telechan Authors
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

#include "telechan/records_io.hpp"

#include <charconv>
#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include "json.hpp"

namespace telechan {

namespace {

struct Column {
  std::string name;
  std::function<double(const SweepRecord&)> get;
  std::function<void(SweepRecord&, double)> set;
};

Column real_column(std::string name, double SweepRecord::*field) {
  return {std::move(name), [field](const SweepRecord& r) { return r.*field; },
          [field](SweepRecord& r, double v) { r.*field = v; }};
}

std::vector<Column> all_columns() {
  std::vector<Column> cols;
  cols.push_back(real_column("delta", &SweepRecord::delta));
  cols.push_back(real_column("t", &SweepRecord::t));
  cols.push_back(real_column("F", &SweepRecord::F));
  cols.push_back(real_column("C", &SweepRecord::C));
  cols.push_back(real_column("P", &SweepRecord::P));
  for (std::size_t i = 0; i < 4; ++i) {
    cols.push_back({"chi" + std::to_string(i), [i](const SweepRecord& r) { return r.chi[i]; },
                    [i](SweepRecord& r, double v) { r.chi[i] = v; }});
  }
  cols.push_back({"m_star", [](const SweepRecord& r) { return static_cast<double>(r.m_star); },
                  [](SweepRecord& r, double v) {
                    if (v != std::floor(v) || v < 0.0 || v > 3.0) throw CsvParseError("m_star must be 0..3");
                    r.m_star = static_cast<int>(v);
                  }});
  cols.push_back(real_column("delta_x", &SweepRecord::delta_x));
  cols.push_back(real_column("delta_y", &SweepRecord::delta_y));
  cols.push_back(real_column("delta_z", &SweepRecord::delta_z));
  cols.push_back(real_column("coeff_x", &SweepRecord::coeff_x));
  cols.push_back(real_column("coeff_y", &SweepRecord::coeff_y));
  cols.push_back(real_column("coeff_z", &SweepRecord::coeff_z));
  cols.push_back(real_column("engine_disagreement", &SweepRecord::engine_disagreement));
  return cols;
}

std::vector<std::string> names_for(Quantity q) {
  switch (q) {
    case Quantity::F: return {"F"};
    case Quantity::C: return {"C"};
    case Quantity::P: return {"P"};
    case Quantity::Chi: return {"chi0", "chi1", "chi2", "chi3", "m_star"};
    case Quantity::Shrink: return {"delta_x", "delta_y", "delta_z"};
    case Quantity::BlochCoeff: return {"coeff_x", "coeff_y", "coeff_z"};
  }
  return {};
}

std::vector<Column> selected_columns(const std::vector<Quantity>& quantities, Engine engine) {
  const auto names = csv_columns(quantities, engine);
  std::vector<Column> out;
  for (const auto& c : all_columns()) {
    if (std::find(names.begin(), names.end(), c.name) != names.end()) out.push_back(c);
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> csv_columns(const std::vector<Quantity>& quantities, Engine engine) {
  std::vector<std::string> wanted{"delta", "t"};
  for (Quantity q : quantities) {
    for (auto& n : names_for(q)) wanted.push_back(std::move(n));
  }
  if (engine == Engine::Both) wanted.emplace_back("engine_disagreement");
  std::vector<std::string> ordered;
  for (const auto& c : all_columns()) {
    if (std::find(wanted.begin(), wanted.end(), c.name) != wanted.end()) ordered.push_back(c.name);
  }
  return ordered;
}

std::string records_to_csv(const std::vector<SweepRecord>& records, const std::vector<Quantity>& quantities,
                           Engine engine) {
  const auto cols = selected_columns(quantities, engine);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i].name;
  }
  out += '\n';
  for (const auto& r : records) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      out += format_double(cols[i].get(r));
    }
    out += '\n';
  }
  return out;
}

std::vector<SweepRecord> records_from_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw CsvParseError("CSV has no header");

  std::map<std::string, Column> by_name;
  for (auto& c : all_columns()) by_name.emplace(c.name, c);
  std::vector<const Column*> header;
  for (auto name : split(lines[0], ',')) {
    const auto it = by_name.find(std::string(name));
    if (it == by_name.end()) throw CsvParseError("unknown CSV column: " + std::string(name));
    header.push_back(&it->second);
  }

  SweepRecord blank;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& [name, col] : by_name) {
    if (name != "m_star") col.set(blank, nan);
  }
  blank.m_star = -1;

  std::vector<SweepRecord> out;
  out.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto cells = split(lines[li], ',');
    if (cells.size() != header.size()) {
      throw CsvParseError("row " + std::to_string(li) + " has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(header.size()));
    }
    SweepRecord r = blank;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      try {
        header[i]->set(r, parse_double(cells[i]));
      } catch (const std::invalid_argument& e) {
        throw CsvParseError("row " + std::to_string(li) + ": " + e.what());
      }
    }
    out.push_back(r);
  }
  return out;
}

std::string records_to_json(const SweepSpec& spec, const std::vector<SweepRecord>& records) {
  using nlohmann::ordered_json;
  ordered_json meta;
  meta["bell"] = spec.initial_bell;
  meta["env"] = std::string(to_string(spec.env.kind));
  meta["gamma"] = spec.env.gamma;
  meta["j"] = spec.params.j;
  meta["delta"] = spec.params.delta;
  meta["t_grid"] = spec.t_grid;
  meta["delta_grid"] = spec.deltas();
  meta["engine"] = std::string(to_string(spec.engine));
  ordered_json qs = ordered_json::array();
  for (Quantity q : spec.quantities) qs.push_back(std::string(to_string(q)));
  meta["quantities"] = qs;
  meta["m"] = spec.m_override ? ordered_json(*spec.m_override) : ordered_json(nullptr);
  meta["step"] = spec.step ? ordered_json(*spec.step) : ordered_json(nullptr);

  const auto cols = selected_columns(spec.quantities, spec.engine);
  ordered_json rows = ordered_json::array();
  for (const auto& r : records) {
    ordered_json row;
    for (const auto& c : cols) {
      if (c.name == "m_star") {
        row[c.name] = r.m_star;
      } else {
        row[c.name] = c.get(r);
      }
    }
    rows.push_back(std::move(row));
  }
  ordered_json doc;
  doc["meta"] = std::move(meta);
  doc["records"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace telechan
