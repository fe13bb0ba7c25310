// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#include "ipod/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ipod/errors.hpp"

namespace ipod {

namespace {

// Hawkins, Bradu & Kass (1984) artificial benchmark, 75 cases.  Cases 1-10
// are bad leverage points (the planted outliers), 11-14 good leverage points.
constexpr const char* kHbkCsv = R"(x1,x2,x3,y
10.1,19.6,28.3,9.7
9.5,20.5,28.9,10.1
10.7,20.2,31.0,10.3
9.9,21.5,31.7,9.5
10.3,21.1,31.1,10.0
10.8,20.4,29.2,10.0
10.5,20.9,29.1,10.8
9.9,19.6,28.8,10.3
9.7,20.7,31.0,9.6
9.3,19.7,30.3,9.9
11.0,24.0,35.0,-0.2
12.0,23.0,37.0,-0.4
12.0,26.0,34.0,0.7
11.0,34.0,34.0,0.1
3.4,2.9,2.1,-0.4
3.1,2.2,0.3,0.6
0.0,1.6,0.2,-0.2
2.3,1.6,2.0,0.0
0.8,2.9,1.6,0.1
3.1,3.4,2.2,0.4
2.6,2.2,1.9,0.9
0.4,3.2,1.9,0.3
2.0,2.3,0.8,-0.8
1.3,2.3,0.5,0.7
1.0,0.0,0.4,-0.3
0.9,3.3,2.5,-0.8
3.3,2.5,2.9,-0.7
1.8,0.8,2.0,0.3
1.2,0.9,0.8,0.3
1.2,0.7,3.4,-0.3
3.1,1.4,1.0,0.0
0.5,2.4,0.3,-0.4
1.5,3.1,1.5,-0.6
0.4,0.0,0.7,-0.7
3.1,2.4,3.0,0.3
1.1,2.2,2.7,-1.0
0.1,3.0,2.6,-0.6
1.5,1.2,0.2,0.9
2.1,0.0,1.2,-0.7
0.5,2.0,1.2,-0.5
3.4,1.6,2.9,-0.1
0.3,1.0,2.7,-0.7
0.1,3.3,0.9,0.6
1.8,0.5,3.2,-0.7
1.9,0.1,0.6,-0.5
1.8,0.5,3.0,-0.4
3.0,0.1,0.8,-0.9
3.1,1.6,3.0,0.1
3.1,2.5,1.9,0.9
2.1,2.8,2.9,-0.4
2.3,1.5,0.4,0.7
3.3,0.6,1.2,-0.5
0.3,0.4,3.3,0.7
1.1,3.0,0.3,0.7
0.5,2.4,0.9,0.0
1.8,3.2,0.9,0.1
1.8,0.7,0.7,0.7
2.4,3.4,1.5,-0.1
1.6,2.1,3.0,-0.3
0.3,1.5,3.3,-0.9
0.4,3.4,3.0,-0.3
0.9,0.1,0.3,0.6
1.1,2.7,0.2,-0.3
2.8,3.0,2.9,-0.5
2.0,0.7,2.7,0.6
0.2,1.8,0.8,-0.9
1.6,2.0,1.2,-0.7
0.1,0.0,1.1,0.6
2.0,0.6,0.3,0.2
1.0,2.2,2.9,0.7
2.2,2.5,2.3,0.2
0.6,2.0,1.5,-0.2
0.3,1.7,2.2,0.4
0.0,2.2,1.6,-0.9
0.3,0.4,2.6,0.2
)";

// Number of Belgian phone calls (tens of millions) per year; years 64-69
// were recorded in total minutes instead, producing a run of gross outliers.
constexpr const char* kTelephoneCsv = R"(year,calls
50,0.44
51,0.47
52,0.47
53,0.59
54,0.66
55,0.73
56,0.81
57,0.88
58,1.06
59,1.20
60,1.35
61,1.49
62,1.61
63,2.12
64,11.90
65,12.40
66,14.20
67,15.90
68,18.20
69,21.20
70,4.30
71,2.40
72,2.70
73,2.90
)";

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Split one CSV record, honoring double-quoted fields.
std::vector<std::string> split_record(const std::string& line, std::size_t row_for_errors) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted)
    throw IngestError("unterminated quote in row " + std::to_string(row_for_errors));
  fields.push_back(field);
  return fields;
}

double parse_number(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string s = strip(raw);
  if (s.empty())
    throw IngestError("missing value at row " + std::to_string(row) + ", column " +
                      std::to_string(col + 1));
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw IngestError("non-numeric cell '" + s + "' at row " + std::to_string(row) + ", column " +
                      std::to_string(col + 1));
  return value;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& name, const std::string& y_column) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_record(line, 1);
  for (std::string& h : header) h = strip(h);
  const std::size_t n_cols = header.size();
  if (n_cols < 2) throw IngestError("need at least one predictor and one response column");

  // Resolve the response column: name match first, then numeric index.
  std::size_t y_index = n_cols - 1;
  if (!y_column.empty()) {
    auto it = std::find(header.begin(), header.end(), y_column);
    if (it != header.end()) {
      y_index = static_cast<std::size_t>(it - header.begin());
    } else {
      int idx = -1;
      auto [ptr, ec] = std::from_chars(y_column.data(), y_column.data() + y_column.size(), idx);
      if (ec != std::errc() || ptr != y_column.data() + y_column.size() || idx < 0 ||
          static_cast<std::size_t>(idx) >= n_cols)
        throw IngestError("response column '" + y_column + "' not found in header");
      y_index = static_cast<std::size_t>(idx);
    }
  }

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strip(line).empty()) continue;
    std::vector<std::string> fields = split_record(line, row_number);
    if (fields.size() != n_cols)
      throw IngestError("row " + std::to_string(row_number) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(n_cols));
    std::vector<double> values(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) values[c] = parse_number(fields[c], row_number, c);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw IngestError("no data rows");

  Dataset data;
  data.name = name;
  data.y_name = header[y_index];
  for (std::size_t c = 0; c < n_cols; ++c)
    if (c != y_index) data.x_names.push_back(header[c]);
  data.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_cols - 1));
  data.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Eigen::Index xc = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (c == y_index)
        data.y[static_cast<Eigen::Index>(r)] = rows[r][c];
      else
        data.X(static_cast<Eigen::Index>(r), xc++) = rows[r][c];
    }
  }
  return data;
}

Dataset ingest_csv(const std::string& path, const std::string& y_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path, y_column);
}

RegressionProblem to_problem(const Dataset& data, bool intercept) {
  return RegressionProblem::make(data.X, data.y, intercept);
}

const std::vector<std::string>& builtin_dataset_names() {
  static const std::vector<std::string> names = {"hbk", "telephone"};
  return names;
}

Dataset builtin_dataset(const std::string& name) {
  if (name == "hbk") {
    Dataset d = parse_csv(kHbkCsv, "hbk", "y");
    d.provenance = "Hawkins, Bradu & Kass (1984) artificial data; 75 cases, 3 predictors";
    return d;
  }
  if (name == "telephone") {
    Dataset d = parse_csv(kTelephoneCsv, "telephone", "calls");
    d.provenance = "Belgian phone calls 1950-1973; years 64-69 recorded in the wrong unit";
    return d;
  }
  throw IngestError("unknown builtin dataset '" + name + "'");
}

Dataset load_dataset(const std::string& name_or_path, const std::string& y_column) {
  const auto& names = builtin_dataset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return builtin_dataset(name_or_path);
  return ingest_csv(name_or_path, y_column);
}

}  // namespace ipod
