// Copyright 2026 The qst Authors
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

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string_view>

#include "qst/povm.hpp"

namespace qst {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "design vectors, line " << line << ": " << what;
  throw ParseError(os.str());
}

double parse_real(std::string_view token, std::size_t line) {
  token = trim(token);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    fail(line, "invalid number '" + std::string(token) + "'");
  }
  return value;
}

long parse_count(std::string_view field, std::string_view key, std::size_t line) {
  field = trim(field);
  if (field.substr(0, key.size()) != key || field.size() == key.size()) {
    fail(line, "header must read 'dim=<d> count=<K>'");
  }
  const auto digits = field.substr(key.size());
  long value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || value < 1) {
    fail(line, "header value '" + std::string(digits) + "' is not a positive integer");
  }
  return value;
}

}  // namespace

DesignVectors parse_design_vectors(std::istream& in) {
  DesignVectors out;
  long count = -1;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (count < 0) {
      const auto space = line.find_first_of(" \t");
      if (space == std::string_view::npos) fail(line_no, "header must read 'dim=<d> count=<K>'");
      out.dim = parse_count(line.substr(0, space), "dim=", line_no);
      count = parse_count(line.substr(space + 1), "count=", line_no);
      continue;
    }
    ComplexVector v(out.dim);
    Eigen::Index entries = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      const auto stop = std::min(line.find(';', start), line.size());
      const auto pair = line.substr(start, stop - start);
      const auto comma = pair.find(',');
      if (comma == std::string_view::npos) fail(line_no, "entry '" + std::string(pair) + "' is not 're,im'");
      if (entries >= out.dim) fail(line_no, "more entries than dim");
      v[entries++] = cplx(parse_real(pair.substr(0, comma), line_no),
                          parse_real(pair.substr(comma + 1), line_no));
      start = stop + 1;
    }
    if (entries != out.dim) fail(line_no, "fewer entries than dim");
    out.vectors.push_back(std::move(v));
  }
  if (count < 0) throw ParseError("design vectors: missing header");
  if (static_cast<long>(out.vectors.size()) != count) {
    std::ostringstream os;
    os << "design vectors: header declares " << count << " vectors, found " << out.vectors.size();
    throw ParseError(os.str());
  }
  return out;
}

DesignVectors parse_design_vectors(const std::string& text) {
  std::istringstream in(text);
  return parse_design_vectors(in);
}

DesignVectors read_design_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open design-vector file '" + path.string() + "'");
  return parse_design_vectors(in);
}

std::string format_design_vectors(const DesignVectors& dv) {
  std::ostringstream os;
  os << "dim=" << dv.dim << " count=" << dv.vectors.size() << "\n";
  char buf[64];
  const auto put = [&](double x) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    os.write(buf, ptr - buf);
  };
  for (const auto& v : dv.vectors) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) os << ';';
      put(v[i].real());
      os << ',';
      put(v[i].imag());
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace qst
