// Copyright 2026 The quasiprob Authors
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

#ifndef QP_REPORT_HPP_
#define QP_REPORT_HPP_

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qp {

// Minimal JSON value for emitted reports. Keys keep insertion order and
// doubles are printed with a fixed %.17g / %.12g format, so identical runs
// produce byte-identical output (the shortest-roundtrip formatting of
// general-purpose JSON libraries is not pinned to a digit count).
class Report {
 public:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };

  Report() : kind_(Kind::Null) {}
  Report(bool b) : kind_(Kind::Bool), bool_(b) {}
  Report(int v) : kind_(Kind::Int), int_(v) {}
  Report(std::int64_t v) : kind_(Kind::Int), int_(v) {}
  Report(std::size_t v) : kind_(Kind::Int), int_(static_cast<std::int64_t>(v)) {}
  Report(double v) : kind_(Kind::Double), double_(v) {}
  Report(const char* s) : kind_(Kind::String), string_(s) {}
  Report(std::string s) : kind_(Kind::String), string_(std::move(s)) {}

  static Report array() {
    Report r;
    r.kind_ = Kind::Array;
    return r;
  }
  static Report object() {
    Report r;
    r.kind_ = Kind::Object;
    return r;
  }
  template <typename T>
  static Report array_of(const std::vector<T>& values) {
    Report r = array();
    for (const T& v : values) r.push_back(Report(v));
    return r;
  }

  void push_back(Report v) { items_.push_back(std::move(v)); }
  void set(const std::string& key, Report v) {
    fields_.emplace_back(key, std::move(v));
  }

  std::string dump(int indent = 2) const;

  static std::string format_double(double v, int significant = 17);

 private:
  void write(std::string& out, int indent, int depth) const;

  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<Report> items_;
  std::vector<std::pair<std::string, Report>> fields_;
};

std::string csv_escape(const std::string& field);

}  // namespace qp

#endif  // QP_REPORT_HPP_
