// Copyright 2026 The enerflow Authors
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

#include "enerflow/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace enerflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxNameLength = 255;
constexpr std::size_t kTermsPerLine = 6;

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_name(const std::string& name) {
  if (name.empty() || name.size() > kMaxNameLength)
    throw Error(Errc::kInvalidArgument,
                "LP names must have 1 to 255 characters: '" + name + "'");
}

void write_terms(std::ostringstream& os, const std::vector<MatrixEntry>& entries,
                 const StandardForm& sf) {
  std::size_t on_line = 0;
  for (const auto& e : entries) {
    if (on_line == kTermsPerLine) {
      os << "\n  ";
      on_line = 0;
    }
    os << ' ' << (std::signbit(e.value) ? '-' : '+') << ' '
       << number(std::abs(e.value)) << ' ' << sf.column_names[e.column];
    ++on_line;
  }
}

}  // namespace

std::string write_lp(const StandardForm& sf) {
  for (const auto& n : sf.column_names) check_name(n);
  for (const auto& n : sf.row_names) check_name(n);

  std::ostringstream os;
  os << "\\ enerflow model: " << sf.num_columns() << " columns, "
     << sf.num_rows() << " rows\n";
  os << "Minimize\n obj:";
  std::vector<MatrixEntry> obj;
  for (std::size_t j = 0; j < sf.num_columns(); ++j)
    obj.push_back({j, sf.objective[j] == 0.0 ? 0.0 : sf.objective[j]});
  write_terms(os, obj, sf);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < sf.num_rows(); ++i) {
    os << ' ' << sf.row_names[i] << ':';
    if (sf.rows[i].empty()) {
      if (sf.num_columns() > 0) {
        os << " 0 " << sf.column_names.front();
      } else {
        os << " 0";
      }
    } else {
      write_terms(os, sf.rows[i], sf);
    }
    switch (sf.senses[i]) {
      case RowSense::kLessEqual: os << " <= "; break;
      case RowSense::kEqual: os << " = "; break;
      case RowSense::kGreaterEqual: os << " >= "; break;
    }
    os << number(sf.rhs[i]) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < sf.num_columns(); ++j) {
    const std::string& name = sf.column_names[j];
    const double lo = sf.lower[j], up = sf.upper[j];
    if (lo == up) {
      os << ' ' << name << " = " << number(lo) << '\n';
    } else if (std::isinf(lo) && std::isinf(up)) {
      os << ' ' << name << " free\n";
    } else if (std::isinf(up)) {
      os << ' ' << name << " >= " << number(lo) << '\n';
    } else {
      os << ' ' << (std::isinf(lo) ? "-inf" : number(lo)) << " <= " << name
         << " <= " << number(up) << '\n';
    }
  }
  auto section = [&](const char* title, Domain domain) {
    bool any = false;
    for (std::size_t j = 0; j < sf.num_columns(); ++j) {
      if (sf.domains[j] != domain) continue;
      if (!any) os << title << '\n';
      any = true;
      os << ' ' << sf.column_names[j] << '\n';
    }
  };
  section("Binary", Domain::kBinary);
  section("General", Domain::kNonnegInteger);
  os << "End\n";
  return os.str();
}

std::string export_lp(const Model& model) {
  return write_lp(to_standard_form(model));
}

void export_lp(const Model& model, const std::filesystem::path& destination) {
  const std::string text = export_lp(model);
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(Errc::kIoFailure, "cannot open '" + destination.string() + "'");
  out << text;
  if (!out.flush())
    throw Error(Errc::kIoFailure, "cannot write '" + destination.string() + "'");
}

namespace {

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinary, kGeneral, kEnd };

struct Token {
  enum Type { kNumber, kName, kOp } type;
  std::string text;
  double value = 0.0;
  std::size_t line = 0;
};

bool name_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  return std::string_view("!\"#$%&()/,.;?@_`'{}|~").find(c) != std::string_view::npos;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(Errc::kParseError, "LP line " + std::to_string(line) + ": " + msg);
}

void tokenize(std::string_view text, std::size_t line, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.'))
        ++j;
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k])))
            ++k;
          j = k;
        }
      }
      Token t{Token::kNumber, std::string(text.substr(i, j - i)), 0.0, line};
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
      if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
        fail(line, "bad number '" + t.text + "'");
      out.push_back(std::move(t));
      i = j;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op;
      std::size_t j = i + 1;
      if (c == '=' && j < text.size() && (text[j] == '<' || text[j] == '>')) {
        op = text[j] == '<' ? "<=" : ">=";
        ++j;
      } else if (c == '=') {
        op = "=";
      } else {
        op = c == '<' ? "<=" : ">=";
        if (j < text.size() && text[j] == '=') ++j;
      }
      out.push_back({Token::kOp, op, 0.0, line});
      i = j;
    } else if (c == '+' || c == '-' || c == ':') {
      out.push_back({Token::kOp, std::string(1, c), 0.0, line});
      ++i;
    } else if (name_char(c)) {
      std::size_t j = i;
      while (j < text.size() && name_char(text[j])) ++j;
      out.push_back({Token::kName, std::string(text.substr(i, j - i)), 0.0, line});
      i = j;
    } else {
      fail(line, std::string("unexpected character '") + c + "'");
    }
  }
}

std::string lower_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<Section> section_keyword(std::string_view line) {
  std::string key = lower_case(line);
  // Collapse inner whitespace ("subject   to").
  std::string norm;
  for (char c : key) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!norm.empty() && norm.back() != ' ') norm.push_back(' ');
    } else {
      norm.push_back(c);
    }
  }
  while (!norm.empty() && norm.back() == ' ') norm.pop_back();
  static const std::map<std::string, Section> kKeywords = {
      {"minimize", Section::kObjective},   {"minimise", Section::kObjective},
      {"minimum", Section::kObjective},    {"min", Section::kObjective},
      {"subject to", Section::kConstraints}, {"such that", Section::kConstraints},
      {"st", Section::kConstraints},       {"s.t.", Section::kConstraints},
      {"st.", Section::kConstraints},      {"bounds", Section::kBounds},
      {"bound", Section::kBounds},         {"binary", Section::kBinary},
      {"binaries", Section::kBinary},      {"bin", Section::kBinary},
      {"general", Section::kGeneral},      {"generals", Section::kGeneral},
      {"gen", Section::kGeneral},          {"end", Section::kEnd},
  };
  auto it = kKeywords.find(norm);
  if (it != kKeywords.end()) return it->second;
  if (norm == "maximize" || norm == "maximise" || norm == "maximum" || norm == "max")
    throw Error(Errc::kParseError, "maximisation problems are not supported");
  return std::nullopt;
}

class LpParser {
 public:
  StandardForm parse(std::string_view text) {
    std::map<Section, std::vector<Token>> tokens;
    Section current = Section::kNone;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size() && current != Section::kEnd) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      if (auto cut = line.find('\\'); cut != std::string_view::npos)
        line = line.substr(0, cut);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      if (auto s = section_keyword(line)) {
        current = *s;
        continue;
      }
      if (current == Section::kNone) fail(line_no, "text before the objective section");
      tokenize(line, line_no, tokens[current]);
    }
    if (current != Section::kEnd) fail(line_no, "missing End");

    parse_objective(tokens[Section::kObjective]);
    parse_constraints(tokens[Section::kConstraints]);
    parse_bounds(tokens[Section::kBounds]);
    parse_domain(tokens[Section::kBinary], Domain::kBinary);
    parse_domain(tokens[Section::kGeneral], Domain::kNonnegInteger);

    for (std::size_t j = 0; j < sf_.num_columns(); ++j) {
      if (sf_.domains[j] == Domain::kBinary && !explicit_bounds_[j]) {
        sf_.lower[j] = 0.0;
        sf_.upper[j] = 1.0;
      }
    }
    for (auto& r : pending_)
      sf_.add_row(std::move(r.name), std::move(r.entries), r.sense, r.rhs);
    sf_.objective = objective_;
    sf_.objective.resize(sf_.num_columns(), 0.0);
    return std::move(sf_);
  }

 private:
  struct PendingRow {
    std::string name;
    std::vector<MatrixEntry> entries;
    RowSense sense;
    double rhs;
  };

  std::size_t column(const std::string& name) {
    auto [it, fresh] = columns_.emplace(name, sf_.num_columns());
    if (fresh) {
      sf_.add_column(name, 0.0, 0.0, kInf);
      explicit_bounds_.push_back(false);
    }
    return it->second;
  }

  static bool is_op(const std::vector<Token>& t, std::size_t i, std::string_view op) {
    return i < t.size() && t[i].type == Token::kOp && t[i].text == op;
  }
  static bool is_sense(const std::vector<Token>& t, std::size_t i) {
    return is_op(t, i, "<=") || is_op(t, i, ">=") || is_op(t, i, "=");
  }
  static bool is_label(const std::vector<Token>& t, std::size_t i) {
    return i + 1 < t.size() && t[i].type == Token::kName && is_op(t, i + 1, ":");
  }

  // Parses "[+-] [number] [name]" terms up to a sense or a row label.
  // Returns the summed constant part.
  double parse_expression(const std::vector<Token>& t, std::size_t& i,
                          std::vector<MatrixEntry>& entries, bool stop_at_label) {
    double constant = 0.0;
    bool any = false;
    while (i < t.size() && !is_sense(t, i)) {
      if (stop_at_label && any && is_label(t, i)) break;
      double sign = 1.0;
      bool saw_sign = false;
      while (is_op(t, i, "+") || is_op(t, i, "-")) {
        if (t[i].text == "-") sign = -sign;
        saw_sign = true;
        ++i;
      }
      if (any && !saw_sign)
        fail(i < t.size() ? t[i].line : 0,
             "missing operator before '" + (i < t.size() ? t[i].text : "") + "'");
      std::optional<double> coef;
      if (i < t.size() && t[i].type == Token::kNumber) coef = t[i++].value;
      if (i < t.size() && t[i].type == Token::kName && !is_label(t, i)) {
        entries.push_back({column(t[i].text), sign * coef.value_or(1.0)});
        ++i;
      } else if (coef) {
        constant += sign * *coef;
      } else {
        fail(i < t.size() ? t[i].line : 0,
             saw_sign ? "dangling sign" : "unexpected token '" +
                                              (i < t.size() ? t[i].text : "") + "'");
      }
      any = true;
    }
    return constant;
  }

  void parse_objective(const std::vector<Token>& t) {
    std::size_t i = 0;
    if (is_label(t, i)) i += 2;
    std::vector<MatrixEntry> entries;
    const double constant = parse_expression(t, i, entries, false);
    if (i != t.size()) fail(t[i].line, "unexpected token in objective");
    if (constant != 0.0)
      throw Error(Errc::kParseError, "objective constants are not supported");
    for (const auto& e : entries) {
      if (objective_.size() <= e.column) objective_.resize(e.column + 1, 0.0);
      objective_[e.column] += e.value;
    }
  }

  double parse_value(const std::vector<Token>& t, std::size_t& i) {
    double sign = 1.0;
    while (is_op(t, i, "+") || is_op(t, i, "-")) {
      if (t[i].text == "-") sign = -sign;
      ++i;
    }
    if (i >= t.size()) fail(t.empty() ? 0 : t.back().line, "missing value");
    const Token& tok = t[i++];
    if (tok.type == Token::kNumber) return sign * tok.value;
    if (tok.type == Token::kName) {
      const std::string k = lower_case(tok.text);
      if (k == "inf" || k == "infinity") return sign * kInf;
    }
    fail(tok.line, "expected a number, got '" + tok.text + "'");
  }

  static RowSense sense_of(const Token& tok) {
    if (tok.text == "<=") return RowSense::kLessEqual;
    if (tok.text == ">=") return RowSense::kGreaterEqual;
    return RowSense::kEqual;
  }

  void parse_constraints(const std::vector<Token>& t) {
    std::size_t i = 0;
    while (i < t.size()) {
      PendingRow row;
      if (is_label(t, i)) {
        row.name = t[i].text;
        i += 2;
      } else {
        row.name = "R" + std::to_string(pending_.size() + 1);
      }
      const double constant = parse_expression(t, i, row.entries, true);
      if (!is_sense(t, i)) fail(i < t.size() ? t[i].line : t.back().line, "missing sense");
      row.sense = sense_of(t[i++]);
      row.rhs = parse_value(t, i) - constant;
      pending_.push_back(std::move(row));
    }
  }

  void set_bound(std::size_t col, const std::string& op, double v, bool var_on_left) {
    explicit_bounds_[col] = true;
    if (op == "=") {
      sf_.lower[col] = sf_.upper[col] = v;
    } else if ((op == "<=") == var_on_left) {
      sf_.upper[col] = v;
    } else {
      sf_.lower[col] = v;
    }
  }

  void parse_bounds(const std::vector<Token>& t) {
    std::size_t i = 0;
    while (i < t.size()) {
      const bool starts_with_name =
          t[i].type == Token::kName && lower_case(t[i].text) != "inf" &&
          lower_case(t[i].text) != "infinity";
      if (starts_with_name) {
        const std::size_t col = column(t[i].text);
        ++i;
        if (i < t.size() && t[i].type == Token::kName && lower_case(t[i].text) == "free") {
          explicit_bounds_[col] = true;
          sf_.lower[col] = -kInf;
          sf_.upper[col] = kInf;
          ++i;
          continue;
        }
        if (!is_sense(t, i)) fail(t[i - 1].line, "expected a bound operator");
        const std::string op = t[i++].text;
        set_bound(col, op, parse_value(t, i), true);
      } else {
        const double v = parse_value(t, i);
        if (!is_sense(t, i)) fail(t[i - 1].line, "expected a bound operator");
        const std::string op = t[i++].text;
        if (i >= t.size() || t[i].type != Token::kName)
          fail(t[i - 1].line, "expected a variable name");
        const std::size_t col = column(t[i++].text);
        set_bound(col, op, v, false);
        if (is_sense(t, i)) {
          const std::string op2 = t[i++].text;
          set_bound(col, op2, parse_value(t, i), true);
        }
      }
    }
  }

  void parse_domain(const std::vector<Token>& t, Domain domain) {
    for (const Token& tok : t) {
      if (tok.type != Token::kName) fail(tok.line, "expected a variable name");
      sf_.domains[column(tok.text)] = domain;
    }
  }

  StandardForm sf_;
  std::map<std::string, std::size_t> columns_;
  std::vector<bool> explicit_bounds_;
  std::vector<double> objective_;
  std::vector<PendingRow> pending_;
};

}  // namespace

StandardForm parse_lp(std::string_view text) { return LpParser().parse(text); }

}  // namespace enerflow
