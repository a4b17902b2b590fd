#include "madm/text_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <system_error>

namespace madm {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, end);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw InvalidArgument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

TokenReader::TokenReader(std::istream& in, std::string source)
    : in_(in), source_(std::move(source)) {}

bool TokenReader::fill() {
  while (true) {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' ||
                                   line_[pos_] == '\r')) {
      ++pos_;
    }
    if (pos_ < line_.size()) return true;
    if (!std::getline(in_, line_)) return false;
    ++line_no_;
    pos_ = 0;
  }
}

bool TokenReader::at_end() { return !fill(); }

std::string TokenReader::next_token() {
  if (!fill()) fail("unexpected end of input");
  std::size_t start = pos_;
  while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t' &&
         line_[pos_] != '\r') {
    ++pos_;
  }
  return line_.substr(start, pos_ - start);
}

double TokenReader::next_double() {
  std::string tok = next_token();
  try {
    return parse_double(tok);
  } catch (const InvalidArgument&) {
    fail("expected a number, got '" + tok + "'");
  }
}

long long TokenReader::next_integer() {
  std::string tok = next_token();
  long long v = 0;
  auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || end != tok.data() + tok.size()) {
    fail("expected an integer, got '" + tok + "'");
  }
  return v;
}

void TokenReader::expect(std::string_view word) {
  std::string tok = next_token();
  if (tok != word) fail("expected '" + std::string(word) + "', got '" + tok + "'");
}

void TokenReader::fail(const std::string& what) const {
  throw InvalidArgument(source_ + ":" + std::to_string(line_no_) + ": " + what);
}

void write_row(std::ostream& out, const Eigen::Ref<const Eigen::VectorXd>& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) out << ' ';
    out << format_double(v[k]);
  }
  out << '\n';
}

}  // namespace madm
