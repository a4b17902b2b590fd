#ifndef MADM_TEXT_IO_HPP_
#define MADM_TEXT_IO_HPP_

#include <iosfwd>
#include <string>
#include <string_view>

#include "madm/types.hpp"

namespace madm {

// Shortest decimal form that parses back to the same double ("nan", "inf",
// "-inf" for non-finite values).
std::string format_double(double v);
double parse_double(std::string_view s);

// Whitespace-separated reader that tracks line numbers for error messages.
class TokenReader {
 public:
  TokenReader(std::istream& in, std::string source);

  std::string next_token();
  double next_double();
  long long next_integer();
  // Throws unless the next token equals `word`.
  void expect(std::string_view word);
  bool at_end();

  [[noreturn]] void fail(const std::string& what) const;

 private:
  bool fill();

  std::istream& in_;
  std::string source_;
  std::string line_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

void write_row(std::ostream& out, const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace madm

#endif  // MADM_TEXT_IO_HPP_
