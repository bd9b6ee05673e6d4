#ifndef SEPL_ERROR_HPP
#define SEPL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sepl {

// Error with optional file:line:col source position, formatted into what().
class Error : public std::runtime_error {
 public:
  explicit Error(std::string message)
      : std::runtime_error(message), message_(std::move(message)) {}

  Error(const std::string& file, int line, int col, const std::string& message)
      : std::runtime_error(format(file, line, col, message)),
        file_(file),
        line_(line),
        col_(col),
        message_(message) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& message() const { return message_; }
  bool has_position() const { return line_ > 0; }

 private:
  static std::string format(const std::string& file, int line, int col,
                            const std::string& message) {
    return file + ":" + std::to_string(line) + ":" + std::to_string(col) +
           ": " + message;
  }

  std::string file_;
  int line_ = 0;
  int col_ = 0;
  std::string message_;
};

}  // namespace sepl

#endif  // SEPL_ERROR_HPP
