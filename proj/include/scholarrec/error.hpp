#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scholarrec {

/// Coarse failure classes. The C API and the CLI map these one-to-one onto
/// status codes and the machine-readable `error: <category>` line.
enum class ErrorCategory {
    internal,
    config,
    io,
    parse,
    data,
};

std::string_view category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category)
    {}

    ErrorCategory category() const noexcept { return category_; }

  private:
    ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message)
{
    throw Error(category, message);
}

}  // namespace scholarrec
