#include "scholarrec/error.hpp"

namespace scholarrec {

std::string_view category_name(ErrorCategory category) noexcept
{
    switch (category) {
        case ErrorCategory::config: return "config";
        case ErrorCategory::io: return "io";
        case ErrorCategory::parse: return "parse";
        case ErrorCategory::data: return "data";
        case ErrorCategory::internal: break;
    }
    return "internal";
}

}  // namespace scholarrec
