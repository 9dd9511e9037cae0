#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctxkit::csv {

/// Quotes a field if it holds a comma, quote or newline.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

/// RFC 4180 reader; throws Error(ParseError) on an unterminated quote.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace ctxkit::csv
