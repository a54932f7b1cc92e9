#pragma once

#include <string>
#include <string_view>

namespace schemaforge::detail {

/// True when `s` starts with an RFC 3986 scheme ("http:", "urn:", ...).
bool has_uri_scheme(std::string_view s);

/// RFC 3986 section 5 reference resolution, minus IDN niceties. Used for
/// @base resolution in Turtle and for relative links in catalog indexes.
std::string resolve_uri(std::string_view base, std::string_view reference);

struct UrlParts {
  std::string scheme;
  std::string host;
  int port = 0;  // 0 = scheme default
  std::string target;  // path + query, "/" when empty
};

/// Splits an absolute http/https/file URL. Throws std::invalid_argument.
UrlParts split_url(std::string_view url);

}  // namespace schemaforge::detail
