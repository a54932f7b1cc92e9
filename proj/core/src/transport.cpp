#include "schemaforge/transport.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "schemaforge/errors.hpp"
#include "uri.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_REDIRECT_MAX_COUNT 5
#include <httplib.h>

namespace schemaforge {

HttpResponse HttpTransport::get(const std::string& url) {
  detail::UrlParts parts = detail::split_url(url);
  if (parts.scheme != "http" && parts.scheme != "https") {
    throw TransportError("unsupported URL scheme: " + url);
  }

  std::string origin = parts.scheme + "://" + parts.host;
  if (parts.port != 0) origin += ":" + std::to_string(parts.port);

  httplib::Client client(origin);
  client.set_connection_timeout(30, 0);
  client.set_read_timeout(30, 0);
  client.set_write_timeout(30, 0);
  client.set_follow_location(true);
  client.set_default_headers({{"User-Agent", "schemaforge/0.1"}});

  auto result = client.Get(parts.target.empty() ? "/" : parts.target);
  if (!result) {
    throw TransportError("request failed for " + url + ": " + httplib::to_string(result.error()));
  }

  HttpResponse response;
  response.status = result->status;
  response.body = result->body;
  for (const auto& [name, value] : result->headers) {
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    response.headers[lower] = value;
  }
  return response;
}

HttpResponse FileTransport::get(const std::string& url) {
  constexpr std::string_view prefix = "file://";
  if (!url.starts_with(prefix)) {
    throw TransportError("FileTransport only serves file:// URLs: " + url);
  }
  std::string path = url.substr(prefix.size());

  std::ifstream in(path, std::ios::binary);
  if (!in) return {.status = 404, .body = "", .headers = {}};

  std::ostringstream buffer;
  buffer << in.rdbuf();
  HttpResponse response;
  response.status = 200;
  response.body = buffer.str();
  return response;
}

void MemoryTransport::add(const std::string& url, HttpResponse response) {
  responses_[url] = std::move(response);
}

HttpResponse MemoryTransport::get(const std::string& url) {
  ++requests_;
  auto it = responses_.find(url);
  if (it == responses_.end()) return {.status = 404, .body = "", .headers = {}};
  return it->second;
}

}  // namespace schemaforge
