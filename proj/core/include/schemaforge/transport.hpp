#pragma once

#include <map>
#include <memory>
#include <string>

namespace schemaforge {

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;  // lowercase names
};

/// Fetch abstraction so harvesting logic never talks to a socket directly;
/// tests run against file or in-memory transports.
class Transport {
 public:
  virtual ~Transport() = default;

  /// GET the URL. Throws TransportError when the resource cannot be
  /// reached at all; HTTP error statuses are returned, not thrown.
  virtual HttpResponse get(const std::string& url) = 0;
};

/// Real HTTP(S) client: 30 s timeouts, at most 5 redirects followed,
/// identifying user-agent.
class HttpTransport : public Transport {
 public:
  HttpResponse get(const std::string& url) override;
};

/// Serves file:// URLs from the local filesystem; missing files map to 404.
class FileTransport : public Transport {
 public:
  HttpResponse get(const std::string& url) override;
};

/// Canned responses keyed by exact URL; anything else is a 404.
class MemoryTransport : public Transport {
 public:
  void add(const std::string& url, HttpResponse response);
  HttpResponse get(const std::string& url) override;

  std::size_t request_count() const { return requests_; }

 private:
  std::map<std::string, HttpResponse> responses_;
  std::size_t requests_ = 0;
};

}  // namespace schemaforge
