// Production HTTPS transport. Compiled against TLS when OpenSSL is available;
// otherwise make_https_transport reports that live rating is unavailable.
#include "graphsim/errors.hpp"
#include "graphsim/rater.hpp"

#ifdef GRAPHSIM_HAVE_OPENSSL
#include <httplib.h>
#endif

namespace graphsim {

#ifdef GRAPHSIM_HAVE_OPENSSL

namespace {

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint URL must include a scheme: " + url);
  const auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

class HttplibTransport : public Transport {
 public:
  explicit HttplibTransport(int timeout_seconds) : timeout_seconds_(timeout_seconds) {}

  HttpResponse post(const HttpRequest& request) override {
    const SplitUrl parts = split_url(request.url);
    // one client per call: cheap next to a vision request, and thread-safe
    httplib::Client client(parts.base);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_write_timeout(timeout_seconds_, 0);

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [key, value] : request.headers) {
      if (key == "Content-Type")
        content_type = value;
      else
        headers.emplace(key, value);
    }

    auto res = client.Post(parts.path, headers, request.body, content_type);
    if (!res)
      throw RaterError(RaterErrorKind::transport,
                       "connection failure: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  int timeout_seconds_;
};

}  // namespace

std::unique_ptr<Transport> make_https_transport(int timeout_seconds) {
  return std::make_unique<HttplibTransport>(timeout_seconds);
}

#else

std::unique_ptr<Transport> make_https_transport(int) {
  throw ConfigError("built without TLS support; live rating is unavailable");
}

#endif

}  // namespace graphsim
