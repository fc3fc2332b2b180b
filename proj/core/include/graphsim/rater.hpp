// Perceived-similarity scoring of rendered graph pairs: a live
// vision-language endpoint behind an injectable HTTP transport, and a
// deterministic offline mock.
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "graphsim/features.hpp"

namespace graphsim {

// ---- prompt -----------------------------------------------------------

// Bump when the instruction text changes; recorded in every manifest so
// ratings are traceable to the exact wording.
inline constexpr const char* kPromptVersion = "v1";

// Instruction text shown with both images: asks for a similarity value
// between 0 and 1 and a rationale under the five fixed criteria, as a
// machine-readable JSON object. Byte-stable.
std::string build_prompt();

// ---- response parsing -------------------------------------------------

struct Rationale {
  std::string overall_structure;
  std::string substructures;
  std::string node_degrees;
  std::string edge_density;
  std::string community_distribution;
  std::string other;
};

struct ParsedResponse {
  double similarity = 0.0;
  Rationale rationale;
};

// Primary path: parse the structured JSON object. Fallback: first decimal in
// [0,1] following the token "similarity" (case-insensitive), rationale left
// empty. Throws RaterError (unparseable_response / score_out_of_range).
ParsedResponse parse_response(const std::string& text);

// Pulls choices[0].message.content out of a chat-completions response body.
// Throws RaterError(unparseable_response) when the shape is wrong.
std::string extract_content(const std::string& response_body);

// ---- transport --------------------------------------------------------

struct HttpRequest {
  std::string url;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// One blocking HTTPS POST. Implementations throw RaterError(transport) on
// connection-level failures; HTTP error statuses come back as responses.
// post() may be called from several threads at once.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

// TLS transport; throws ConfigError when the build lacks TLS support.
std::unique_ptr<Transport> make_https_transport(int timeout_seconds);

// ---- rating -----------------------------------------------------------

struct RatingRequest {
  std::string pair_id;
  std::filesystem::path image_a;  // two distinct rendered images (PNG)
  std::filesystem::path image_b;
  std::string prompt;
  std::string model;
  double temperature = 0.0;  // in [0,2]
  int max_retries = 5;
  int timeout_seconds = 60;

  void validate() const;  // throws ConfigError
};

struct Rating {
  std::string pair_id;
  double similarity = 0.0;  // in [0,1]
  Rationale rationale;
  std::string raw_response;
  double latency_seconds = 0.0;  // successful attempt only
  int attempts = 0;
};

// What a rater needs to score one pair; profiles serve the mock, image paths
// serve the live endpoint.
struct PairInput {
  std::string pair_id;
  const FeatureProfile* profile_a = nullptr;
  const FeatureProfile* profile_b = nullptr;
  std::filesystem::path image_a;
  std::filesystem::path image_b;
};

class Rater {
 public:
  virtual ~Rater() = default;
  virtual Rating rate(const PairInput& input) = 0;
  virtual std::string name() const = 0;
  // concurrent in-flight request budget the caller must respect
  virtual int concurrency() const = 0;
};

// similarity = arithmetic mean of the six measures; rationale stamped "mock".
Rating rate_pair_mock(const FeatureProfile& a, const FeatureProfile& b,
                      const std::string& pair_id);

class MockRater : public Rater {
 public:
  Rating rate(const PairInput& input) override;
  std::string name() const override { return "mock"; }
  int concurrency() const override { return 0; }  // 0 = unbounded
};

// ---- pacing -----------------------------------------------------------

// Serializes request starts so no 60s window ever holds more than
// requests_per_minute of them. Clock and sleep are injectable for tests.
class RateLimiter {
 public:
  RateLimiter(double requests_per_minute, std::function<double()> clock,
              std::function<void(double)> sleep);

  // Blocks (via the sleep function) until this caller's reserved start time.
  void acquire();

 private:
  double interval_seconds_;
  double next_free_ = 0.0;
  bool started_ = false;
  std::function<double()> clock_;
  std::function<void(double)> sleep_;
  std::mutex mu_;
};

// ---- live rater -------------------------------------------------------

struct LiveRaterOptions {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o-2024-08-06";
  double temperature = 0.0;
  int max_retries = 5;
  int timeout_seconds = 60;
  double requests_per_minute = 60.0;
  int concurrency = 4;
  std::string api_key;  // resolved before construction; never logged
};

class LiveRater : public Rater {
 public:
  // Tests inject a scripted transport plus fake clock/sleep; production use
  // goes through make_live_rater below.
  LiveRater(LiveRaterOptions options, std::unique_ptr<Transport> transport,
            std::function<double()> clock = {}, std::function<void(double)> sleep = {});

  // Sends one chat-completions request carrying the prompt and both images;
  // retries with exponential backoff (base 2s, jitter in [0.5,1.5)) on
  // transport errors, HTTP 429/5xx, and parse failures. Throws RaterError
  // (retries_exhausted) when the budget runs out; other 4xx statuses fail
  // immediately.
  Rating rate(const PairInput& input) override;
  std::string name() const override { return "live"; }
  int concurrency() const override { return options_.concurrency; }

 private:
  LiveRaterOptions options_;
  std::unique_ptr<Transport> transport_;
  std::function<double()> clock_;
  std::function<void(double)> sleep_;
  RateLimiter limiter_;
};

// Env var holding the endpoint credential.
inline constexpr const char* kApiKeyEnv = "GRAPHSIM_API_KEY";

// Resolves the credential from the environment (ConfigError when missing —
// checked here, before any request is made) and wires the TLS transport.
std::unique_ptr<LiveRater> make_live_rater(LiveRaterOptions options);

// JSON body for the chat-completions call: model, temperature, JSON response
// format, one user message with the prompt text and both PNGs as base64 data
// URLs. Byte-stable for identical inputs.
std::string build_request_body(const std::string& prompt, const std::string& model,
                               double temperature, const std::vector<std::uint8_t>& png_a,
                               const std::vector<std::uint8_t>& png_b);

}  // namespace graphsim
