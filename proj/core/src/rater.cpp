#include "graphsim/rater.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "graphsim/errors.hpp"
#include "graphsim/rng.hpp"
#include "graphsim/similarity.hpp"
#include "graphsim/util.hpp"

namespace graphsim {

std::string build_prompt() {
  return
      "You are given two images. Each image shows a node-link drawing of an "
      "undirected graph: circles are nodes, straight lines are edges. The node "
      "positions come from a force-directed layout and carry no meaning beyond "
      "readability, and there are no node labels, so judge the graphs only by "
      "their structure.\n"
      "\n"
      "Rate how similar the two drawn graphs are. Output the similarity between "
      "the two graphs as a value between 0 and 1, where 0 means entirely "
      "dissimilar and 1 means structurally identical.\n"
      "\n"
      "Explain the basis for the similarity rating using five criteria: "
      "(1) overall structure, (2) specific substructures or repeating patterns, "
      "(3) node degrees, (4) edge density, and (5) community distribution. You "
      "may also mention any other features that influenced the rating.\n"
      "\n"
      "Respond with a single JSON object and nothing else, in exactly this "
      "shape:\n"
      "{\"similarity\": <number between 0 and 1>, \"rationale\": "
      "{\"overall_structure\": \"...\", \"substructures\": \"...\", "
      "\"node_degrees\": \"...\", \"edge_density\": \"...\", "
      "\"community_distribution\": \"...\", \"other\": \"...\"}}\n";
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Markdown code fences around the JSON object are common model output.
std::string strip_fences(const std::string& s) {
  if (s.rfind("```", 0) != 0) return s;
  std::size_t first_nl = s.find('\n');
  if (first_nl == std::string::npos) return s;
  std::size_t last_fence = s.rfind("```");
  if (last_fence <= first_nl) return s;
  return trimmed(s.substr(first_nl + 1, last_fence - first_nl - 1));
}

void read_rationale(const nlohmann::json& j, Rationale& r) {
  if (!j.is_object()) return;
  auto field = [&](const char* key, std::string& out) {
    auto it = j.find(key);
    if (it != j.end() && it->is_string()) out = it->get<std::string>();
  };
  field("overall_structure", r.overall_structure);
  field("substructures", r.substructures);
  field("node_degrees", r.node_degrees);
  field("edge_density", r.edge_density);
  field("community_distribution", r.community_distribution);
  field("other", r.other);
}

double checked_score(double v) {
  if (!(v >= 0.0 && v <= 1.0))
    throw RaterError(RaterErrorKind::score_out_of_range,
                     "similarity " + format_double(v) + " outside [0,1]");
  return v;
}

// First decimal in [0,1] after the (case-insensitive) token "similarity".
double fallback_score(const std::string& text) {
  std::string lower;
  lower.reserve(text.size());
  for (char c : text)
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t at = lower.find("similarity");
  if (at == std::string::npos)
    throw RaterError(RaterErrorKind::unparseable_response,
                     "no similarity token in response");
  bool saw_number = false;
  std::size_t i = at + 10;
  while (i < text.size()) {
    const char c = text[i];
    const bool starts_number =
        std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '.') && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])));
    if (!starts_number) {
      ++i;
      continue;
    }
    const char* begin = text.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) {
      ++i;
      continue;
    }
    saw_number = true;
    if (v >= 0.0 && v <= 1.0) return v;
    i += static_cast<std::size_t>(end - begin);
  }
  if (saw_number)
    throw RaterError(RaterErrorKind::score_out_of_range,
                     "similarity value outside [0,1]");
  throw RaterError(RaterErrorKind::unparseable_response,
                   "no numeric similarity in response");
}

}  // namespace

ParsedResponse parse_response(const std::string& text) {
  const std::string body = strip_fences(trimmed(text));
  if (body.empty())
    throw RaterError(RaterErrorKind::unparseable_response, "empty response");

  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    // salvage an embedded object before falling back to token scan
    std::size_t open = body.find('{');
    std::size_t close = body.rfind('}');
    if (open != std::string::npos && close != std::string::npos && close > open)
      j = nlohmann::json::parse(body.substr(open, close - open + 1), nullptr, false);
  }

  if (j.is_object()) {
    auto it = j.find("similarity");
    if (it != j.end() && it->is_number()) {
      ParsedResponse out;
      out.similarity = checked_score(it->get<double>());
      auto rat = j.find("rationale");
      if (rat != j.end()) read_rationale(*rat, out.rationale);
      return out;
    }
  }

  ParsedResponse out;
  out.similarity = fallback_score(text);
  return out;
}

std::string extract_content(const std::string& response_body) {
  nlohmann::json j = nlohmann::json::parse(response_body, nullptr, false);
  if (j.is_discarded())
    throw RaterError(RaterErrorKind::unparseable_response,
                     "response body is not JSON");
  try {
    const nlohmann::json& msg = j.at("choices").at(0).at("message").at("content");
    if (msg.is_string()) return msg.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    // fall through
  }
  throw RaterError(RaterErrorKind::unparseable_response,
                   "response body lacks choices[0].message.content");
}

void RatingRequest::validate() const {
  if (pair_id.empty()) throw ConfigError("rating request without pair id");
  if (image_a.empty() || image_b.empty() || image_a == image_b)
    throw ConfigError("rating request needs two distinct image references");
  if (!(temperature >= 0.0 && temperature <= 2.0))
    throw ConfigError("temperature must lie in [0,2]");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (timeout_seconds < 1) throw ConfigError("timeout must be >= 1s");
}

Rating rate_pair_mock(const FeatureProfile& a, const FeatureProfile& b,
                      const std::string& pair_id) {
  Rating r;
  r.pair_id = pair_id;
  r.similarity = similarity_vector(a, b).mean();
  r.rationale = {"mock", "mock", "mock", "mock", "mock", "mock"};
  r.raw_response = "";
  r.latency_seconds = 0.0;
  r.attempts = 1;
  return r;
}

Rating MockRater::rate(const PairInput& input) {
  if (input.profile_a == nullptr || input.profile_b == nullptr)
    throw ConfigError("mock rater needs both feature profiles");
  return rate_pair_mock(*input.profile_a, *input.profile_b, input.pair_id);
}

RateLimiter::RateLimiter(double requests_per_minute, std::function<double()> clock,
                         std::function<void(double)> sleep)
    : interval_seconds_(requests_per_minute > 0.0 ? 60.0 / requests_per_minute : 0.0),
      clock_(std::move(clock)),
      sleep_(std::move(sleep)) {}

void RateLimiter::acquire() {
  if (interval_seconds_ <= 0.0) return;
  double wait = 0.0;
  {
    std::lock_guard<std::mutex> lk(mu_);
    const double now = clock_();
    const double start = started_ ? std::max(now, next_free_) : now;
    started_ = true;
    next_free_ = start + interval_seconds_;
    wait = start - now;
  }
  if (wait > 0.0) sleep_(wait);
}

namespace {

double steady_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void thread_sleep(double seconds) {
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

}  // namespace

LiveRater::LiveRater(LiveRaterOptions options, std::unique_ptr<Transport> transport,
                     std::function<double()> clock, std::function<void(double)> sleep)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      clock_(clock ? std::move(clock) : steady_seconds),
      sleep_(sleep ? std::move(sleep) : thread_sleep),
      limiter_(options_.requests_per_minute, clock_, sleep_) {
  if (!transport_) throw ConfigError("live rater needs a transport");
  if (options_.api_key.empty())
    throw ConfigError("live rater credential is empty; set " + std::string(kApiKeyEnv));
}

std::string build_request_body(const std::string& prompt, const std::string& model,
                               double temperature, const std::vector<std::uint8_t>& png_a,
                               const std::vector<std::uint8_t>& png_b) {
  auto image_part = [](const std::vector<std::uint8_t>& png) {
    nlohmann::json part;
    part["type"] = "image_url";
    part["image_url"]["url"] =
        "data:image/png;base64," + base64_encode(png.data(), png.size());
    return part;
  };
  nlohmann::json text_part;
  text_part["type"] = "text";
  text_part["text"] = prompt;

  nlohmann::json msg;
  msg["role"] = "user";
  msg["content"] = nlohmann::json::array({text_part, image_part(png_a), image_part(png_b)});

  nlohmann::json j;
  j["model"] = model;
  j["temperature"] = temperature;
  j["response_format"]["type"] = "json_object";
  j["messages"] = nlohmann::json::array({msg});
  return j.dump();
}

Rating LiveRater::rate(const PairInput& input) {
  RatingRequest req;
  req.pair_id = input.pair_id;
  req.image_a = input.image_a;
  req.image_b = input.image_b;
  req.prompt = build_prompt();
  req.model = options_.model;
  req.temperature = options_.temperature;
  req.max_retries = options_.max_retries;
  req.timeout_seconds = options_.timeout_seconds;
  req.validate();

  const std::string file_a = read_file(req.image_a);
  const std::string file_b = read_file(req.image_b);
  const std::vector<std::uint8_t> png_a(file_a.begin(), file_a.end());
  const std::vector<std::uint8_t> png_b(file_b.begin(), file_b.end());

  HttpRequest http;
  http.url = options_.endpoint;
  http.body = build_request_body(req.prompt, req.model, req.temperature, png_a, png_b);
  http.headers = {{"Authorization", "Bearer " + options_.api_key},
                  {"Content-Type", "application/json"}};

  Rng jitter_rng(fnv1a64(input.pair_id));
  std::string last_error;

  for (int attempt = 0; attempt <= req.max_retries; ++attempt) {
    limiter_.acquire();
    const double t0 = clock_();

    HttpResponse rsp;
    bool have_response = false;
    try {
      rsp = transport_->post(http);
      have_response = true;
    } catch (const RaterError& e) {
      last_error = e.what();  // connection-level failure: retry
    }

    if (have_response) {
      if (rsp.status == 429 || rsp.status >= 500) {
        last_error = "HTTP " + std::to_string(rsp.status);  // throttled/server: retry
      } else if (rsp.status != 200) {
        throw RaterError(RaterErrorKind::transport,
                         "HTTP " + std::to_string(rsp.status) + " from rating endpoint");
      } else {
        try {
          const std::string content = extract_content(rsp.body);
          const ParsedResponse parsed = parse_response(content);
          Rating r;
          r.pair_id = input.pair_id;
          r.similarity = parsed.similarity;
          r.rationale = parsed.rationale;
          r.raw_response = content;
          r.latency_seconds = clock_() - t0;
          r.attempts = attempt + 1;
          return r;
        } catch (const RaterError& e) {
          last_error = e.what();  // malformed/out-of-range payload: retry
        }
      }
    }

    if (attempt < req.max_retries) {
      const double jitter = 0.5 + jitter_rng.next_double();  // [0.5, 1.5)
      sleep_(2.0 * std::pow(2.0, attempt) * jitter);
    }
  }
  throw RaterError(RaterErrorKind::retries_exhausted,
                   "pair " + input.pair_id + " failed after " +
                       std::to_string(req.max_retries + 1) + " attempts: " + last_error);
}

std::unique_ptr<LiveRater> make_live_rater(LiveRaterOptions options) {
  const char* key = std::getenv(kApiKeyEnv);
  if (key == nullptr || *key == '\0')
    throw ConfigError(std::string(kApiKeyEnv) +
                      " is not set; the live rater requires a credential");
  options.api_key = key;
  auto transport = make_https_transport(options.timeout_seconds);
  return std::make_unique<LiveRater>(std::move(options), std::move(transport));
}

}  // namespace graphsim
