#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "astardec/common.hpp"
#include "json.hpp"

namespace astardec::net {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_multiplier = 2.0;
};

struct EndpointConfig {
  /// e.g. "http://localhost:8000" or "https://api.example.com/prefix"
  std::string base_url;
  /// Name of the environment variable holding a bearer token; empty for none.
  std::string api_key_env;
  RetryPolicy retry;
  int max_in_flight = 8;
  std::chrono::seconds timeout{120};
};

/// Raised once every retry attempt has failed.
class TransportFailure : public Error {
 public:
  using Error::Error;
};

/// JSON-over-HTTP POST client with bounded concurrency and exponential backoff.
///
/// Connection errors, 429 and 5xx responses are retried; other 4xx responses
/// fail immediately. A 2xx body that is not JSON raises MalformedResponse.
class JsonHttpClient {
 public:
  explicit JsonHttpClient(EndpointConfig config);
  ~JsonHttpClient();

  JsonHttpClient(const JsonHttpClient&) = delete;
  JsonHttpClient& operator=(const JsonHttpClient&) = delete;

  nlohmann::json post(const std::string& path, const nlohmann::json& body);

  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string bearer_;
  std::counting_semaphore<> in_flight_;
};

}  // namespace astardec::net
