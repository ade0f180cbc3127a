#include "astardec/net/http_client.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <spdlog/spdlog.h>

#include "httplib.h"

namespace astardec::net {
namespace {

struct SemaphoreGuard {
  explicit SemaphoreGuard(std::counting_semaphore<>& s) : sem(s) { sem.acquire(); }
  ~SemaphoreGuard() { sem.release(); }
  std::counting_semaphore<>& sem;
};

}  // namespace

JsonHttpClient::JsonHttpClient(EndpointConfig config)
    : config_(std::move(config)), in_flight_(std::max(1, config_.max_in_flight)) {
  if (config_.base_url.empty()) throw ConfigError("http endpoint: base_url is required");
  const auto scheme_end = config_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("http endpoint: base_url needs a scheme: " + config_.base_url);
  }
  const auto path_start = config_.base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = config_.base_url;
  } else {
    scheme_host_port_ = config_.base_url.substr(0, path_start);
    path_prefix_ = config_.base_url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) bearer_ = key;
  }
}

JsonHttpClient::~JsonHttpClient() = default;

nlohmann::json JsonHttpClient::post(const std::string& path, const nlohmann::json& body) {
  SemaphoreGuard guard(in_flight_);
  const std::string full_path = path_prefix_ + path;
  const std::string payload = body.dump();
  auto backoff = config_.retry.initial_backoff;
  std::string last_error;

  for (int attempt = 1; attempt <= std::max(1, config_.retry.max_attempts); ++attempt) {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    httplib::Headers headers;
    if (!bearer_.empty()) headers.emplace("Authorization", "Bearer " + bearer_);

    auto res = client.Post(full_path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw MalformedResponse("non-JSON response from " + full_path + ": " + e.what());
      }
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      throw TransportFailure("HTTP " + std::to_string(res->status) + " from " + full_path + ": " +
                             res->body.substr(0, 200));
    }

    spdlog::warn("POST {} failed (attempt {}/{}): {}", full_path, attempt,
                 config_.retry.max_attempts, last_error);
    if (attempt < config_.retry.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(backoff.count()) * config_.retry.backoff_multiplier));
    }
  }
  throw TransportFailure("POST " + full_path + " failed after " +
                         std::to_string(config_.retry.max_attempts) + " attempts: " + last_error);
}

}  // namespace astardec::net
