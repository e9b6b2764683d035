#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "fincot/domain.hpp"

namespace fincot::inference {

struct GenerationParams {
    double temperature = 0.2;
    int max_tokens = 16384;  // interpreted as max generated tokens
    std::string model;
    std::optional<std::uint64_t> seed;
};

enum class UsageSource { Provider, Approximate };

struct ModelResponse {
    std::string content;
    long input_tokens = 0;
    long output_tokens = 0;
    UsageSource usage_source = UsageSource::Approximate;
    long latency_ms = 0;
};

class TransportError : public std::runtime_error {
  public:
    TransportError(int status, const std::string& body_excerpt);
    int status() const { return status_; }

  private:
    int status_;
};

class TimeoutError : public std::runtime_error {
  public:
    explicit TimeoutError(const std::string& detail);
};

class RateLimited : public std::runtime_error {
  public:
    explicit RateLimited(int attempts);
};

// One chat exchange. Implementations must be safe for concurrent calls.
class ChatClient {
  public:
    virtual ~ChatClient() = default;
    virtual ModelResponse complete(const std::string& system, const std::string& user,
                                   const GenerationParams& params) = 0;
};

// Deterministic fallback when the endpoint reports no usage: ceil(bytes / 4).
long approximate_token_count(std::string_view text);

struct HttpClientConfig {
    std::string base_url;                  // scheme://host[:port]
    std::string api_key_env = "API_KEY";   // bearer token source; unset env = no auth header
    int timeout_s = 120;
    int max_attempts = 5;                  // total attempts for rate-limited requests
    int backoff_base_ms = 500;             // delay = base * 2^k, jittered
};

// OpenAI-compatible chat completions over POST <base>/v1/chat/completions.
class HttpChatClient : public ChatClient {
  public:
    explicit HttpChatClient(HttpClientConfig config);
    ModelResponse complete(const std::string& system, const std::string& user,
                           const GenerationParams& params) override;

  private:
    HttpClientConfig config_;
};

// Replies with a tagged response whose answer letter is the gold letter for
// the question text. Never touches the network.
class AnswerKeyMock : public ChatClient {
  public:
    explicit AnswerKeyMock(std::map<std::string, AnswerLetter> key);
    ModelResponse complete(const std::string& system, const std::string& user,
                           const GenerationParams& params) override;

  private:
    std::map<std::string, AnswerLetter> key_;
};

class FixedResponseMock : public ChatClient {
  public:
    explicit FixedResponseMock(std::string content);
    ModelResponse complete(const std::string& system, const std::string& user,
                           const GenerationParams& params) override;

  private:
    std::string content_;
};

// Uniform over A/B/C, deterministic in (seed, system, user).
class SeededRandomMock : public ChatClient {
  public:
    explicit SeededRandomMock(std::uint64_t seed);
    ModelResponse complete(const std::string& system, const std::string& user,
                           const GenerationParams& params) override;

  private:
    std::uint64_t seed_;
};

// Tagged-format response body shared by the mock backends.
std::string render_tagged_response(AnswerLetter letter);

}  // namespace fincot::inference
