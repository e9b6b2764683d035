#include "fincot/inference.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fincot/util.hpp"

namespace fincot::inference {

namespace {

using json = nlohmann::json;

constexpr std::size_t kBodyExcerptLimit = 200;

std::string excerpt(const std::string& body) {
    if (body.size() <= kBodyExcerptLimit) return body;
    return body.substr(0, kBodyExcerptLimit) + "...";
}

ModelResponse approximate_usage(std::string content, const std::string& system,
                                const std::string& user) {
    ModelResponse resp;
    resp.input_tokens = approximate_token_count(system) + approximate_token_count(user);
    resp.output_tokens = approximate_token_count(content);
    resp.usage_source = UsageSource::Approximate;
    resp.content = std::move(content);
    return resp;
}

}  // namespace

TransportError::TransportError(int status, const std::string& body_excerpt)
    : std::runtime_error("transport error (status " + std::to_string(status) + "): " +
                         excerpt(body_excerpt)),
      status_(status) {}

TimeoutError::TimeoutError(const std::string& detail)
    : std::runtime_error("request timed out: " + detail) {}

RateLimited::RateLimited(int attempts)
    : std::runtime_error("rate limited after " + std::to_string(attempts) + " attempts") {}

long approximate_token_count(std::string_view text) {
    return static_cast<long>((text.size() + 3) / 4);
}

std::string render_tagged_response(AnswerLetter letter) {
    std::string out = "<thinking>\nRecall the relevant concept and compare the options.\n</thinking>\n";
    out += "<output>\n\"answer\": ";
    out += to_char(letter);
    out += "\n</output>";
    return out;
}

HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {}

ModelResponse HttpChatClient::complete(const std::string& system, const std::string& user,
                                       const GenerationParams& params) {
    json request = {
        {"model", params.model},
        {"messages",
         json::array({json{{"role", "system"}, {"content", system}},
                      json{{"role", "user"}, {"content", user}}})},
        {"temperature", params.temperature},
        {"max_tokens", params.max_tokens},
    };
    if (params.seed) request["seed"] = *params.seed;
    const std::string body = request.dump();

    // Per-request client instances keep concurrent calls isolated.
    std::random_device rd;
    util::SplitMix64 jitter(rd());

    const auto start = std::chrono::steady_clock::now();
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_s, 0);
        client.set_read_timeout(config_.timeout_s, 0);
        client.set_write_timeout(config_.timeout_s, 0);

        httplib::Headers headers;
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }

        auto result = client.Post("/v1/chat/completions", headers, body, "application/json");
        if (!result) {
            auto err = result.error();
            if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                err == httplib::Error::Write) {
                throw TimeoutError(httplib::to_string(err));
            }
            throw TransportError(0, httplib::to_string(err));
        }
        if (result->status == 429) {
            if (attempt + 1 >= config_.max_attempts) throw RateLimited(config_.max_attempts);
            // Exponential backoff with jitter in [0.5, 1.0] of the nominal delay.
            double nominal = config_.backoff_base_ms * std::pow(2.0, attempt);
            double factor = 0.5 + 0.5 * (jitter.next() >> 11) * 0x1.0p-53;
            std::this_thread::sleep_for(
                std::chrono::milliseconds(static_cast<long>(nominal * factor)));
            continue;
        }
        if (result->status < 200 || result->status >= 300) {
            throw TransportError(result->status, result->body);
        }

        json reply;
        try {
            reply = json::parse(result->body);
        } catch (const json::parse_error& e) {
            throw TransportError(result->status, std::string("invalid JSON reply: ") + e.what());
        }
        if (!reply.contains("choices") || reply["choices"].empty()) {
            throw TransportError(result->status, "reply has no choices");
        }
        std::string content = reply["choices"][0].value("message", json::object()).value("content", "");

        ModelResponse resp;
        if (reply.contains("usage") && reply["usage"].contains("prompt_tokens") &&
            reply["usage"].contains("completion_tokens")) {
            resp.content = std::move(content);
            resp.input_tokens = reply["usage"]["prompt_tokens"].get<long>();
            resp.output_tokens = reply["usage"]["completion_tokens"].get<long>();
            resp.usage_source = UsageSource::Provider;
        } else {
            resp = approximate_usage(std::move(content), system, user);
        }
        resp.latency_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                                std::chrono::steady_clock::now() - start)
                                                .count());
        return resp;
    }
    throw RateLimited(config_.max_attempts);
}

AnswerKeyMock::AnswerKeyMock(std::map<std::string, AnswerLetter> key) : key_(std::move(key)) {}

ModelResponse AnswerKeyMock::complete(const std::string& system, const std::string& user,
                                      const GenerationParams&) {
    auto it = key_.find(user);
    if (it == key_.end()) {
        throw std::logic_error("answer-key mock has no entry for this question");
    }
    return approximate_usage(render_tagged_response(it->second), system, user);
}

FixedResponseMock::FixedResponseMock(std::string content) : content_(std::move(content)) {}

ModelResponse FixedResponseMock::complete(const std::string& system, const std::string& user,
                                          const GenerationParams&) {
    return approximate_usage(content_, system, user);
}

SeededRandomMock::SeededRandomMock(std::uint64_t seed) : seed_(seed) {}

ModelResponse SeededRandomMock::complete(const std::string& system, const std::string& user,
                                         const GenerationParams&) {
    std::uint64_t h = seed_;
    h ^= util::fnv1a_hash(system) + 0x9e3779b97f4a7c15ULL;
    h ^= util::fnv1a_hash(user) * 0x100000001b3ULL;
    util::SplitMix64 rng(h);
    auto letter = static_cast<AnswerLetter>(rng.next_below(3));
    return approximate_usage(render_tagged_response(letter), system, user);
}

}  // namespace fincot::inference
