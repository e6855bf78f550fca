#include "patchscout/remote_scorer.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "patchscout/errors.hpp"

namespace patchscout {

namespace {

// Splits "http://host:port/path" into the client base and the request path.
void parse_endpoint(const std::string& endpoint, std::string& base,
                    std::string& path) {
    const std::string scheme = "http://";
    if (endpoint.rfind(scheme, 0) != 0) {
        throw ParseError("scorer endpoint must start with http://: " + endpoint);
    }
    size_t slash = endpoint.find('/', scheme.size());
    if (slash == std::string::npos) {
        base = endpoint;
        path = "/";
    } else {
        base = endpoint.substr(0, slash);
        path = endpoint.substr(slash);
    }
    if (base.size() == scheme.size()) {
        throw ParseError("scorer endpoint has no host: " + endpoint);
    }
}

} // namespace

RemoteScorer::RemoteScorer(RemoteScorerConfig config)
    : config_(std::move(config)) {
    parse_endpoint(config_.endpoint, base_, path_);
    if (config_.timeout_ms <= 0) throw ValidationError("scorer timeout must be > 0");
    if (config_.max_retries < 0) throw ValidationError("scorer retries must be >= 0");
}

double RemoteScorer::attempt_once(const std::string& text, bool& retryable) {
    httplib::Client client(base_);
    client.set_connection_timeout(0, config_.timeout_ms * 1000);
    client.set_read_timeout(0, config_.timeout_ms * 1000);
    client.set_write_timeout(0, config_.timeout_ms * 1000);

    nlohmann::json body;
    body["text"] = text;

    auto started = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(path_, body.dump(), "application/json");
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

    if (!res) {
        // The library reports a read-phase deadline and an abruptly closed
        // connection with the same error code; elapsed time tells them
        // apart well enough for retry classification.
        bool deadline_shaped =
            res.error() == httplib::Error::ConnectionTimeout ||
            ((res.error() == httplib::Error::Read ||
              res.error() == httplib::Error::Write) &&
             elapsed + 5 >= config_.timeout_ms);
        if (deadline_shaped) {
            throw TimeoutError("scorer request exceeded " +
                               std::to_string(config_.timeout_ms) + " ms");
        }
        retryable = true;
        throw TransportError("scorer request failed: " +
                             httplib::to_string(res.error()));
    }

    if (res->status < 200 || res->status >= 300) {
        // 4xx blames the request; sending it again cannot help.
        retryable = res->status < 400 || res->status >= 500;
        throw TransportError("scorer returned HTTP " + std::to_string(res->status));
    }

    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception&) {
        throw ProtocolError("scorer reply is not JSON: " + res->body.substr(0, 80));
    }
    if (!reply.is_object() || !reply.contains("score") ||
        !reply["score"].is_number()) {
        throw ProtocolError("scorer reply lacks a numeric \"score\" field");
    }
    double score = reply["score"].get<double>();
    if (score < 0.0 || score > 1.0) {
        throw ProtocolError("scorer score " + std::to_string(score) +
                            " outside [0,1]");
    }
    return score;
}

double RemoteScorer::score(const std::string& text) {
    last_retries_ = 0;
    int backoff = config_.backoff_base_ms;
    for (int attempt = 0;; ++attempt) {
        bool retryable = false;
        try {
            return attempt_once(text, retryable);
        } catch (const TransportError&) {
            if (!retryable || attempt >= config_.max_retries) throw;
        } catch (const TimeoutError&) {
            if (attempt >= config_.max_retries) throw;
        }
        // ProtocolError propagates immediately: the server answered, the
        // answer is wrong, and asking again will not change it.
        ++last_retries_;
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
        backoff *= 2;
    }
}

} // namespace patchscout
