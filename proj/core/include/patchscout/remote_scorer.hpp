#pragma once

#include <string>

namespace patchscout {

// Client for an externally hosted scorer speaking a one-endpoint protocol:
// HTTP POST with JSON body {"text": <document text>}, reply JSON
// {"score": <float in [0,1]>}.
//
// Failure taxonomy, matching the error types in errors.hpp:
//   TimeoutError   the request missed the deadline; retried.
//   TransportError connection failures and non-2xx statuses; retried with
//                  exponential backoff, except 4xx which means the request
//                  itself is wrong and fails immediately.
//   ProtocolError  the endpoint answered 2xx but the payload breaks the
//                  contract (not JSON, no "score", out of range). Never
//                  retried: the server is answering consistently wrong.
struct RemoteScorerConfig {
    std::string endpoint; // e.g. "http://127.0.0.1:8080/score"
    int timeout_ms = 2000;
    int max_retries = 2;     // attempts beyond the first
    int backoff_base_ms = 100; // doubles per retry
};

class RemoteScorer {
public:
    explicit RemoteScorer(RemoteScorerConfig config);

    // Scores one document text. Throws per the taxonomy above once retries
    // are exhausted. Not safe for concurrent use of one instance; use one
    // scorer per worker.
    double score(const std::string& text);

    // Retries consumed by the most recent score() call, including one that
    // ended in an exception.
    int last_retries() const { return last_retries_; }

private:
    RemoteScorerConfig config_;
    std::string base_;
    std::string path_;
    int last_retries_ = 0;

    double attempt_once(const std::string& text, bool& retryable);
};

} // namespace patchscout
