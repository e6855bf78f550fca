#pragma once

#include <stdexcept>
#include <string>

namespace patchscout {

// Base class for all library errors so callers can catch everything in one
// place when they only care about the exit code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input that could not be read at all (bad JSON line, bad config
// syntax, unparseable score file). Message carries file:line where known.
class ParseError : public Error {
public:
    using Error::Error;
};

// Input that parsed but violates a documented contract (split leakage,
// duplicate commit ids, single-class training corpus, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A referenced object does not exist (unknown commit id, missing repository
// directory, missing head file).
class LookupError : public Error {
public:
    using Error::Error;
};

// External process failure (git exited nonzero, could not spawn).
class ProcessError : public Error {
public:
    using Error::Error;
};

// Remote scorer: request-level failure (connection refused, HTTP error
// status). Retried before surfacing.
class TransportError : public Error {
public:
    using Error::Error;
};

// Remote scorer: the request did not complete within the deadline. Kept
// separate from TransportError so callers can distinguish a slow endpoint
// from a broken one.
class TimeoutError : public Error {
public:
    using Error::Error;
};

// Remote scorer: the endpoint answered but the payload violates the wire
// contract (missing "score", value out of [0,1], not JSON). Not retried.
class ProtocolError : public Error {
public:
    using Error::Error;
};

// Metric is undefined for the given inputs (e.g. AUC over a single class).
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

} // namespace patchscout
