#pragma once

#include <stdexcept>
#include <string>

namespace bdmec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by validate_scenario and the config loader; carries the offending
// field so callers can report it without parsing the message.
class InvalidScenario : public Error {
public:
    InvalidScenario(std::string field, std::string reason)
        : Error("invalid scenario: " + field + ": " + reason),
          field_(std::move(field)),
          reason_(std::move(reason)) {}

    const std::string& field() const { return field_; }
    const std::string& reason() const { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

class InvalidRange : public Error {
public:
    using Error::Error;
};

class NonPositiveTime : public Error {
public:
    using Error::Error;
};

class InvalidRecord : public Error {
public:
    using Error::Error;
};

class NotConnected : public Error {
public:
    using Error::Error;
};

class LedgerUnavailable : public Error {
public:
    using Error::Error;
};

class ZeroTotalJobs : public Error {
public:
    using Error::Error;
};

class NonPositiveTrueValue : public Error {
public:
    using Error::Error;
};

class UnknownTarget : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class UnknownPreset : public Error {
public:
    using Error::Error;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

}  // namespace bdmec
