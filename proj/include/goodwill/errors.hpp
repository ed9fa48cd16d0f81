#pragma once

#include <stdexcept>
#include <string>

namespace goodwill {

// Base class for every error the library raises on purpose. Callers that
// want blanket handling catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration: bad parameter values, mismatched domains between
// fields, unsupported catalog tags, malformed mode indices.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A spatial point lies outside the rectangle the field is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

// The indefinite terminal reward is too strong for the horizon: the
// well-posedness margin 1 - (gamma/2rho)(1 - e^{-2 rho T}) is not positive.
class IllPosedError : public Error {
public:
    IllPosedError(const std::string& msg, double margin)
        : Error(msg), margin_(margin) {}
    double margin() const { return margin_; }

private:
    double margin_;
};

// A per-mode Riccati solution escapes to -infinity inside the horizon.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& msg, double blowup_time)
        : Error(msg), blowup_time_(blowup_time) {}
    double blowup_time() const { return blowup_time_; }

private:
    double blowup_time_;
};

// gamma == 2*mu_k makes the Riccati closed form's constant undefined.
class DegenerateError : public Error {
public:
    using Error::Error;
};

// No control can meet the constraint (e.g. budget spend with b identically 0).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure while writing or reading artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace goodwill
