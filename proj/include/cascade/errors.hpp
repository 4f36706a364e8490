#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : Error(what + " (achieved error " + std::to_string(achieved_error) + ")"), achieved_error_(achieved_error) {}
    double achieved_error() const { return achieved_error_; }

private:
    double achieved_error_;
};

// A coupling coefficient vanished, so the mode cannot be observed.
class VanishingCoupling : public Error {
public:
    VanishingCoupling(long index, bool hyperbolic)
        : Error(std::string("vanishing coupling coefficient at ") + (hyperbolic ? "m = " : "n = ") +
                std::to_string(index)),
          index_(index),
          hyperbolic_(hyperbolic) {}
    long index() const { return index_; }
    bool hyperbolic() const { return hyperbolic_; }

private:
    long index_;
    bool hyperbolic_;
};

class IllConditioned : public Error {
public:
    IllConditioned(double condition, double residual)
        : Error("Gram matrix ill-conditioned: condition " + std::to_string(condition) + ", residual " +
                std::to_string(residual)),
          condition_(condition),
          residual_(residual) {}
    double condition() const { return condition_; }
    double residual() const { return residual_; }

private:
    double condition_;
    double residual_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what) : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class InsufficientRange : public Error {
public:
    using Error::Error;
};

}  // namespace cascade
