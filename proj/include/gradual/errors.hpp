#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradual {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RewardOutOfRange : public Error {
 public:
  explicit RewardOutOfRange(int raw)
      : Error("reward octet out of range: " + std::to_string(raw)), raw_(raw) {}
  int raw() const { return raw_; }

 private:
  int raw_;
};

class FrameSizeError : public Error {
 public:
  explicit FrameSizeError(std::size_t size)
      : Error("frame must be exactly 2 octets, got " + std::to_string(size)) {}
};

class StepAfterTermination : public Error {
 public:
  using Error::Error;
};

class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

class NonErgodic : public Error {
 public:
  explicit NonErgodic(std::vector<std::vector<std::size_t>> classes);
  const std::vector<std::vector<std::size_t>>& recurrent_classes() const { return classes_; }

 private:
  std::vector<std::vector<std::size_t>> classes_;
};

struct UnifilarityWitness {
  std::size_t state;
  std::size_t input;
  std::size_t output;
};

class NotUnifilar : public Error {
 public:
  explicit NotUnifilar(std::vector<UnifilarityWitness> witnesses);
  const std::vector<UnifilarityWitness>& witnesses() const { return witnesses_; }

 private:
  std::vector<UnifilarityWitness> witnesses_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class StateExplosion : public Error {
 public:
  StateExplosion(std::string what, std::size_t cap)
      : Error(std::move(what)), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

}  // namespace gradual
