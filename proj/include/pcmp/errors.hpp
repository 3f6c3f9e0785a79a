#pragma once

#include <stdexcept>
#include <string>

namespace pcmp {

// Base class for protocol-level failures. Usage errors (bad arguments to
// library entry points) throw std::invalid_argument / std::logic_error
// instead.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroLambda : ProtocolError {
  ZeroLambda() : ProtocolError("blinding factor lambda must be nonzero") {}
};

struct EqualBlindedValues : ProtocolError {
  EqualBlindedValues()
      : ProtocolError("alpha equals beta; the ordering round excludes equal inputs") {}
};

struct EqualSecrets : ProtocolError {
  EqualSecrets()
      : ProtocolError("secrets are equal; the ordering protocol requires a != b") {}
};

struct KeyExhausted : ProtocolError {
  KeyExhausted(std::size_t needed, std::size_t remaining)
      : ProtocolError("one-time-pad key exhausted: need " + std::to_string(needed) +
                      " bits, " + std::to_string(remaining) + " left") {}
};

struct Bb84Aborted : ProtocolError {
  double qber;
  explicit Bb84Aborted(double q)
      : ProtocolError("bb84 aborted: estimated QBER " + std::to_string(q) +
                      " above threshold"),
        qber(q) {}
};

struct BadRoundCount : ProtocolError {
  using ProtocolError::ProtocolError;
};

struct BadCounts : ProtocolError {
  using ProtocolError::ProtocolError;
};

struct BadRange : ProtocolError {
  using ProtocolError::ProtocolError;
};

}  // namespace pcmp
