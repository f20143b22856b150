#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace auditgame {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

struct KeyPair {
  Bytes secret_key;
  Bytes public_key;
};

/// gen/sign/verify contract: verify(pk, m, sign(sk, m)) holds for every generated pair,
/// and verify is a deterministic function of its inputs.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual KeyPair gen() = 0;
  virtual Bytes sign(const Bytes& secret_key, const Bytes& message) const = 0;
  virtual bool verify(const Bytes& public_key, const Bytes& message, const Bytes& signature) const = 0;
  /// Bits of security λ.
  virtual int security_parameter() const = 0;
  virtual std::string name() const = 0;
};

/// Ed25519 from libsodium. Keys come from the system CSPRNG.
class Ed25519Scheme final : public SignatureScheme {
 public:
  Ed25519Scheme();
  KeyPair gen() override;
  Bytes sign(const Bytes& secret_key, const Bytes& message) const override;
  bool verify(const Bytes& public_key, const Bytes& message, const Bytes& signature) const override;
  int security_parameter() const override { return 128; }
  std::string name() const override { return "ed25519"; }
};

/// Reproducible stand-in for unit tests: keys derive from a seed, signatures are keyed
/// SHA-256 tags. Verification looks the secret up in a registry private to this object,
/// so it only works for keys generated by the same instance. Not secure.
class ToySignatureScheme final : public SignatureScheme {
 public:
  explicit ToySignatureScheme(std::uint64_t seed);
  KeyPair gen() override;
  Bytes sign(const Bytes& secret_key, const Bytes& message) const override;
  bool verify(const Bytes& public_key, const Bytes& message, const Bytes& signature) const override;
  int security_parameter() const override { return 64; }
  std::string name() const override { return "toy-sha256"; }

 private:
  std::mt19937_64 rng_;
  mutable std::shared_mutex mutex_;
  std::map<Bytes, Bytes> secret_by_public_;
};

Digest sha256(const Bytes& data);
std::string to_hex(const std::uint8_t* data, std::size_t size);
inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }
Bytes from_hex(std::string_view hex);

/// Throws std::runtime_error if libsodium cannot initialize.
void ensure_sodium();

}  // namespace auditgame
