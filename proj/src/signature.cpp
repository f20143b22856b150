#include "auditgame/signature.hpp"

#include "auditgame/errors.hpp"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace auditgame {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium failed to initialize");
}

Digest sha256(const Bytes& data) {
  ensure_sodium();
  Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

std::string to_hex(const std::uint8_t* data, std::size_t size) {
  ensure_sodium();
  std::string out(size * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data, size);
  out.pop_back();
  return out;
}

Bytes from_hex(std::string_view hex) {
  ensure_sodium();
  if (hex.size() % 2 != 0) throw InputError("hex string has odd length");
  Bytes out(hex.size() / 2);
  std::size_t written = 0;
  if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &written, nullptr) != 0 ||
      written != out.size())
    throw InputError("invalid hex string");
  return out;
}

Ed25519Scheme::Ed25519Scheme() { ensure_sodium(); }

KeyPair Ed25519Scheme::gen() {
  KeyPair kp;
  kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
  kp.secret_key.resize(crypto_sign_SECRETKEYBYTES);
  if (crypto_sign_keypair(kp.public_key.data(), kp.secret_key.data()) != 0)
    throw std::runtime_error("ed25519 key generation failed");
  return kp;
}

Bytes Ed25519Scheme::sign(const Bytes& secret_key, const Bytes& message) const {
  if (secret_key.size() != crypto_sign_SECRETKEYBYTES) throw InputError("ed25519 secret key has wrong length");
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_key.data());
  return sig;
}

bool Ed25519Scheme::verify(const Bytes& public_key, const Bytes& message, const Bytes& signature) const {
  if (public_key.size() != crypto_sign_PUBLICKEYBYTES || signature.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), public_key.data()) == 0;
}

ToySignatureScheme::ToySignatureScheme(std::uint64_t seed) : rng_(seed) { ensure_sodium(); }

namespace {

Bytes tagged(std::string_view tag, const Bytes& a, const Bytes& b = {}) {
  Bytes buf(tag.begin(), tag.end());
  buf.insert(buf.end(), a.begin(), a.end());
  buf.insert(buf.end(), b.begin(), b.end());
  const Digest d = sha256(buf);
  return Bytes(d.begin(), d.end());
}

}  // namespace

KeyPair ToySignatureScheme::gen() {
  std::unique_lock lock(mutex_);
  KeyPair kp;
  kp.secret_key.resize(32);
  for (std::size_t i = 0; i < 32; i += 8) {
    const std::uint64_t word = rng_();
    for (std::size_t b = 0; b < 8; ++b) kp.secret_key[i + b] = static_cast<std::uint8_t>(word >> (8 * b));
  }
  kp.public_key = tagged("toy-pk", kp.secret_key);
  secret_by_public_[kp.public_key] = kp.secret_key;
  return kp;
}

Bytes ToySignatureScheme::sign(const Bytes& secret_key, const Bytes& message) const {
  return tagged("toy-sig", secret_key, message);
}

bool ToySignatureScheme::verify(const Bytes& public_key, const Bytes& message, const Bytes& signature) const {
  std::shared_lock lock(mutex_);
  const auto it = secret_by_public_.find(public_key);
  if (it == secret_by_public_.end()) return false;
  return sign(it->second, message) == signature;
}

}  // namespace auditgame
