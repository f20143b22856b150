#pragma once

#include "auditgame/signature.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace auditgame {

struct CoinMetadata {
  std::uint64_t coin_id = 0;
  std::int64_t valid_from = 0;
  std::int64_t valid_until = 0;
  std::string issuer_note;
};

/// One unit of currency: owner key, metadata, administrator signature over both.
struct Coin {
  Bytes owner_pk;
  CoinMetadata meta;
  Bytes issuer_sig;
};

/// Unsigned receipt r0. Every listed coin must belong to `owner_pk`.
struct RawReceipt {
  std::string goods;
  std::int64_t price = 0;
  std::vector<Coin> coins;
  Bytes owner_pk;
};

using Challenge = std::array<std::uint8_t, 16>;

struct Receipt {
  RawReceipt raw;
  Challenge challenge{};
  Bytes user_sig;
};

enum class Rejection {
  unknown_challenge,
  expired_challenge,
  wrong_owner,
  counterfeit_coin,
  double_spend,
  bad_signature,
  malformed
};

std::string to_string(Rejection r);

struct SpendResult {
  bool approved = false;
  std::optional<Rejection> reason;
  std::string detail;
};

// Canonical byte encodings (length-prefixed, fixed field order).
Bytes coin_message(const Bytes& owner_pk, const CoinMetadata& meta);
Bytes raw_receipt_bytes(const RawReceipt& raw);
Bytes receipt_message(const RawReceipt& raw, const Challenge& z);
Digest raw_receipt_hash(const RawReceipt& raw);

bool verify_coin(const SignatureScheme& scheme, const Bytes& admin_pk, const Coin& coin);

/// Throws InputError when r0 lists no coins, mixes owners, or has a negative price.
void check_well_formed(const RawReceipt& raw);

struct PendingChallenge {
  Digest receipt_hash{};
  Challenge challenge{};
  std::int64_t issued_ms = 0;
};

struct LedgerOptions {
  std::chrono::milliseconds challenge_expiry = std::chrono::minutes(10);
  /// Append-only log of approved receipts (one JSON record per line). Empty: memory only.
  std::filesystem::path receipt_log;
  /// Append-only log of minted (owner, coin_id) pairs. Empty: memory only.
  std::filesystem::path mint_log;
  /// Seeds challenge generation; unset draws from the system CSPRNG.
  std::optional<std::uint64_t> seed;
  std::function<std::chrono::system_clock::time_point()> clock = [] { return std::chrono::system_clock::now(); };
};

struct ReplayReport {
  std::size_t records = 0;
  std::size_t verified = 0;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

/// Administrator side of the currency. finalize_spend runs under one lock covering the
/// spent set and the log append.
class Ledger {
 public:
  /// Replays existing logs (crash recovery); throws InputError if a record fails to verify.
  Ledger(std::shared_ptr<const SignatureScheme> scheme, KeyPair admin_keys, LedgerOptions options = {});

  const Bytes& admin_pk() const { return admin_keys_.public_key; }
  const SignatureScheme& scheme() const { return *scheme_; }

  /// Throws InputError if this owner already holds a coin with the same id.
  Coin mint(const Bytes& recipient_pk, const CoinMetadata& meta);

  Challenge begin_spend(const RawReceipt& raw);
  SpendResult finalize_spend(const Receipt& receipt);

  bool is_pending(const RawReceipt& raw, const Challenge& z) const;
  std::size_t pending_count() const;
  std::vector<PendingChallenge> export_pending() const;
  void import_pending(const std::vector<PendingChallenge>& pending);

  std::size_t approved_count() const;
  std::vector<Receipt> approved() const;
  bool is_spent(const Bytes& owner_pk, std::uint64_t coin_id) const;

 private:
  using CoinKey = std::pair<Bytes, std::uint64_t>;
  std::int64_t now_ms() const;
  Challenge fresh_challenge();
  void append_line(const std::filesystem::path& path, const std::string& line);

  std::shared_ptr<const SignatureScheme> scheme_;
  KeyPair admin_keys_;
  LedgerOptions options_;
  mutable std::mutex mutex_;
  std::mt19937_64 rng_;
  std::set<CoinKey> minted_;
  std::set<CoinKey> spent_;
  std::vector<Receipt> approved_;
  std::map<std::pair<Digest, Challenge>, std::int64_t> pending_;
};

/// Re-verifies every approved receipt in a log: coin signatures, user signatures and
/// coin uniqueness.
ReplayReport replay_receipt_log(const std::filesystem::path& path, const SignatureScheme& scheme,
                                const Bytes& admin_pk);

// JSON line encodings shared by the log and the CLI.
std::string coin_to_json(const Coin& coin);
Coin coin_from_json(const std::string& text);
std::string receipt_to_json(const Receipt& receipt);
Receipt receipt_from_json(const std::string& text);
std::string raw_receipt_to_json(const RawReceipt& raw);
RawReceipt raw_receipt_from_json(const std::string& text);
std::string challenge_to_hex(const Challenge& z);
Challenge challenge_from_hex(const std::string& hex);

}  // namespace auditgame
