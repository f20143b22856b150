#include "auditgame/ledger.hpp"

#include "auditgame/errors.hpp"

#include <json.hpp>
#include <sodium.h>

#include <fstream>

namespace auditgame {

using nlohmann::json;

std::string to_string(Rejection r) {
  switch (r) {
    case Rejection::unknown_challenge: return "unknown_challenge";
    case Rejection::expired_challenge: return "expired_challenge";
    case Rejection::wrong_owner: return "wrong_owner";
    case Rejection::counterfeit_coin: return "counterfeit_coin";
    case Rejection::double_spend: return "double_spend";
    case Rejection::bad_signature: return "bad_signature";
    case Rejection::malformed: return "malformed";
  }
  return "unknown";
}

namespace {

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_bytes(Bytes& out, const std::uint8_t* data, std::size_t size) {
  put_u64(out, size);
  out.insert(out.end(), data, data + size);
}

void put_bytes(Bytes& out, const Bytes& b) { put_bytes(out, b.data(), b.size()); }

void put_str(Bytes& out, const std::string& s) {
  put_bytes(out, reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

void put_meta(Bytes& out, const CoinMetadata& meta) {
  put_u64(out, meta.coin_id);
  put_u64(out, static_cast<std::uint64_t>(meta.valid_from));
  put_u64(out, static_cast<std::uint64_t>(meta.valid_until));
  put_str(out, meta.issuer_note);
}

}  // namespace

Bytes coin_message(const Bytes& owner_pk, const CoinMetadata& meta) {
  Bytes out;
  put_str(out, "coin-v1");
  put_bytes(out, owner_pk);
  put_meta(out, meta);
  return out;
}

Bytes raw_receipt_bytes(const RawReceipt& raw) {
  Bytes out;
  put_str(out, "r0-v1");
  put_str(out, raw.goods);
  put_u64(out, static_cast<std::uint64_t>(raw.price));
  put_bytes(out, raw.owner_pk);
  put_u64(out, raw.coins.size());
  for (const auto& coin : raw.coins) {
    put_bytes(out, coin.owner_pk);
    put_meta(out, coin.meta);
    put_bytes(out, coin.issuer_sig);
  }
  return out;
}

Bytes receipt_message(const RawReceipt& raw, const Challenge& z) {
  Bytes out;
  put_str(out, "receipt-v1");
  put_bytes(out, raw_receipt_bytes(raw));
  put_bytes(out, z.data(), z.size());
  return out;
}

Digest raw_receipt_hash(const RawReceipt& raw) { return sha256(raw_receipt_bytes(raw)); }

bool verify_coin(const SignatureScheme& scheme, const Bytes& admin_pk, const Coin& coin) {
  return scheme.verify(admin_pk, coin_message(coin.owner_pk, coin.meta), coin.issuer_sig);
}

void check_well_formed(const RawReceipt& raw) {
  if (raw.coins.empty()) throw InputError("receipt lists no coins");
  if (raw.owner_pk.empty()) throw InputError("receipt has no owner public key");
  if (raw.price < 0) throw InputError("receipt price is negative");
  for (const auto& coin : raw.coins)
    if (coin.owner_pk != raw.coins.front().owner_pk)
      throw InputError("receipt lists coins of different owners");
}

std::string challenge_to_hex(const Challenge& z) { return to_hex(z.data(), z.size()); }

Challenge challenge_from_hex(const std::string& hex) {
  const Bytes b = from_hex(hex);
  if (b.size() != 16) throw InputError("challenge must be 16 bytes");
  Challenge z{};
  std::copy(b.begin(), b.end(), z.begin());
  return z;
}

namespace {

json coin_json(const Coin& coin) {
  return json{{"owner_pk", to_hex(coin.owner_pk)},
              {"coin_id", coin.meta.coin_id},
              {"valid_from", coin.meta.valid_from},
              {"valid_until", coin.meta.valid_until},
              {"issuer_note", coin.meta.issuer_note},
              {"issuer_sig", to_hex(coin.issuer_sig)}};
}

Coin coin_of(const json& j) {
  Coin c;
  c.owner_pk = from_hex(j.at("owner_pk").get<std::string>());
  c.meta.coin_id = j.at("coin_id").get<std::uint64_t>();
  c.meta.valid_from = j.at("valid_from").get<std::int64_t>();
  c.meta.valid_until = j.at("valid_until").get<std::int64_t>();
  c.meta.issuer_note = j.at("issuer_note").get<std::string>();
  c.issuer_sig = from_hex(j.at("issuer_sig").get<std::string>());
  return c;
}

json raw_json(const RawReceipt& raw) {
  json coins = json::array();
  for (const auto& c : raw.coins) coins.push_back(coin_json(c));
  return json{{"goods", raw.goods}, {"price", raw.price}, {"owner_pk", to_hex(raw.owner_pk)}, {"coins", coins}};
}

RawReceipt raw_of(const json& j) {
  RawReceipt raw;
  raw.goods = j.at("goods").get<std::string>();
  raw.price = j.at("price").get<std::int64_t>();
  raw.owner_pk = from_hex(j.at("owner_pk").get<std::string>());
  for (const auto& c : j.at("coins")) raw.coins.push_back(coin_of(c));
  return raw;
}

json receipt_json(const Receipt& r) {
  return json{{"raw", raw_json(r.raw)}, {"challenge", challenge_to_hex(r.challenge)}, {"user_sig", to_hex(r.user_sig)}};
}

Receipt receipt_of(const json& j) {
  Receipt r;
  r.raw = raw_of(j.at("raw"));
  r.challenge = challenge_from_hex(j.at("challenge").get<std::string>());
  r.user_sig = from_hex(j.at("user_sig").get<std::string>());
  return r;
}

template <class F>
auto parse_json(const std::string& text, F&& fn) {
  try {
    return fn(json::parse(text));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed ledger document: ") + e.what());
  }
}

}  // namespace

std::string coin_to_json(const Coin& coin) { return coin_json(coin).dump(); }
Coin coin_from_json(const std::string& text) { return parse_json(text, coin_of); }
std::string receipt_to_json(const Receipt& receipt) { return receipt_json(receipt).dump(); }
Receipt receipt_from_json(const std::string& text) { return parse_json(text, receipt_of); }
std::string raw_receipt_to_json(const RawReceipt& raw) { return raw_json(raw).dump(); }
RawReceipt raw_receipt_from_json(const std::string& text) { return parse_json(text, raw_of); }

ReplayReport replay_receipt_log(const std::filesystem::path& path, const SignatureScheme& scheme,
                                const Bytes& admin_pk) {
  ReplayReport report;
  std::ifstream in(path);
  if (!in) return report;
  std::set<std::pair<Bytes, std::uint64_t>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++report.records;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    Receipt r;
    try {
      r = receipt_from_json(line);
      check_well_formed(r.raw);
    } catch (const std::exception& e) {
      report.errors.push_back(where + e.what());
      continue;
    }
    bool ok = true;
    for (const auto& coin : r.raw.coins) {
      if (coin.owner_pk != r.raw.owner_pk) {
        report.errors.push_back(where + "coin " + std::to_string(coin.meta.coin_id) + " has another owner");
        ok = false;
      }
      if (!verify_coin(scheme, admin_pk, coin)) {
        report.errors.push_back(where + "coin " + std::to_string(coin.meta.coin_id) + " fails verification");
        ok = false;
      }
      if (!seen.insert({coin.owner_pk, coin.meta.coin_id}).second) {
        report.errors.push_back(where + "coin " + std::to_string(coin.meta.coin_id) + " spent twice");
        ok = false;
      }
    }
    if (!scheme.verify(r.raw.owner_pk, receipt_message(r.raw, r.challenge), r.user_sig)) {
      report.errors.push_back(where + "user signature fails verification");
      ok = false;
    }
    if (ok) ++report.verified;
  }
  return report;
}

Ledger::Ledger(std::shared_ptr<const SignatureScheme> scheme, KeyPair admin_keys, LedgerOptions options)
    : scheme_(std::move(scheme)), admin_keys_(std::move(admin_keys)), options_(std::move(options)) {
  if (!scheme_) throw InputError("ledger needs a signature scheme");
  ensure_sodium();
  if (options_.seed) {
    rng_.seed(*options_.seed);
  } else {
    std::uint64_t s = 0;
    randombytes_buf(&s, sizeof(s));
    rng_.seed(s);
  }
  if (!options_.receipt_log.empty() && std::filesystem::exists(options_.receipt_log)) {
    const auto report = replay_receipt_log(options_.receipt_log, *scheme_, admin_pk());
    if (!report.ok()) throw InputError("receipt log fails replay: " + report.errors.front());
    std::ifstream in(options_.receipt_log);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Receipt r = receipt_from_json(line);
      for (const auto& coin : r.raw.coins) spent_.insert({coin.owner_pk, coin.meta.coin_id});
      approved_.push_back(std::move(r));
    }
  }
  if (!options_.mint_log.empty() && std::filesystem::exists(options_.mint_log)) {
    std::ifstream in(options_.mint_log);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const Coin coin = coin_from_json(line);
      if (!verify_coin(*scheme_, admin_pk(), coin)) throw InputError("mint log holds a coin that fails verification");
      minted_.insert({coin.owner_pk, coin.meta.coin_id});
    }
  }
}

std::int64_t Ledger::now_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(options_.clock().time_since_epoch()).count();
}

Challenge Ledger::fresh_challenge() {
  Challenge z{};
  if (options_.seed) {
    for (std::size_t i = 0; i < z.size(); i += 8) {
      const std::uint64_t word = rng_();
      for (std::size_t b = 0; b < 8; ++b) z[i + b] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  } else {
    randombytes_buf(z.data(), z.size());
  }
  return z;
}

void Ledger::append_line(const std::filesystem::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for append");
  out << line << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

Coin Ledger::mint(const Bytes& recipient_pk, const CoinMetadata& meta) {
  if (recipient_pk.empty()) throw InputError("mint needs a recipient public key");
  std::lock_guard lock(mutex_);
  const CoinKey key{recipient_pk, meta.coin_id};
  if (minted_.count(key)) throw InputError("coin id " + std::to_string(meta.coin_id) + " already minted for this owner");
  Coin coin;
  coin.owner_pk = recipient_pk;
  coin.meta = meta;
  coin.issuer_sig = scheme_->sign(admin_keys_.secret_key, coin_message(recipient_pk, meta));
  if (!options_.mint_log.empty()) append_line(options_.mint_log, coin_to_json(coin));
  minted_.insert(key);
  return coin;
}

Challenge Ledger::begin_spend(const RawReceipt& raw) {
  check_well_formed(raw);
  const Digest h = raw_receipt_hash(raw);
  std::lock_guard lock(mutex_);
  Challenge z = fresh_challenge();
  while (pending_.count({h, z})) z = fresh_challenge();
  pending_[{h, z}] = now_ms();
  return z;
}

SpendResult Ledger::finalize_spend(const Receipt& receipt) {
  SpendResult result;
  auto reject = [&](Rejection why, std::string detail) {
    result.approved = false;
    result.reason = why;
    result.detail = std::move(detail);
    return result;
  };
  try {
    check_well_formed(receipt.raw);
  } catch (const InputError& e) {
    return reject(Rejection::malformed, e.what());
  }
  const Digest h = raw_receipt_hash(receipt.raw);
  const Bytes message = receipt_message(receipt.raw, receipt.challenge);

  std::lock_guard lock(mutex_);
  const auto it = pending_.find({h, receipt.challenge});
  if (it == pending_.end()) return reject(Rejection::unknown_challenge, "challenge was not issued for this receipt");
  const std::int64_t issued = it->second;
  pending_.erase(it);
  if (now_ms() - issued > options_.challenge_expiry.count())
    return reject(Rejection::expired_challenge, "challenge expired");

  std::set<CoinKey> in_receipt;
  for (const auto& coin : receipt.raw.coins) {
    if (coin.owner_pk != receipt.raw.owner_pk)
      return reject(Rejection::wrong_owner, "coin " + std::to_string(coin.meta.coin_id) + " belongs to another key");
    if (!verify_coin(*scheme_, admin_pk(), coin))
      return reject(Rejection::counterfeit_coin, "coin " + std::to_string(coin.meta.coin_id) + " fails verification");
  }
  for (const auto& coin : receipt.raw.coins) {
    const CoinKey key{coin.owner_pk, coin.meta.coin_id};
    if (spent_.count(key) || !in_receipt.insert(key).second)
      return reject(Rejection::double_spend, "coin " + std::to_string(coin.meta.coin_id) + " already spent");
  }
  if (!scheme_->verify(receipt.raw.owner_pk, message, receipt.user_sig))
    return reject(Rejection::bad_signature, "receipt signature does not verify under the owner key");

  if (!options_.receipt_log.empty()) append_line(options_.receipt_log, receipt_to_json(receipt));
  spent_.insert(in_receipt.begin(), in_receipt.end());
  approved_.push_back(receipt);
  result.approved = true;
  return result;
}

bool Ledger::is_pending(const RawReceipt& raw, const Challenge& z) const {
  const Digest h = raw_receipt_hash(raw);
  std::lock_guard lock(mutex_);
  return pending_.count({h, z}) > 0;
}

std::size_t Ledger::pending_count() const {
  std::lock_guard lock(mutex_);
  return pending_.size();
}

std::vector<PendingChallenge> Ledger::export_pending() const {
  std::lock_guard lock(mutex_);
  std::vector<PendingChallenge> out;
  for (const auto& [key, issued] : pending_) out.push_back({key.first, key.second, issued});
  return out;
}

void Ledger::import_pending(const std::vector<PendingChallenge>& pending) {
  std::lock_guard lock(mutex_);
  for (const auto& p : pending) pending_[{p.receipt_hash, p.challenge}] = p.issued_ms;
}

std::size_t Ledger::approved_count() const {
  std::lock_guard lock(mutex_);
  return approved_.size();
}

std::vector<Receipt> Ledger::approved() const {
  std::lock_guard lock(mutex_);
  return approved_;
}

bool Ledger::is_spent(const Bytes& owner_pk, std::uint64_t coin_id) const {
  std::lock_guard lock(mutex_);
  return spent_.count({owner_pk, coin_id}) > 0;
}

}  // namespace auditgame
