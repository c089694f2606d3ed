#include "tmech/commitment.hpp"

#include <openssl/sha.h>

#include <algorithm>

namespace tmech {

Digest sha256(std::span<std::uint8_t const> data)
{
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

CommitOpening::CommitOpening(Bytes payload, Salt salt)
  : payload_{std::move(payload)}
  , salt_{salt}
{
  if (payload_.empty())
  {
    throw ValidationError{"commit opening payload must be non-empty"};
  }
}

Bytes CommitOpening::to_reveal_payload() const
{
  Bytes out(salt_.bytes.begin(), salt_.bytes.end());
  out.insert(out.end(), payload_.begin(), payload_.end());
  return out;
}

CommitOpening CommitOpening::from_reveal_payload(std::span<std::uint8_t const> bytes)
{
  if (bytes.size() <= 32)
  {
    throw ValidationError{"reveal payload must hold a 32-byte salt and a non-empty payload"};
  }
  Salt salt;
  std::copy_n(bytes.begin(), 32, salt.bytes.begin());
  return {Bytes(bytes.begin() + 32, bytes.end()), salt};
}

namespace {

void append_identifier(Bytes &out, std::string const &id, char const *what)
{
  if (id.size() > 255)
  {
    throw ValidationError{std::string{what} + " identifier longer than 255 bytes"};
  }
  out.push_back(static_cast<std::uint8_t>(id.size()));
  out.insert(out.end(), id.begin(), id.end());
}

}  // namespace

Bytes commitment_preimage(AgentId const &agent, ContractId const &contract_id,
                          CommitOpening const &opening)
{
  Bytes pre(kCommitDomainTag.begin(), kCommitDomainTag.end());
  append_identifier(pre, contract_id, "contract");
  append_identifier(pre, agent, "agent");
  auto const &salt = opening.salt().bytes;
  pre.insert(pre.end(), salt.begin(), salt.end());
  pre.insert(pre.end(), opening.payload().begin(), opening.payload().end());
  return pre;
}

Commitment make_commitment(AgentId const &agent, ContractId const &contract_id,
                           CommitOpening const &opening)
{
  return {sha256(commitment_preimage(agent, contract_id, opening))};
}

bool verify_opening(Commitment const &commitment, AgentId const &agent,
                    ContractId const &contract_id, CommitOpening const &opening)
{
  if (agent.size() > 255 || contract_id.size() > 255)
  {
    return false;
  }
  return make_commitment(agent, contract_id, opening) == commitment;
}

Bytes to_commit_payload(Commitment const &c)
{
  return {c.digest.begin(), c.digest.end()};
}

Commitment from_commit_payload(std::span<std::uint8_t const> bytes)
{
  if (bytes.size() != 32)
  {
    throw ValidationError{"commit payload must be exactly 32 bytes"};
  }
  Commitment c;
  std::copy(bytes.begin(), bytes.end(), c.digest.begin());
  return c;
}

std::string to_hex(std::span<std::uint8_t const> bytes)
{
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes)
  {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

}  // namespace tmech
