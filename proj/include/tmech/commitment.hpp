#pragma once

#include "tmech/types.hpp"

#include <array>
#include <span>
#include <string_view>

namespace tmech {

using Digest = std::array<std::uint8_t, 32>;

inline constexpr std::string_view kCommitDomainTag = "trustless-mech/v1";

Digest sha256(std::span<std::uint8_t const> data);

struct Commitment
{
  Digest digest{};

  bool operator==(Commitment const &) const = default;
  auto operator<=>(Commitment const &) const = default;
};

struct Salt
{
  std::array<std::uint8_t, 32> bytes{};

  bool operator==(Salt const &) const = default;
};

// The preimage of a commitment: mechanism payload plus a fresh salt.
class CommitOpening
{
public:
  CommitOpening(Bytes payload, Salt salt);

  Bytes const &payload() const noexcept { return payload_; }
  Salt const  &salt() const noexcept { return salt_; }

  // Reveal message payload: salt (32 bytes) followed by the mechanism payload.
  Bytes to_reveal_payload() const;
  static CommitOpening from_reveal_payload(std::span<std::uint8_t const> bytes);

  bool operator==(CommitOpening const &) const = default;

private:
  Bytes payload_;
  Salt  salt_;
};

// tag(17) | len(contract) u8 | contract | len(agent) u8 | agent | salt(32) | payload
Bytes commitment_preimage(AgentId const &agent, ContractId const &contract_id,
                          CommitOpening const &opening);

Commitment make_commitment(AgentId const &agent, ContractId const &contract_id,
                           CommitOpening const &opening);

bool verify_opening(Commitment const &commitment, AgentId const &agent,
                    ContractId const &contract_id, CommitOpening const &opening);

// Commit message payload is the bare 32-byte digest.
Bytes      to_commit_payload(Commitment const &c);
Commitment from_commit_payload(std::span<std::uint8_t const> bytes);

std::string to_hex(std::span<std::uint8_t const> bytes);

}  // namespace tmech
