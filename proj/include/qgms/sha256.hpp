#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace qgms {

using Digest = std::array<std::uint8_t, 32>;

/// Incremental SHA-256 over OpenSSL's EVP interface.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(std::span<const std::uint8_t> bytes);
    Sha256& update(std::string_view bytes);
    Digest finish();

private:
    struct Impl;
    Impl* impl_;
};

Digest sha256(std::string_view bytes);
std::string sha256_hex(std::string_view bytes);

/// Lowercase hex.
std::string to_hex(std::span<const std::uint8_t> bytes);
/// Accepts exactly 64 hex digits (either case).
std::optional<Digest> digest_from_hex(std::string_view hex);

}  // namespace qgms
