#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace cti4ai::aiti {

enum class ObjectKind;

/// Object identifier. Canonical ids look like `ai-attack--<uuid>`; any
/// nonempty text without control characters is accepted so that free-form
/// ids (`exampleFGM_Resnet-50_CIFAR10`) survive parsing.
class Identifier {
 public:
  /// Throws ArgumentError on empty text or control characters.
  explicit Identifier(std::string raw);

  const std::string& str() const { return raw_; }

  /// `<type>--<uuid>` with a lowercase version-4 or version-5 uuid.
  bool is_canonical() const;
  /// The part before `--`, if the id has one.
  std::optional<std::string_view> type_prefix() const;

  auto operator<=>(const Identifier&) const = default;

 private:
  std::string raw_;
};

bool is_canonical_uuid(std::string_view text);

/// Seedable source of version-4 uuids.
class UuidSource {
 public:
  explicit UuidSource(std::uint64_t seed);
  static UuidSource from_entropy();
  UuidSource(UuidSource&&) noexcept;
  UuidSource& operator=(UuidSource&&) noexcept;
  ~UuidSource();

  std::string next();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// `<kind>--<uuid-v4>` drawn from `source`.
Identifier new_id(ObjectKind kind, UuidSource& source);

/// Name-based (SHA-1, version 5) uuid text for `name`.
std::string name_based_uuid(std::string_view name);

/// `<kind>--<uuid-v5 of name>`.
Identifier name_based_id(ObjectKind kind, std::string_view name);

}  // namespace cti4ai::aiti
