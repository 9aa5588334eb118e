#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace cti4ai {

/// A UTC instant with millisecond precision.
///
/// The canonical text form is RFC 3339 with a trailing `Z` and exactly three
/// fractional digits. The parser also accepts zone-less forms such as
/// `2022-08-11T23:39:03`, which are read as UTC, and numeric offsets.
/// Fractional digits beyond milliseconds are truncated.
class Timestamp {
 public:
  constexpr Timestamp() = default;

  static constexpr Timestamp from_millis(std::int64_t millis_since_epoch) {
    Timestamp t;
    t.millis_ = millis_since_epoch;
    return t;
  }

  /// Throws ArgumentError on malformed input.
  static Timestamp parse(std::string_view text);
  static std::optional<Timestamp> try_parse(std::string_view text) noexcept;

  constexpr std::int64_t millis() const { return millis_; }

  /// `2022-08-11T23:39:03.000Z`
  std::string to_rfc3339() const;
  /// `2022-08-11T23:39:03`, with `.mmm` appended only when milliseconds are nonzero.
  std::string to_zoneless() const;

  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  std::int64_t millis_ = 0;
};

/// Injectable time source. Operations that stamp `created` take one of these.
using Clock = std::function<Timestamp()>;

Clock system_clock();
Clock fixed_clock(Timestamp t);

}  // namespace cti4ai
