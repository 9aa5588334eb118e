#include "cti4ai/common/timestamp.hpp"

#include <chrono>
#include <cstdio>

#include "cti4ai/common/errors.hpp"

namespace cti4ai {

namespace {

using namespace std::chrono;

constexpr std::int64_t kMillisPerDay = 86'400'000;

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ == text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::optional<int> digits(std::size_t count) {
    if (text_.size() - pos_ < count) return std::nullopt;
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const char c = text_[pos_ + i];
      if (c < '0' || c > '9') return std::nullopt;
      value = value * 10 + (c - '0');
    }
    pos_ += count;
    return value;
  }

  bool at_digit() const { return peek() >= '0' && peek() <= '9'; }
  void skip() { ++pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<Timestamp> parse_impl(std::string_view text) {
  Cursor in(text);
  const auto y = in.digits(4);
  if (!y || !in.consume('-')) return std::nullopt;
  const auto mo = in.digits(2);
  if (!mo || !in.consume('-')) return std::nullopt;
  const auto d = in.digits(2);
  if (!d) return std::nullopt;
  if (!in.consume('T') && !in.consume('t')) return std::nullopt;
  const auto h = in.digits(2);
  if (!h || !in.consume(':')) return std::nullopt;
  const auto mi = in.digits(2);
  if (!mi || !in.consume(':')) return std::nullopt;
  const auto s = in.digits(2);
  if (!s) return std::nullopt;

  int millis = 0;
  if (in.consume('.')) {
    if (!in.at_digit()) return std::nullopt;
    int scale = 100;
    while (in.at_digit()) {
      const int digit = in.peek() - '0';
      millis += digit * scale;
      scale /= 10;
      in.skip();
    }
  }

  int offset_minutes = 0;
  if (in.consume('Z') || in.consume('z')) {
  } else if (in.peek() == '+' || in.peek() == '-') {
    const int sign = in.peek() == '-' ? -1 : 1;
    in.skip();
    const auto oh = in.digits(2);
    if (!oh || !in.consume(':')) return std::nullopt;
    const auto om = in.digits(2);
    if (!om || *oh > 23 || *om > 59) return std::nullopt;
    offset_minutes = sign * (*oh * 60 + *om);
  }
  if (!in.done()) return std::nullopt;

  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *s > 60) return std::nullopt;

  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t seconds_of_day = *h * 3600 + *mi * 60 + *s;
  const std::int64_t total = days * kMillisPerDay + seconds_of_day * 1000 + millis -
                             static_cast<std::int64_t>(offset_minutes) * 60'000;
  return Timestamp::from_millis(total);
}

struct Parts {
  int year;
  unsigned month, day;
  int hour, minute, second, millis;
};

Parts split(std::int64_t total) {
  std::int64_t days = total / kMillisPerDay;
  std::int64_t rem = total % kMillisPerDay;
  if (rem < 0) {
    rem += kMillisPerDay;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  return Parts{static_cast<int>(ymd.year()),
               static_cast<unsigned>(ymd.month()),
               static_cast<unsigned>(ymd.day()),
               static_cast<int>(rem / 3'600'000),
               static_cast<int>(rem / 60'000 % 60),
               static_cast<int>(rem / 1000 % 60),
               static_cast<int>(rem % 1000)};
}

}  // namespace

Timestamp Timestamp::parse(std::string_view text) {
  if (auto t = parse_impl(text)) return *t;
  throw ArgumentError("invalid timestamp: '" + std::string(text) + "'");
}

std::optional<Timestamp> Timestamp::try_parse(std::string_view text) noexcept {
  return parse_impl(text);
}

std::string Timestamp::to_rfc3339() const {
  const Parts p = split(millis_);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", p.year, p.month, p.day,
                p.hour, p.minute, p.second, p.millis);
  return buf;
}

std::string Timestamp::to_zoneless() const {
  const Parts p = split(millis_);
  char buf[40];
  if (p.millis == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", p.year, p.month, p.day,
                  p.hour, p.minute, p.second);
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03d", p.year, p.month, p.day,
                  p.hour, p.minute, p.second, p.millis);
  }
  return buf;
}

Clock system_clock() {
  return [] {
    const auto now = std::chrono::system_clock::now();
    return Timestamp::from_millis(
        duration_cast<milliseconds>(now.time_since_epoch()).count());
  };
}

Clock fixed_clock(Timestamp t) {
  return [t] { return t; };
}

}  // namespace cti4ai
