#include "cti4ai/aiti/identifier.hpp"

#include <random>

#include <boost/uuid/name_generator_sha1.hpp>
#include <boost/uuid/random_generator.hpp>
#include <boost/uuid/string_generator.hpp>
#include <boost/uuid/uuid.hpp>
#include <boost/uuid/uuid_io.hpp>

#include "cti4ai/aiti/object.hpp"
#include "cti4ai/common/errors.hpp"

namespace cti4ai::aiti {

Identifier::Identifier(std::string raw) : raw_(std::move(raw)) {
  if (raw_.empty()) throw ArgumentError("identifier must not be empty");
  for (const unsigned char c : raw_) {
    if (c < 0x20 || c == 0x7f) throw ArgumentError("identifier contains a control character");
  }
}

bool is_canonical_uuid(std::string_view text) {
  if (text.size() != 36) return false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (c != '-') return false;
    } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
      return false;
    }
  }
  const char version = text[14];
  const char variant = text[19];
  return (version == '4' || version == '5') &&
         (variant == '8' || variant == '9' || variant == 'a' || variant == 'b');
}

std::optional<std::string_view> Identifier::type_prefix() const {
  const auto pos = raw_.find("--");
  if (pos == std::string::npos || pos == 0) return std::nullopt;
  return std::string_view(raw_).substr(0, pos);
}

bool Identifier::is_canonical() const {
  const auto prefix = type_prefix();
  if (!prefix || !kind_from_canonical(*prefix)) return false;
  return is_canonical_uuid(std::string_view(raw_).substr(prefix->size() + 2));
}

struct UuidSource::Impl {
  explicit Impl(std::uint64_t seed) : engine(seed), generator(engine) {}
  std::mt19937_64 engine;
  boost::uuids::basic_random_generator<std::mt19937_64> generator;
};

UuidSource::UuidSource(std::uint64_t seed) : impl_(std::make_unique<Impl>(seed)) {}

UuidSource UuidSource::from_entropy() {
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return UuidSource(seed);
}

UuidSource::UuidSource(UuidSource&&) noexcept = default;
UuidSource& UuidSource::operator=(UuidSource&&) noexcept = default;
UuidSource::~UuidSource() = default;

std::string UuidSource::next() { return boost::uuids::to_string(impl_->generator()); }

Identifier new_id(ObjectKind kind, UuidSource& source) {
  return Identifier(std::string(canonical_type_name(kind)) + "--" + source.next());
}

std::string name_based_uuid(std::string_view name) {
  // Fixed namespace so that derived ids are stable across releases.
  static const boost::uuids::uuid kNamespace =
      boost::uuids::string_generator()("6b1e0c1a-5d0e-4c3b-9a52-2f4bf1c7a0d4");
  boost::uuids::name_generator_sha1 gen(kNamespace);
  return boost::uuids::to_string(gen(name.data(), name.size()));
}

Identifier name_based_id(ObjectKind kind, std::string_view name) {
  return Identifier(std::string(canonical_type_name(kind)) + "--" + name_based_uuid(name));
}

}  // namespace cti4ai::aiti
