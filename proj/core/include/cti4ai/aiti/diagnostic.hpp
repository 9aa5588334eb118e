#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cti4ai::aiti {

enum class Severity { error, warning };

std::string_view to_string(Severity s);

/// One finding from parsing or validation, located by a JSON pointer.
struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string path;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// `error dangling-ref /objects/1/target_ref: ...`
std::string format(const Diagnostic& d);
std::ostream& operator<<(std::ostream& out, const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diagnostics);
std::size_t count(const std::vector<Diagnostic>& diagnostics, Severity severity);

/// Sorts by (path, code), then severity and message.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

/// Thrown when a document cannot be turned into an object or bundle.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Escapes `~` and `/` for use as a JSON pointer segment.
std::string pointer_segment(std::string_view key);

}  // namespace cti4ai::aiti
