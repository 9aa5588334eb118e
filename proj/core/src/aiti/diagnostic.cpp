#include "cti4ai/aiti/diagnostic.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

namespace cti4ai::aiti {

std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

std::string format(const Diagnostic& d) {
  return std::string(to_string(d.severity)) + " " + d.code + " " + (d.path.empty() ? "/" : d.path) +
         ": " + d.message;
}

std::ostream& operator<<(std::ostream& out, const Diagnostic& d) { return out << format(d); }

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return count(diagnostics, Severity::error) > 0;
}

std::size_t count(const std::vector<Diagnostic>& diagnostics, Severity severity) {
  return static_cast<std::size_t>(
      std::count_if(diagnostics.begin(), diagnostics.end(),
                    [severity](const Diagnostic& d) { return d.severity == severity; }));
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.path, a.code, a.severity, a.message) <
                            std::tie(b.path, b.code, b.severity, b.message);
                   });
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  if (diagnostics.empty()) return "parse error";
  std::string text = format(diagnostics.front());
  if (diagnostics.size() > 1) {
    text += " (and " + std::to_string(diagnostics.size() - 1) + " more)";
  }
  return text;
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string pointer_segment(std::string_view key) {
  std::string out;
  out.reserve(key.size());
  for (const char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace cti4ai::aiti
