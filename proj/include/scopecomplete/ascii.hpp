#pragma once

// Locale-independent ASCII helpers. Corpus names are matched byte-exactly;
// the only case folding anywhere in the library is ASCII A-Z -> a-z.

#include <string>
#include <string_view>

namespace scopecomplete::ascii {

constexpr bool is_upper(char c) {
  return c >= 'A' && c <= 'Z';
}

constexpr char fold(char c) {
  return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string fold_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = fold(c);
  return out;
}

inline bool starts_with(std::string_view name, std::string_view prefix, bool case_sensitive) {
  if (prefix.size() > name.size()) return false;
  if (case_sensitive) return name.substr(0, prefix.size()) == prefix;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (fold(name[i]) != fold(prefix[i])) return false;
  }
  return true;
}

// Three-way compare of the folded strings alone; strings that fold to the
// same bytes compare equal. Used for prefix-range boundaries.
inline int fold_compare_weak(std::string_view a, std::string_view b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char fa = static_cast<unsigned char>(fold(a[i]));
    const unsigned char fb = static_cast<unsigned char>(fold(b[i]));
    if (fa != fb) return fa < fb ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// As above but with a raw-byte tiebreak, so case-insensitive orderings stay
// total and deterministic.
inline int fold_compare(std::string_view a, std::string_view b) {
  if (const int c = fold_compare_weak(a, b)) return c;
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

}  // namespace scopecomplete::ascii
