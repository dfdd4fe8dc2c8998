#include "p1nc/io.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace p1nc::io {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto line = [&os](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << csv_escape(fields[i]);
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_markdown(std::ostream& os, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& fields) {
    os << '|';
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string& v = c < fields.size() ? fields[c] : std::string();
      os << ' ' << v << std::string(width[c] - v.size(), ' ') << " |";
    }
    os << '\n';
  };
  line(header);
  os << '|';
  for (std::size_t c = 0; c < width.size(); ++c)
    os << ' ' << std::string(width[c], '-') << " |";
  os << '\n';
  for (const auto& r : rows) line(r);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string short_hash(std::string_view s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%08x",
                static_cast<unsigned>(fnv1a64(s) & 0xffffffffu));
  return buf;
}

std::string sci(double v, int prec) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*E", prec, v);
  return buf;
}

std::string fixed(double v, int prec) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace p1nc::io
