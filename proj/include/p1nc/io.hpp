#ifndef P1NC_IO_HPP
#define P1NC_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace p1nc::io {

/// RFC-4180-style quoting: fields with commas, quotes, or newlines are
/// quoted and embedded quotes doubled.
std::string csv_escape(const std::string& field);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Column-aligned pipe table.
void write_markdown(std::ostream& os, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

std::uint64_t fnv1a64(std::string_view s);
std::string short_hash(std::string_view s);  // 8 hex digits of fnv1a64

std::string sci(double v, int prec = 3);
std::string fixed(double v, int prec = 3);

}  // namespace p1nc::io

#endif
