#ifndef KDDFS_CSV_HPP
#define KDDFS_CSV_HPP

#include <string>
#include <vector>

namespace kddfs::csv {

// Quotes a field when it is empty or contains a comma, quote or newline.
std::string quote(const std::string& field);

// Splits one CSV line honoring quoted fields ("" unescapes to ").
std::vector<std::string> split_line(const std::string& line);

// Shortest text that parses back to the identical double (%.17g).
std::string format_double(double v);

// Strict: the whole token must be a number.
double parse_double(const std::string& token);
bool try_parse_double(const std::string& token, double& out);

}  // namespace kddfs::csv

#endif
