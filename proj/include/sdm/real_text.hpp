#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Decimal text rendering shared by every file format in the project.
// Reals are written with up to 17 significant digits, which is enough for
// parse(format(x)) == x bit-exactly for any finite double.

namespace sdm {

std::string format_real17(double v);

// Strict parse of a full token; rejects trailing characters, empty input,
// and anything std::from_chars does not consume entirely.
std::optional<double> parse_real(std::string_view token);

std::optional<long long> parse_int(std::string_view token);

std::vector<std::string_view> split_csv(std::string_view line);

}  // namespace sdm
