#pragma once

#include <string>
#include <string_view>

namespace annorate
{
    std::string_view trim(std::string_view text);
    std::string to_lower(std::string_view text);
    bool iequals(std::string_view a, std::string_view b);
    bool starts_with_icase(std::string_view text, std::string_view prefix);

    /// Lower-cases and collapses whitespace runs to one space, trimming ends.
    std::string normalize_label(std::string_view label);

    /// Orders embedded digit runs numerically ("MTBLS2" < "MTBLS10").
    bool natural_less(std::string_view a, std::string_view b);

    /// Fixed-point decimal with a '.' separator, independent of locale.
    std::string format_fixed(double value, int decimals = 7);
}
