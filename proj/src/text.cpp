#include "annorate/text.hpp"

#include <cctype>
#include <cstdio>

namespace annorate
{
    namespace
    {
        bool is_space(char c)
        {
            return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
        }

        char lower(char c)
        {
            return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }

        bool is_digit(char c)
        {
            return c >= '0' && c <= '9';
        }
    }

    std::string_view trim(std::string_view text)
    {
        while (!text.empty() && is_space(text.front()))
        {
            text.remove_prefix(1);
        }
        while (!text.empty() && is_space(text.back()))
        {
            text.remove_suffix(1);
        }
        return text;
    }

    std::string to_lower(std::string_view text)
    {
        std::string out(text);
        for (auto& c : out)
        {
            c = lower(c);
        }
        return out;
    }

    bool iequals(std::string_view a, std::string_view b)
    {
        if (a.size() != b.size())
        {
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            if (lower(a[i]) != lower(b[i]))
            {
                return false;
            }
        }
        return true;
    }

    bool starts_with_icase(std::string_view text, std::string_view prefix)
    {
        return text.size() >= prefix.size() && iequals(text.substr(0, prefix.size()), prefix);
    }

    std::string normalize_label(std::string_view label)
    {
        std::string out;
        bool pending_space = false;
        for (char c : trim(label))
        {
            if (is_space(c))
            {
                pending_space = true;
                continue;
            }
            if (pending_space)
            {
                out.push_back(' ');
                pending_space = false;
            }
            out.push_back(lower(c));
        }
        return out;
    }

    bool natural_less(std::string_view a, std::string_view b)
    {
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.size() && j < b.size())
        {
            if (is_digit(a[i]) && is_digit(b[j]))
            {
                std::size_t ie = i;
                std::size_t je = j;
                while (ie < a.size() && is_digit(a[ie]))
                {
                    ++ie;
                }
                while (je < b.size() && is_digit(b[je]))
                {
                    ++je;
                }
                // Compare digit runs numerically, ignoring leading zeros.
                std::string_view da = a.substr(i, ie - i);
                std::string_view db = b.substr(j, je - j);
                while (da.size() > 1 && da.front() == '0')
                {
                    da.remove_prefix(1);
                }
                while (db.size() > 1 && db.front() == '0')
                {
                    db.remove_prefix(1);
                }
                if (da.size() != db.size())
                {
                    return da.size() < db.size();
                }
                if (da != db)
                {
                    return da < db;
                }
                i = ie;
                j = je;
                continue;
            }
            if (a[i] != b[j])
            {
                return a[i] < b[j];
            }
            ++i;
            ++j;
        }
        if ((a.size() - i) != (b.size() - j))
        {
            return (a.size() - i) < (b.size() - j);
        }
        return a < b;
    }

    std::string format_fixed(double value, int decimals)
    {
        // "%.*f" never emits a locale decimal comma under the default "C" locale,
        // which this library never changes.
        char buffer[64];
        if (value == 0.0)
        {
            value = 0.0;  // drop negative zero
        }
        std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
        return buffer;
    }
}
