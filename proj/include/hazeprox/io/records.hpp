#pragma once

// Line-delimited records of tab-separated key=value pairs, used for the
// synthesis manifest and the per-image text reports.

#include "hazeprox/core/error.hpp"

#include <charconv>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hazeprox::io {

/// Shortest decimal form that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

class Record {
public:
    Record& add(std::string key, std::string value) {
        fields_.emplace_back(std::move(key), std::move(value));
        return *this;
    }
    Record& add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }
    Record& add(std::string key, double value) { return add(std::move(key), format_double(value)); }
    Record& add(std::string key, bool value) { return add(std::move(key), std::string(value ? "1" : "0")); }
    template <std::integral I>
        requires(!std::same_as<I, bool>)
    Record& add(std::string key, I value) {
        return add(std::move(key), std::to_string(value));
    }

    const std::vector<std::pair<std::string, std::string>>& fields() const noexcept { return fields_; }

    const std::string* find(std::string_view key) const {
        for (const auto& [k, v] : fields_)
            if (k == key)
                return &v;
        return nullptr;
    }

    /// key=value pairs joined by tabs, no trailing newline.
    std::string to_line() const {
        std::string line;
        for (std::size_t i = 0; i < fields_.size(); ++i) {
            if (i > 0)
                line += '\t';
            line += fields_[i].first;
            line += '=';
            line += fields_[i].second;
        }
        return line;
    }

    /// One key=value pair per line.
    std::string to_report() const {
        std::string text;
        for (const auto& [k, v] : fields_) {
            text += k;
            text += '=';
            text += v;
            text += '\n';
        }
        return text;
    }

    static Record parse_line(std::string_view line) {
        Record r;
        std::size_t start = 0;
        while (start <= line.size()) {
            const std::size_t tab = line.find('\t', start);
            const std::string_view field =
                line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start);
            if (!field.empty()) {
                const std::size_t eq = field.find('=');
                if (eq == std::string_view::npos)
                    throw IoError("malformed record field '" + std::string(field) + "'");
                r.add(std::string(field.substr(0, eq)), std::string(field.substr(eq + 1)));
            }
            if (tab == std::string_view::npos)
                break;
            start = tab + 1;
        }
        return r;
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

} // namespace hazeprox::io
