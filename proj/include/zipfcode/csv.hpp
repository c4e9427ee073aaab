#pragma once

// Minimal RFC 4180 field handling for single-line records.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "zipfcode/error.hpp"

namespace zipfcode::csv {

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::vector<std::string> split(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    std::size_t i = 0;
    bool field_start = true;
    while (true) {
        if (field_start && i < line.size() && line[i] == '"') {
            ++i;
            while (true) {
                if (i >= line.size()) throw parse_error("unterminated quoted field", line_no);
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        cur += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                cur += line[i++];
            }
            if (i < line.size() && line[i] != ',')
                throw parse_error("unexpected character after closing quote", line_no);
        } else {
            while (i < line.size() && line[i] != ',') {
                if (line[i] == '"') throw parse_error("quote inside unquoted field", line_no);
                cur += line[i++];
            }
        }
        fields.push_back(std::move(cur));
        cur.clear();
        if (i >= line.size()) break;
        ++i;  // comma
        field_start = true;
    }
    return fields;
}

}  // namespace zipfcode::csv
