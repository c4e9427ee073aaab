#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <unicode/utf8.h>

#include "zipfcode/error.hpp"

namespace zipfcode::utf8 {

// Returns the byte offset of the first invalid sequence, or npos when `text` is valid UTF-8.
inline std::size_t find_invalid(std::string_view text) noexcept {
    const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
    const auto length = static_cast<std::int32_t>(text.size());
    std::int32_t i = 0;
    while (i < length) {
        const std::int32_t start = i;
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (c < 0) return static_cast<std::size_t>(start);
    }
    return std::string_view::npos;
}

// Throws encoding_error with the absolute offset (`base_offset` + local offset).
inline void validate(std::string_view text, std::size_t base_offset = 0) {
    if (const auto bad = find_invalid(text); bad != std::string_view::npos)
        throw encoding_error(base_offset + bad);
}

inline std::u32string decode(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
    const auto length = static_cast<std::int32_t>(text.size());
    std::int32_t i = 0;
    while (i < length) {
        const std::int32_t start = i;
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (c < 0) throw encoding_error(static_cast<std::size_t>(start));
        out.push_back(static_cast<char32_t>(c));
    }
    return out;
}

inline void append(std::string& out, char32_t c) {
    std::uint8_t buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

inline std::string encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) append(out, c);
    return out;
}

inline std::size_t count_code_points(std::string_view text) {
    std::size_t n = 0;
    for (unsigned char b : text)
        if ((b & 0xC0u) != 0x80u) ++n;
    return n;
}

}  // namespace zipfcode::utf8
