#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "htf/errors.hpp"

// Fixed little-endian primitives shared by the binary file formats.
namespace htf::detail {

inline void write_bytes(std::ostream& out, const unsigned char* data, std::size_t n) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
}

inline void write_u8(std::ostream& out, std::uint8_t v) {
    write_bytes(out, &v, 1);
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    write_bytes(out, b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    write_bytes(out, b, 8);
}

inline void write_f64(std::ostream& out, double v) {
    write_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void read_bytes(std::istream& in, unsigned char* data, std::size_t n) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n));
    if (!in) throw IoError("unexpected end of stream");
}

inline std::uint8_t read_u8(std::istream& in) {
    std::uint8_t v = 0;
    read_bytes(in, &v, 1);
    return v;
}

inline std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    read_bytes(in, b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& in) {
    unsigned char b[8];
    read_bytes(in, b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline double read_f64(std::istream& in) {
    return std::bit_cast<double>(read_u64(in));
}

} // namespace htf::detail
