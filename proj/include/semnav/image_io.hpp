#pragma once
// image_io.hpp - binary netpbm (P5/P6) and raw float32 depth I/O.

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "semnav/error.hpp"
#include "semnav/perception.hpp"

namespace semnav::io {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::IoError, "short write to " + path.string());
}

namespace detail {

struct NetpbmHeader {
    std::string magic;
    int width = 0, height = 0, maxval = 0;
    std::size_t data_offset = 0;
};

inline NetpbmHeader parse_header(const std::string& bytes, const std::string& what) {
    NetpbmHeader h;
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_token = [&] {
        skip_ws();
        std::string tok;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) tok += bytes[pos++];
        return tok;
    };
    auto read_int = [&] {
        const std::string tok = read_token();
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw Error(ErrorKind::IoError, what + ": bad netpbm header field '" + tok + "'");
        }
    };
    h.magic = read_token();
    h.width = read_int();
    h.height = read_int();
    h.maxval = read_int();
    if (pos >= bytes.size()) throw Error(ErrorKind::IoError, what + ": truncated header");
    h.data_offset = pos + 1;  // exactly one whitespace byte after maxval
    return h;
}

}  // namespace detail

/// 8-bit P5.
inline std::string encode_pgm(const Image<std::uint8_t>& img) {
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
    return out;
}

/// 16-bit P5, big-endian samples as netpbm requires.
inline std::string encode_pgm16(const Image<std::uint16_t>& img) {
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n65535\n";
    out.reserve(out.size() + img.data.size() * 2);
    for (std::uint16_t v : img.data) {
        out.push_back(static_cast<char>(v >> 8));
        out.push_back(static_cast<char>(v & 0xff));
    }
    return out;
}

inline std::string encode_ppm(const Image<Rgb>& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.reserve(out.size() + img.data.size() * 3);
    for (Rgb c : img.data) {
        out.push_back(static_cast<char>(c.r));
        out.push_back(static_cast<char>(c.g));
        out.push_back(static_cast<char>(c.b));
    }
    return out;
}

/// Decodes a P5 image of either depth; 8-bit samples are widened.
inline Image<std::uint16_t> decode_pgm(const std::string& bytes, const std::string& what = "pgm") {
    const auto h = detail::parse_header(bytes, what);
    if (h.magic != "P5") throw Error(ErrorKind::IoError, what + ": expected P5, got '" + h.magic + "'");
    if (h.maxval > 65535) throw Error(ErrorKind::IoError, what + ": maxval out of range");
    const std::size_t bps = h.maxval > 255 ? 2 : 1;
    const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() < h.data_offset + n * bps) throw Error(ErrorKind::IoError, what + ": truncated pixel data");
    Image<std::uint16_t> img(h.width, h.height);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + h.data_offset);
    for (std::size_t k = 0; k < n; ++k)
        img.data[k] = bps == 2 ? static_cast<std::uint16_t>((p[2 * k] << 8) | p[2 * k + 1]) : p[k];
    return img;
}

inline Image<Rgb> decode_ppm(const std::string& bytes, const std::string& what = "ppm") {
    const auto h = detail::parse_header(bytes, what);
    if (h.magic != "P6") throw Error(ErrorKind::IoError, what + ": expected P6, got '" + h.magic + "'");
    if (h.maxval != 255) throw Error(ErrorKind::IoError, what + ": only 8-bit P6 supported");
    const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
    if (bytes.size() < h.data_offset + 3 * n) throw Error(ErrorKind::IoError, what + ": truncated pixel data");
    Image<Rgb> img(h.width, h.height);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + h.data_offset);
    for (std::size_t k = 0; k < n; ++k) img.data[k] = {p[3 * k], p[3 * k + 1], p[3 * k + 2]};
    return img;
}

inline Image<std::uint16_t> read_pgm(const std::filesystem::path& path) {
    return decode_pgm(read_file(path), path.string());
}
inline Image<Rgb> read_ppm(const std::filesystem::path& path) { return decode_ppm(read_file(path), path.string()); }

// --- depth / mask conversions -------------------------------------------

/// Millimeter samples to a depth frame; zero and out-of-range samples become invalid (0).
inline DepthFrame depth_from_millimeters(const Image<std::uint16_t>& mm, const CameraIntrinsics& k) {
    if (!mm.same_shape(k.width, k.height))
        throw Error(ErrorKind::InvalidInput, "depth image is " + std::to_string(mm.width) + "x" +
                                                 std::to_string(mm.height) + ", intrinsics expect " +
                                                 std::to_string(k.width) + "x" + std::to_string(k.height));
    DepthFrame d(k);
    for (std::size_t i = 0; i < mm.data.size(); ++i) {
        const double z = mm.data[i] / 1000.0;
        d.data.data[i] = k.valid_depth(z) ? z : 0.0;
    }
    return d;
}

inline Image<std::uint16_t> depth_to_millimeters(const DepthFrame& d) {
    Image<std::uint16_t> mm(d.width(), d.height());
    for (std::size_t i = 0; i < mm.data.size(); ++i) {
        const double v = std::round(d.data.data[i] * 1000.0);
        mm.data[i] = static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
    }
    return mm;
}

/// Raw little-endian float32, row-major, no header.
inline DepthFrame read_depth_f32(const std::filesystem::path& path, const CameraIntrinsics& k) {
    const std::string bytes = read_file(path);
    const std::size_t n = static_cast<std::size_t>(k.width) * k.height;
    if (bytes.size() != n * 4)
        throw Error(ErrorKind::IoError, path.string() + ": expected " + std::to_string(n * 4) + " bytes, got " +
                                            std::to_string(bytes.size()));
    DepthFrame d(k);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t u = 0;
        for (int b = 3; b >= 0; --b) u = (u << 8) | static_cast<unsigned char>(bytes[4 * i + b]);
        const double z = std::bit_cast<float>(u);
        d.data.data[i] = k.valid_depth(z) ? z : 0.0;
    }
    return d;
}

inline std::string encode_depth_f32(const DepthFrame& d) {
    std::string out;
    out.reserve(d.data.data.size() * 4);
    for (double z : d.data.data) {
        const auto u = std::bit_cast<std::uint32_t>(static_cast<float>(z));
        for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
    }
    return out;
}

inline SemanticMask mask_from_pgm(const Image<std::uint16_t>& img, int class_id = 1) {
    SemanticMask m(img.width, img.height, class_id);
    for (std::size_t i = 0; i < img.data.size(); ++i) m.data.data[i] = img.data[i] != 0;
    return m;
}

inline Image<std::uint8_t> mask_to_pgm_image(const SemanticMask& m) {
    Image<std::uint8_t> img(m.width(), m.height());
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = m.data.data[i] ? 255 : 0;
    return img;
}

}  // namespace semnav::io
