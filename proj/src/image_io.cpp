#include "teachset/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "teachset/error.hpp"

namespace teachset::io {

namespace {

struct MemoryReader {
    const unsigned char* data;
    std::size_t size;
    std::size_t offset;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
    auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (reader->offset + count > reader->size) {
        png_error(png, "unexpected end of PNG data");
    }
    std::memcpy(out, reader->data + reader->offset, count);
    reader->offset += count;
}

void png_write_to_string(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), count);
}

void png_flush_noop(png_structp) {}

imaging::ImageRGB decode_png(const std::string& bytes, const std::string& name) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(name + ": failed to initialize PNG reader");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(name + ": failed to initialize PNG reader");
    }
    imaging::ImageRGB img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(name + ": corrupt PNG data");
    }
    MemoryReader reader{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), 0};
    png_set_read_fn(png, &reader, png_read_from_memory);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.data.resize(static_cast<std::size_t>(w) * h * 3);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        rows[y] = img.data.data() + static_cast<std::size_t>(y) * w * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

imaging::ImageRGB decode_ppm(const std::string& bytes, const std::string& name) {
    std::istringstream in(bytes);
    std::string magic;
    in >> magic;
    if (magic != "P6") throw Error(name + ": not a binary PPM (P6) file");
    auto next_token = [&]() -> long {
        // Skip whitespace and '#' comments between header fields.
        while (true) {
            const int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        long v = -1;
        in >> v;
        return v;
    };
    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (!in || w < 1 || h < 1 || maxval != 255) {
        throw Error(name + ": unsupported or corrupt PPM header");
    }
    in.get();  // single whitespace after maxval
    imaging::ImageRGB img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.data.resize(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size())) {
        throw Error(name + ": truncated PPM pixel data");
    }
    return img;
}

}  // namespace

imaging::ImageRGB decode_image(const std::string& bytes, const std::string& name) {
    static const unsigned char png_magic[4] = {0x89, 'P', 'N', 'G'};
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), png_magic, 4) == 0) {
        return decode_png(bytes, name);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
        return decode_ppm(bytes, name);
    }
    throw Error(name + ": unrecognized image format (expected PNG or PPM P6)");
}

imaging::ImageRGB load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_image(buf.str(), path.string());
}

std::string encode_png(const imaging::ImageRGB& img) {
    if (!img.valid()) throw Error("encode_png: invalid image buffer");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("encode_png: failed to initialize PNG writer");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("encode_png: failed to initialize PNG writer");
    }
    std::string out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("encode_png: PNG encoding failed");
    }
    png_set_write_fn(png, &out, png_write_to_string, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        rows[y] = const_cast<png_bytep>(img.px(0, y));
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

void save_png(const std::filesystem::path& path, const imaging::ImageRGB& img) {
    const std::string bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path.string() + ": cannot open file for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(path.string() + ": write failed");
}

void save_ppm(const std::filesystem::path& path, const imaging::ImageRGB& img) {
    if (!img.valid()) throw Error("save_ppm: invalid image buffer");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path.string() + ": cannot open file for writing");
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace teachset::io
