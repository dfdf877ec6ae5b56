#include "moiremix/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include <jpeglib.h>
#include <png.h>

namespace moiremix {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> to_bytes(const ImageBuffer& img) {
    std::vector<std::uint8_t> out(img.data().size());
    std::transform(img.data().begin(), img.data().end(), out.begin(), quantize_byte);
    return out;
}

ImageBuffer from_bytes(int width, int height, int channels, const std::uint8_t* bytes) {
    std::vector<double> data(static_cast<std::size_t>(width) * height * channels);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = bytes[i] / 255.0;
    return ImageBuffer(width, height, channels, std::move(data));
}

void check_encodable(const ImageBuffer& img) {
    if (img.empty()) throw ConfigError("cannot encode an empty image");
}

// ---------------------------------------------------------------------------
// PNG via the libpng simplified API.

ImageBuffer decode_png(std::span<const std::uint8_t> bytes, const std::string& name) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw IoError(name + ": corrupt PNG stream (" + image.message + ")");
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw IoError(name + ": unsupported PNG: 16-bit samples (only 8-bit is supported)");
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int channels = color ? 3 : 1;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    png_color background{0, 0, 0};
    if (!png_image_finish_read(&image, &background, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw IoError(name + ": corrupt PNG stream (" + msg + ")");
    }
    return from_bytes(static_cast<int>(image.width), static_cast<int>(image.height), channels,
                      buffer.data());
}

// ---------------------------------------------------------------------------
// JPEG via libjpeg with a longjmp error manager.

struct JpegErrorManager {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

void jpeg_silent(j_common_ptr, int) {}

// No objects with destructors may live in this frame between setjmp and the
// last libjpeg call; the caller owns the output vector.
bool decode_jpeg_raw(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& out, int& width,
                     int& height, int& channels, char* message) {
    jpeg_decompress_struct cinfo;
    JpegErrorManager jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    jerr.pub.emit_message = jpeg_silent;
    if (setjmp(jerr.jump)) {
        std::strncpy(message, jerr.message, JMSG_LENGTH_MAX);
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);
    width = static_cast<int>(cinfo.output_width);
    height = static_cast<int>(cinfo.output_height);
    channels = cinfo.output_components;
    out.resize(static_cast<std::size_t>(width) * height * channels);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = out.data() + cinfo.output_scanline * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

bool encode_jpeg_raw(const std::uint8_t* pixels, int width, int height, int channels, int quality,
                     unsigned char** mem, unsigned long* mem_size, char* message) {
    jpeg_compress_struct cinfo;
    JpegErrorManager jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    jerr.pub.emit_message = jpeg_silent;
    if (setjmp(jerr.jump)) {
        std::strncpy(message, jerr.message, JMSG_LENGTH_MAX);
        jpeg_destroy_compress(&cinfo);
        return false;
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, mem, mem_size);
    cinfo.image_width = static_cast<JDIMENSION>(width);
    cinfo.image_height = static_cast<JDIMENSION>(height);
    cinfo.input_components = channels;
    cinfo.in_color_space = channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<std::uint8_t*>(pixels) + cinfo.next_scanline * stride;
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    return true;
}

ImageBuffer decode_jpeg(std::span<const std::uint8_t> bytes, const std::string& name) {
    std::vector<std::uint8_t> pixels;
    int width = 0, height = 0, channels = 0;
    char message[JMSG_LENGTH_MAX] = {};
    if (!decode_jpeg_raw(bytes, pixels, width, height, channels, message))
        throw IoError(name + ": corrupt JPEG stream (" + message + ")");
    return from_bytes(width, height, channels, pixels.data());
}

void check_quality(int quality) {
    if (quality < 1 || quality > 100)
        throw ConfigError("jpeg quality must be in 1..100, got " + std::to_string(quality));
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace

std::optional<ImageFormat> format_from_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png") return ImageFormat::png;
    if (ext == ".jpg" || ext == ".jpeg") return ImageFormat::jpeg;
    return std::nullopt;
}

ImageBuffer decode_image(std::span<const std::uint8_t> bytes, const std::string& name) {
    static constexpr std::uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (bytes.size() >= 8 && std::equal(bytes.begin(), bytes.begin() + 8, kPngSig))
        return decode_png(bytes, name);
    if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff)
        return decode_jpeg(bytes, name);
    throw IoError(name + ": unsupported format (not a PNG or JPEG stream)");
}

ImageBuffer load_image(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::error_code ec;
        if (!fs::exists(path, ec)) throw IoError(path.string() + ": file not found");
        throw IoError(path.string() + ": cannot open for reading");
    }
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return decode_image(bytes, path.string());
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
    check_encodable(img);
    const auto pixels = to_bytes(img);
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr))
        throw IoError(std::string("PNG encode failed: ") + image.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr))
        throw IoError(std::string("PNG encode failed: ") + image.message);
    out.resize(size);
    return out;
}

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality) {
    check_quality(quality);
    check_encodable(img);
    const auto pixels = to_bytes(img);
    unsigned char* mem = nullptr;
    unsigned long mem_size = 0;
    char message[JMSG_LENGTH_MAX] = {};
    const bool ok = encode_jpeg_raw(pixels.data(), img.width(), img.height(), img.channels(), quality,
                                    &mem, &mem_size, message);
    std::vector<std::uint8_t> out;
    if (ok) out.assign(mem, mem + mem_size);
    std::free(mem);
    if (!ok) throw IoError(std::string("JPEG encode failed: ") + message);
    return out;
}

ImageBuffer jpeg_roundtrip(const ImageBuffer& img, int quality) {
    return decode_jpeg(encode_jpeg(img, quality), "<jpeg roundtrip>");
}

void save_image(const ImageBuffer& img, const fs::path& path, ImageFormat format, int jpeg_quality) {
    check_quality(jpeg_quality);
    write_file(path, format == ImageFormat::png ? encode_png(img) : encode_jpeg(img, jpeg_quality));
}

std::vector<fs::path> list_image_files(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError(root.string() + ": not a directory");
    std::vector<fs::path> out;
    for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw IoError(root.string() + ": " + ec.message());
        if (it->is_regular_file() && format_from_extension(it->path()))
            out.push_back(fs::relative(it->path(), root));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace moiremix
