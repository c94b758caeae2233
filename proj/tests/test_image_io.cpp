#include <gtest/gtest.h>

#include "support.hpp"

namespace semnav {
namespace {

TEST(Netpbm, Pgm8RoundTrip) {
    Image<std::uint8_t> img(5, 3);
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<std::uint8_t>(i * 17);
    const std::string bytes = io::encode_pgm(img);
    EXPECT_EQ(bytes.substr(0, 11), "P5\n5 3\n255\n");
    const auto back = io::decode_pgm(bytes);
    ASSERT_EQ(back.width, 5);
    ASSERT_EQ(back.height, 3);
    for (std::size_t i = 0; i < img.data.size(); ++i) EXPECT_EQ(back.data[i], img.data[i]);
}

TEST(Netpbm, Pgm16BigEndian) {
    Image<std::uint16_t> img(2, 1);
    img.data = {0x0102, 0xfffe};
    const std::string bytes = io::encode_pgm16(img);
    const std::string px = bytes.substr(bytes.size() - 4);
    EXPECT_EQ(px, std::string("\x01\x02\xff\xfe", 4));
    EXPECT_EQ(io::decode_pgm(bytes), img);
}

TEST(Netpbm, PpmRoundTripAndComments) {
    Image<Rgb> img(2, 2, Rgb{1, 2, 3});
    img.at(1, 0) = {250, 0, 9};
    EXPECT_EQ(io::decode_ppm(io::encode_ppm(img)), img);
    const std::string commented = "P6\n# made by hand\n1 1\n255\n" + std::string("\x07\x08\x09", 3);
    EXPECT_EQ(io::decode_ppm(commented).data[0], (Rgb{7, 8, 9}));
}

TEST(Netpbm, Errors) {
    EXPECT_THROW(io::decode_pgm("P6\n1 1\n255\nabc"), Error);
    EXPECT_THROW(io::decode_pgm("P5\n4 4\n255\nab"), Error);
    EXPECT_THROW(io::decode_pgm("P5\nx 4\n255\n"), Error);
    EXPECT_THROW(io::decode_ppm("P6\n1 1\n65535\nabcdef"), Error);
    EXPECT_THROW(io::read_file("/nonexistent/semnav/file"), Error);
}

TEST(DepthIo, MillimeterRoundTrip) {
    const auto k = CameraIntrinsics::from_fov(8, 6, 1.0, 0.8, 0.4, 8.0);
    DepthFrame d(k);
    d.at(0, 0) = 1.234;
    d.at(5, 7) = 8.0;
    d.at(2, 2) = 0.2;  // out of range on the way back in
    const auto mm = io::depth_to_millimeters(d);
    EXPECT_EQ(mm.at(0, 0), 1234);
    const auto back = io::depth_from_millimeters(mm, k);
    EXPECT_DOUBLE_EQ(back.at(0, 0), 1.234);
    EXPECT_DOUBLE_EQ(back.at(5, 7), 8.0);
    EXPECT_EQ(back.at(2, 2), 0.0);
    EXPECT_THROW(io::depth_from_millimeters(Image<std::uint16_t>(3, 3), k), Error);
}

TEST(DepthIo, Float32RoundTrip) {
    const auto k = CameraIntrinsics::from_fov(4, 2, 1.0, 0.8, 0.4, 8.0);
    DepthFrame d(k);
    d.at(1, 3) = 2.5;
    const auto dir = test::scratch_dir("f32");
    io::write_file(dir / "d.bin", io::encode_depth_f32(d));
    const auto back = io::read_depth_f32(dir / "d.bin", k);
    EXPECT_EQ(back.data, d.data);
    io::write_file(dir / "short.bin", "abc");
    EXPECT_THROW(io::read_depth_f32(dir / "short.bin", k), Error);
}

TEST(MaskIo, PgmRoundTrip) {
    SemanticMask m(3, 2);
    m.at(1, 2) = 1;
    const auto img = io::mask_to_pgm_image(m);
    EXPECT_EQ(img.at(1, 2), 255);
    EXPECT_EQ(io::mask_from_pgm(io::decode_pgm(io::encode_pgm(img))).data, m.data);
}

}  // namespace
}  // namespace semnav
