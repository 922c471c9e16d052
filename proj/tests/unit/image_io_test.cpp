#include "platepipe/image_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support/fixtures.hpp"

using namespace platepipe;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "platepipe_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("png round-trip is lossless for gray and color") {
  fs::path dir = scratch_dir();

  Image gray = fixtures::edge_rich(31, 17, 5);
  std::string gray_path = (dir / "gray.png").string();
  save_image(gray, gray_path);
  Image gray_back = load_image(gray_path);
  CHECK(gray_back.channels == 1);
  CHECK(gray_back.data == gray.data);

  Image color = fixtures::plate_scene(2);
  std::string color_path = (dir / "color.png").string();
  save_image(color, color_path);
  Image color_back = load_image(color_path);
  CHECK(color_back.channels == 3);
  CHECK(color_back.data == color.data);
}

TEST_CASE("jpeg round-trip keeps shape and approximate content") {
  fs::path dir = scratch_dir();
  Image img = fixtures::constant(24, 18, 3, 90);
  std::string path = (dir / "c.jpg").string();
  save_image(img, path);
  Image back = load_image(path);
  CHECK(back.width == 24);
  CHECK(back.height == 18);
  CHECK(back.channels == 3);
  // Lossy, but a constant image survives nearly exactly.
  for (auto s : back.data) CHECK(std::abs(static_cast<int>(s) - 90) <= 2);
}

TEST_CASE("load errors are ParseError") {
  CHECK_THROWS_AS(load_image("/nonexistent/nope.png"), ParseError);
  CHECK_THROWS_AS(load_image("/nonexistent/nope.bmp"), ParseError);

  fs::path dir = scratch_dir();
  std::string bad = (dir / "bad.png").string();
  {
    std::ofstream out(bad);
    out << "this is not a png";
  }
  CHECK_THROWS_AS(load_image(bad), ParseError);
}
