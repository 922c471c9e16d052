#include "platepipe/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "doctest.h"
#include "platepipe/blur_gate.hpp"
#include "platepipe/image_io.hpp"
#include "support/fixtures.hpp"

using namespace platepipe;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "platepipe_dataset_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("augment yields exactly five tagged variants with preserved dims") {
  Image img = fixtures::plate_scene(0);
  auto variants = augment(img, 7);
  REQUIRE(variants.size() == 5);
  std::set<std::string> tags;
  for (const auto& v : variants) {
    tags.insert(to_string(v.tag));
    CHECK(v.image.width == img.width);
    CHECK(v.image.height == img.height);
    CHECK(v.image.channels == img.channels);
  }
  CHECK(tags == std::set<std::string>{"rain", "shine", "snow", "fog", "unlit"});
}

TEST_CASE("unlit variant of constant 200 is constant 140") {
  Image img = fixtures::constant(16, 16, 3, 200);
  auto variants = augment(img, 1);
  const Image& unlit = variants[4].image;
  REQUIRE(variants[4].tag == AugmentTag::unlit);
  for (auto s : unlit.data) CHECK(s == 140);
}

TEST_CASE("fog variant blends halfway toward gray 200") {
  Image img = fixtures::constant(8, 8, 1, 100);
  auto variants = augment(img, 1);
  REQUIRE(variants[3].tag == AugmentTag::fog);
  for (auto s : variants[3].image.data) CHECK(s == 150);  // 0.5*100 + 0.5*200
}

TEST_CASE("augment is deterministic for a fixed seed, distinct across seeds") {
  Image img = fixtures::edge_rich(48, 48, 33);
  auto a = augment(img, 42);
  auto b = augment(img, 42);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].image.data == b[i].image.data);
  }
  auto c = augment(img, 43);
  CHECK(a[0].image.data != c[0].image.data);  // rain mask moved
  CHECK(a[2].image.data != c[2].image.data);  // snow mask moved
}

TEST_CASE("synth_blur_corpus cardinality and provenance") {
  fs::path dir = scratch_dir("corpus");
  std::vector<std::string> sharps;
  for (int i = 0; i < 2; ++i) {
    std::string path = (dir / ("sharp" + std::to_string(i) + ".png")).string();
    save_image(fixtures::edge_rich(64, 64, 100 + i), path);
    sharps.push_back(path);
  }

  CorpusManifest manifest = synth_blur_corpus(sharps, {7, 9}, (dir / "out").string(), 5);
  CHECK(manifest.entries.size() == 4);
  CHECK(manifest.seed == 5);
  std::set<std::string> blurred_paths;
  for (const auto& e : manifest.entries) {
    CHECK((e.kernel_size == 7 || e.kernel_size == 9));
    CHECK(fs::exists(e.blurred_path));
    CHECK(fs::exists(e.sharp_path));
    blurred_paths.insert(e.blurred_path);
  }
  CHECK(blurred_paths.size() == 4);  // unique outputs
}

TEST_CASE("synth_blur_corpus accepts the full ladder and rejects outliers") {
  fs::path dir = scratch_dir("ladder");
  std::string sharp = (dir / "s.png").string();
  save_image(fixtures::edge_rich(32, 32, 8), sharp);

  CHECK_NOTHROW(synth_blur_corpus({sharp}, {7, 9, 11, 13, 15, 17, 19},
                                  (dir / "ok").string(), 0));
  CHECK_THROWS_AS(synth_blur_corpus({sharp}, {21}, (dir / "bad").string(), 0), RangeError);
  CHECK_THROWS_AS(synth_blur_corpus({sharp}, {5}, (dir / "bad2").string(), 0), RangeError);
  CHECK_THROWS_AS(synth_blur_corpus({sharp}, {8}, (dir / "bad3").string(), 0),
                  EvenKernelError);
}

TEST_CASE("larger kernels leave measurably blurrier files") {
  fs::path dir = scratch_dir("variance");
  std::string sharp = (dir / "s.png").string();
  save_image(fixtures::edge_rich(), sharp);
  CorpusManifest manifest = synth_blur_corpus({sharp}, {7, 19}, (dir / "out").string(), 0);
  REQUIRE(manifest.entries.size() == 2);
  double var7 = laplacian_variance(load_image(manifest.entries[0].blurred_path));
  double var19 = laplacian_variance(load_image(manifest.entries[1].blurred_path));
  CHECK(manifest.entries[0].kernel_size == 7);
  CHECK(manifest.entries[1].kernel_size == 19);
  CHECK(var19 < var7);
}

TEST_CASE("manifest json round-trips") {
  fs::path dir = scratch_dir("manifest");
  CorpusManifest manifest;
  manifest.seed = 11;
  manifest.entries = {{"a.png", "a_k07.png", 7}, {"b.png", "b_k19.png", 19}};
  std::string path = (dir / "manifest.json").string();
  write_manifest(manifest, path);
  CorpusManifest back = read_manifest(path);
  CHECK(back.seed == 11);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[1].blurred_path == "b_k19.png");
  CHECK(back.entries[1].kernel_size == 19);
}

TEST_CASE("annotation parsing: direct, empty, malformed, out of range") {
  fs::path dir = scratch_dir("annotations");

  std::string good = (dir / "good.txt").string();
  {
    std::ofstream out(good);
    out << "0 0.500000 0.500000 0.200000 0.100000\n";
  }
  auto records = read_annotations(good);
  REQUIRE(records.size() == 1);
  CHECK(records[0].class_id == 0);
  CHECK(records[0].cx == doctest::Approx(0.5));
  CHECK(records[0].h == doctest::Approx(0.1));

  std::string empty = (dir / "empty.txt").string();
  { std::ofstream out(empty); }
  CHECK(read_annotations(empty).empty());

  std::string bad = (dir / "bad.txt").string();
  {
    std::ofstream out(bad);
    out << "0 0.5 0.5 0.1\n";  // four fields
  }
  CHECK_THROWS_AS(read_annotations(bad), ParseError);

  std::string range = (dir / "range.txt").string();
  {
    std::ofstream out(range);
    out << "0 1.2 0.5 0.1 0.1\n";
  }
  try {
    read_annotations(range);
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find(":1") != std::string::npos);  // line number
  }
}

TEST_CASE("annotation round-trip is exact to 1e-6") {
  fs::path dir = scratch_dir("roundtrip");
  fixtures::Rng rng(314);
  std::vector<AnnotationRecord> records;
  for (int i = 0; i < 200; ++i) {
    AnnotationRecord r;
    r.class_id = static_cast<int>(rng.below(44));
    r.w = 0.01 + 0.98 * rng.unit();
    r.h = 0.01 + 0.98 * rng.unit();
    r.cx = r.w / 2 + (1.0 - r.w) * rng.unit();
    r.cy = r.h / 2 + (1.0 - r.h) * rng.unit();
    records.push_back(r);
  }
  std::string path = (dir / "ann.txt").string();
  write_annotations(records, path);
  auto back = read_annotations(path);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].class_id == records[i].class_id);
    CHECK(std::abs(back[i].cx - records[i].cx) <= 1e-6);
    CHECK(std::abs(back[i].cy - records[i].cy) <= 1e-6);
    CHECK(std::abs(back[i].w - records[i].w) <= 1e-6);
    CHECK(std::abs(back[i].h - records[i].h) <= 1e-6);
  }
}

TEST_CASE("denormalize arithmetic and inverse") {
  BBox box = denormalize({0, 0.5, 0.5, 0.2, 0.1}, 100, 100);
  CHECK(box.x_min == doctest::Approx(40.0));
  CHECK(box.y_min == doctest::Approx(45.0));
  CHECK(box.x_max == doctest::Approx(60.0));
  CHECK(box.y_max == doctest::Approx(55.0));

  BBox full = denormalize({0, 0.5, 0.5, 1.0, 1.0}, 640, 480);
  CHECK(full.x_min == doctest::Approx(0.0));
  CHECK(full.x_max == doctest::Approx(640.0));
  CHECK(full.y_max == doctest::Approx(480.0));

  fixtures::Rng rng(555);
  for (int i = 0; i < 100; ++i) {
    AnnotationRecord r;
    r.class_id = 3;
    r.w = 0.01 + 0.98 * rng.unit();
    r.h = 0.01 + 0.98 * rng.unit();
    r.cx = r.w / 2 + (1.0 - r.w) * rng.unit();
    r.cy = r.h / 2 + (1.0 - r.h) * rng.unit();
    AnnotationRecord back = normalize(denormalize(r, 640, 480), 3, 640, 480);
    CHECK(std::abs(back.cx - r.cx) <= 1e-6);
    CHECK(std::abs(back.cy - r.cy) <= 1e-6);
    CHECK(std::abs(back.w - r.w) <= 1e-6);
    CHECK(std::abs(back.h - r.h) <= 1e-6);
  }
}

TEST_CASE("split_dataset is a seeded 80/10/10 partition") {
  std::vector<std::string> paths;
  for (int i = 0; i < 100; ++i) paths.push_back("img" + std::to_string(i));
  SplitResult split = split_dataset(paths, 9);
  CHECK(split.train.size() == 80);
  CHECK(split.val.size() == 10);
  CHECK(split.test.size() == 10);

  std::set<std::string> all;
  for (const auto& p : split.train) all.insert(p);
  for (const auto& p : split.val) all.insert(p);
  for (const auto& p : split.test) all.insert(p);
  CHECK(all.size() == 100);

  SplitResult again = split_dataset(paths, 9);
  CHECK(again.train == split.train);
  SplitResult other = split_dataset(paths, 10);
  CHECK(other.train != split.train);
}
