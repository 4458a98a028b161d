#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "ped/io.hpp"
#include "ped/manifest.hpp"
#include "ped/report_io.hpp"
#include "ped/rng.hpp"

using namespace ped;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path()
             / ("ped_io_test_" + std::to_string(Rng(::getpid()).next_u64() % 1000000));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("16-bit PNG round trip, including the ignore sentinel") {
    TempDir dir;
    const fs::path p = dir.path / "labels.png";
    std::vector<std::uint16_t> data{1, 1, 2, 65535};
    write_gray16_png(p, 2, 2, data);
    const LabelMap m = read_label_png(p);
    CHECK(m.width == 2);
    CHECK(m.height == 2);
    CHECK(m.data == data);
    CHECK(m.at(1, 1) == kIgnoreLabel);
}

TEST_CASE("instance PNG round trip with large ids") {
    TempDir dir;
    const fs::path p = dir.path / "inst.png";
    std::vector<std::uint16_t> data{0, 300, 40000, 0, 0, 7};
    write_gray16_png(p, 3, 2, data);
    const InstanceMap m = read_instance_png(p);
    CHECK(m.data == data);
}

TEST_CASE("8-bit PNG is rejected for labels but decodes as probabilities") {
    TempDir dir;
    const fs::path p = dir.path / "plain8.png";
    // 1x1 8-bit grayscale PNG, pixel value 128
    static const unsigned char kGray8Png[] = {
        0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
        0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00, 0x00, 0x00,
        0x00, 0x3a, 0x7e, 0x9b, 0x55, 0x00, 0x00, 0x00, 0x0a, 0x49, 0x44, 0x41, 0x54, 0x78,
        0x9c, 0x63, 0x68, 0x00, 0x00, 0x00, 0x82, 0x00, 0x81, 0x77, 0xcd, 0x72, 0xb6, 0x00,
        0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(kGray8Png), sizeof(kGray8Png));
    out.close();
    CHECK_THROWS_AS(read_label_png(p), FormatError);
    const ProbMap probs = read_gray8_prob_png(p);
    CHECK(probs.width == 1);
    CHECK(probs.height == 1);
    CHECK(probs.values[0] == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("missing or corrupt PNG files raise errors") {
    TempDir dir;
    CHECK_THROWS_AS(read_label_png(dir.path / "nope.png"), IoError);
    const fs::path bad = dir.path / "bad.png";
    std::ofstream(bad) << "definitely not a png";
    CHECK_THROWS_AS(read_label_png(bad), FormatError);
}

TEST_CASE("PEDP header and payload round trip bit-exactly") {
    TempDir dir;
    const fs::path p = dir.path / "map.pedp";
    ProbMap m(2, 2, 1);
    m.values = {0.0f, 0.25f, 0.5f, 1.0f};
    write_prob_map(p, m);
    const ProbMap back = read_prob_map(p);
    CHECK(back.channels == 2);
    CHECK(back.height == 1);
    CHECK(back.width == 2);
    CHECK(back.values == m.values);

    // header layout example: magic + version + K,H,W
    const std::string bytes = read_file(p);
    CHECK(bytes.substr(0, 4) == "PEDP");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1); // version lo byte
    CHECK(static_cast<unsigned char>(bytes[6]) == 2); // K lo byte
    CHECK(bytes.size() == 16 + 4 * 4);
}

TEST_CASE("PEDP range handling: strict raises, lenient clamps") {
    TempDir dir;
    const fs::path p = dir.path / "map.pedp";
    ProbMap m(1, 2, 1);
    m.values = {0.5f, 1.0f};
    write_prob_map(p, m);
    // poke a 1.5f into the payload
    std::string bytes = read_file(p);
    const float bad = 1.5f;
    std::memcpy(bytes.data() + 16, &bad, 4);
    write_file_atomic(p, bytes);
    CHECK_THROWS_AS(read_prob_map(p, true), RangeError);
    const ProbMap lenient = read_prob_map(p, false);
    CHECK(lenient.values[0] == 1.0f);
    CHECK(lenient.values[1] == 1.0f);
}

TEST_CASE("PEDP bad magic and truncation are format errors") {
    TempDir dir;
    const fs::path p = dir.path / "junk.pedp";
    write_file_atomic(p, "JUNKxxxxxxxxxxxxxxx");
    CHECK_THROWS_AS(read_prob_map(p), FormatError);
    ProbMap m(1, 4, 4);
    write_prob_map(p, m);
    std::string bytes = read_file(p);
    bytes.resize(bytes.size() - 4);
    write_file_atomic(p, bytes);
    CHECK_THROWS_AS(read_prob_map(p), FormatError);
}

TEST_CASE("report JSON round trip and CSV rendering of the paper's instance row") {
    Report r;
    CategoryScore stuff;
    stuff.category = 1;
    stuff.name = "road";
    stuff.kind = CategoryKind::Stuff;
    stuff.f_edge = stuff.f2 = 0.898;
    stuff.f_object = 1.0;
    stuff.theta_star = 0.52;
    r.categories.push_back(stuff);
    CategoryScore car;
    car.category = 11;
    car.name = "car";
    car.kind = CategoryKind::Instance;
    car.f_edge = 0.678;
    car.f_object = 0.555;
    car.f2 = 0.376;
    car.theta_star = 0.37;
    car.support.gt_instances = 20;
    car.support.pred_instances = 19;
    car.support.tp = 15;
    car.support.fp = 4;
    car.support.fn = 5;
    r.categories.push_back(car);
    r.instance_mean_f_edge = 0.678;
    r.instance_mean_f_object = 0.555;
    r.instance_mean_f2 = 0.376;
    r.stuff_mean_f2 = 0.898;
    r.overall_mean_f2 = 0.637;
    r.config.tolerance_mode = "pixels";
    r.config.tolerance_value = 2.0;
    r.config.thresholds = 99;
    r.config.iou_min = 0.5;
    r.config.top_t = 2;
    r.config.radius = 2;
    r.config.instance_edge_mode = "dataset-ods";

    const std::string json = report_to_json_string(r);
    const Report back = report_from_json_string(json);
    CHECK(report_to_json_string(back) == json); // lossless round trip
    CHECK(back.categories[1].f_edge == 0.678);

    const std::string csv = report_to_csv(r);
    CHECK(csv.find("11,car,instance,67.8,55.5,37.6,0.37,") != std::string::npos);
    CHECK(csv.find(",instance_mean,mean,67.8,55.5,37.6,,") != std::string::npos);
    CHECK(csv.find("skipped") == std::string::npos); // empty skip list omitted
    CHECK(json.find("\"skipped\": []") != std::string::npos);

    r.skipped.push_back({13, "train", "no ground-truth instances and no predictions"});
    const std::string csv2 = report_to_csv(r);
    CHECK(csv2.find("13,train,skipped") != std::string::npos);
}

TEST_CASE("report writes are deterministic") {
    TempDir dir;
    Report r;
    CategoryScore s;
    s.category = 1;
    s.name = "road";
    s.kind = CategoryKind::Stuff;
    s.f_edge = s.f2 = 1.0 / 3.0;
    s.f_object = 1.0;
    s.theta_star = 0.01;
    r.categories.push_back(s);
    r.stuff_mean_f2 = s.f2;
    r.overall_mean_f2 = s.f2;
    write_report(r, dir.path / "a.json", dir.path / "a.csv");
    write_report(r, dir.path / "b.json", dir.path / "b.csv");
    CHECK(read_file(dir.path / "a.json") == read_file(dir.path / "b.json"));
    CHECK(read_file(dir.path / "a.csv") == read_file(dir.path / "b.csv"));
}

TEST_CASE("categories file parses ids, names and kinds") {
    TempDir dir;
    const fs::path p = dir.path / "cats.json";
    write_file_atomic(p, R"([{"id":1,"name":"sky","kind":"stuff"},
                             {"id":11,"name":"car","kind":"instance"}])");
    const CategorySet cats = read_categories_file(p);
    CHECK(cats.size() == 2);
    CHECK(cats.at(0).name == "sky");
    CHECK(cats.at(1).kind == CategoryKind::Instance);
    write_file_atomic(p, R"([{"id":1,"name":"sky","kind":"blob"}])");
    CHECK_THROWS_AS(read_categories_file(p), FormatError);
}

TEST_CASE("file checksums are stable") {
    TempDir dir;
    const fs::path p = dir.path / "x.bin";
    write_file_atomic(p, "hello");
    CHECK(file_crc32(p) == "3610a686");
}
