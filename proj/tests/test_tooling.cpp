#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include <json.hpp>

#include "cli.hpp"

using namespace roomgt;
namespace fs = std::filesystem;

namespace {

const auto fixtures = fs::path(ROOMGT_FIXTURES);

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "roomgt");
  auto argv = std::vector<const char*>{};
  for (auto& a : args) argv.push_back(a.c_str());
  return cli::run(int(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("roomgt_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  auto out = std::map<std::string, std::string>{};
  for (auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_binary(e.path());
  return out;
}

}  // namespace

TEST(Pfm, OnePixelLayout) {
  auto img = image(1, 1, 3);
  img.set_rgb(0, 0, {1, 2, 3});
  auto bytes = encode_pfm(img);
  ASSERT_EQ(bytes.size(), 24u);
  EXPECT_EQ(bytes.substr(0, 12), std::string("PF\n1 1\n-1.0\n"));
  float payload[3];
  std::memcpy(payload, bytes.data() + 12, 12);
  EXPECT_EQ(payload[0], 1.0f);
  EXPECT_EQ(payload[1], 2.0f);
  EXPECT_EQ(payload[2], 3.0f);
}

TEST(Pfm, GrayscaleHeaderAndRowOrder) {
  auto img = image(2, 2, 1);
  img.at(0, 0) = 1;  // top row
  img.at(0, 1) = 5;  // bottom row
  auto bytes = encode_pfm(img);
  EXPECT_EQ(bytes.substr(0, 3), "Pf\n");
  float first;
  std::memcpy(&first, bytes.data() + bytes.size() - 16, 4);
  EXPECT_EQ(first, 5.0f);  // rows are stored bottom to top
}

TEST(Pfm, RandomRoundTripIsBitwise) {
  std::mt19937 gen(12);
  auto bits = std::uniform_int_distribution<uint32_t>();
  for (int channels : {1, 3}) {
    auto img = image(16, 16, channels);
    for (auto& v : img.data) {
      float f;
      do f = std::bit_cast<float>(bits(gen));
      while (!std::isfinite(f));
      v = f;
    }
    auto back = decode_pfm(encode_pfm(img));
    ASSERT_EQ(back.data.size(), img.data.size());
    EXPECT_EQ(std::memcmp(back.data.data(), img.data.data(), img.data.size() * 4), 0);
    EXPECT_EQ(back.channels, channels);
  }
  auto dir = scratch("pfm");
  auto img = image(5, 3, 3, 0.25f);
  img.at(4, 2, 1) = -7.5f;
  write_pfm(img, dir / "a.pfm");
  EXPECT_TRUE(read_pfm(dir / "a.pfm") == img);
}

TEST(Pfm, NonFiniteIsRejected) {
  auto img = image(2, 2, 3);
  img.at(1, 1, 2) = std::nanf("");
  EXPECT_THROW(encode_pfm(img), error);
  img.at(1, 1, 2) = std::numeric_limits<float>::infinity();
  EXPECT_THROW(encode_pfm(img), error);
  EXPECT_THROW(encode_pfm(image(2, 2, 2)), error);
}

TEST(Pfm, MalformedInput) {
  EXPECT_THROW(decode_pfm("P6\n1 1\n255\n"), parse_error);
  EXPECT_THROW(decode_pfm("PF\n2 2\n-1.0\n\x01\x02"), parse_error);
  EXPECT_THROW(decode_pfm("PF\n0 2\n-1.0\n"), parse_error);
}

TEST(Pfm, BigEndianScaleIsSwapped) {
  auto bytes = std::string("Pf\n1 1\n1.0\n");
  uint32_t bits = std::bit_cast<uint32_t>(2.5f);
  for (int s = 24; s >= 0; s -= 8) bytes.push_back(char((bits >> s) & 0xff));
  EXPECT_EQ(decode_pfm(bytes).at(0, 0), 2.5f);
}

TEST(Cli, RenderWritesManifest) {
  auto dir = scratch("render");
  int  code = run_cli({"render", "--scene", (fixtures / "cornell.json").string(), "--spp", "2",
       "--seed", "7", "--width", "8", "--height", "8", "--out", dir.string(), "--preview"});
  ASSERT_EQ(code, 0);
  auto manifest = nlohmann::json::parse(read_binary(dir / "manifest.json"));
  EXPECT_EQ(manifest["width"], 8);
  EXPECT_EQ(manifest["max_bounces"], 7);
  EXPECT_EQ(manifest["seed"], 7);
  auto names = std::set<std::string>{};
  for (auto& c : manifest["channels"]) {
    names.insert(c["name"].get<std::string>());
    EXPECT_TRUE(fs::exists(dir / c["file"].get<std::string>()));
  }
  for (auto n : {"radiance", "albedo", "normal", "depth", "roughness", "instance", "light_mask"})
    EXPECT_TRUE(names.count(n)) << n;
  EXPECT_TRUE(fs::exists(dir / "radiance_preview.ppm"));
  auto radiance = read_pfm(dir / "radiance.pfm");
  EXPECT_EQ(radiance.width, 8);
  EXPECT_EQ(radiance.channels, 3);
}

TEST(Cli, ChannelsIncludePerLightAndEnvmaps) {
  auto dir  = scratch("channels");
  int  code = run_cli({"channels", "--scene", (fixtures / "cornell.json").string(), "--spp", "1",
       "--width", "8", "--height", "8", "--stride", "4", "--theta", "2", "--phi", "4",
       "--texel-spp", "2", "--bounces", "1", "--out", dir.string()});
  ASSERT_EQ(code, 0);
  auto manifest = nlohmann::json::parse(read_binary(dir / "manifest.json"));
  int  per_light = 0;
  for (auto& c : manifest["channels"])
    if (!c["light_id"].is_null()) per_light++;
  EXPECT_EQ(per_light, 6);  // two lights x (occluded, unoccluded, visibility)
  ASSERT_EQ(manifest["envmaps"].size(), 2u);
  auto env = read_pfm(dir / "envmap_full.pfm");
  EXPECT_EQ(env.width, 2 * 4);
  EXPECT_EQ(env.height, 2 * 2);
  EXPECT_EQ(manifest["envmaps"][0]["rows"], 2);
}

TEST(Cli, SameInvocationSameBytes) {
  auto a = scratch("det_a"), b = scratch("det_b");
  for (auto& dir : {a, b})
    ASSERT_EQ(run_cli({"channels", "--scene", (fixtures / "cornell.json").string(), "--spp", "2",
                  "--seed", "3", "--width", "8", "--height", "8", "--texel-spp", "1",
                  "--stride", "4", "--out", dir.string()}),
        0);
  EXPECT_EQ(snapshot(a), snapshot(b));
}

TEST(Cli, UsageErrorsExitTwo) {
  auto dir = scratch("usage");
  EXPECT_EQ(run_cli({"render", "--out", dir.string()}), 2);
  EXPECT_EQ(run_cli({"render", "--scene", "x.json", "--out", dir.string(), "--bogus"}), 2);
  EXPECT_EQ(run_cli({"no-such-command"}), 2);
  EXPECT_EQ(run_cli({}), 2);
  EXPECT_EQ(run_cli({"render", "--scene", "x.json", "--out", dir.string(), "--spp", "many"}), 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run_cli({"--help"}), 0); }

TEST(Cli, InvalidInputExitsOne) {
  auto dir = scratch("invalid");
  EXPECT_EQ(run_cli({"render", "--scene", (fixtures / "bad_material.json").string(), "--out",
                dir.string()}),
      1);
  EXPECT_EQ(run_cli({"render", "--scene", (dir / "missing.json").string(), "--out", dir.string()}), 1);
  EXPECT_EQ(run_cli({"render", "--scene", (fixtures / "cornell.json").string(), "--spp", "0",
                "--out", dir.string()}),
      1);
  EXPECT_EQ(run_cli({"channels", "--scene", (fixtures / "cornell.json").string(), "--light", "9",
                "--width", "4", "--height", "4", "--out", dir.string()}),
      1);
}

TEST(Cli, LayoutRoundTrip) {
  auto dir   = scratch("layout");
  auto cloud = std::string{};
  for (int i = 0; i <= 40; i++)
    for (int j = 0; j <= 30; j++)
      cloud += std::to_string(i * 0.1) + " " + std::to_string(j * 0.1) + " 0\n";
  for (int i = 0; i < 60; i++)
    cloud += std::to_string(1.5 + i * 0.01) + " 0.02 1.2 2\n";
  write_binary(dir / "room.xyz", cloud);
  ASSERT_EQ(run_cli({"fit-layout", "--cloud", (dir / "room.xyz").string(), "--cell", "0.1",
                "--out", (dir / "layout.json").string()}),
      0);
  auto j = nlohmann::json::parse(read_binary(dir / "layout.json"));
  EXPECT_EQ(j["vertices"].size(), 4u);
  EXPECT_EQ(j["openings"].size(), 1u);
  EXPECT_EQ(j["openings"][0]["type"], "window");
  ASSERT_EQ(run_cli({"eval-layout", "--pred", (dir / "layout.json").string(), "--gt",
                (dir / "layout.json").string(), "--out", (dir / "metrics.json").string()}),
      0);
  auto m = nlohmann::json::parse(read_binary(dir / "metrics.json"));
  EXPECT_EQ(m["iou"], 1.0);
  EXPECT_EQ(m["corner_precision"], 1.0);
}

TEST(Cli, FrictionPipeline) {
  auto dir = scratch("friction");
  ASSERT_EQ(run_cli({"friction-table", "--grid", "4", "--resolution", "16", "--out",
                (dir / "table.json").string()}),
      0);
  ASSERT_EQ(run_cli({"friction-map", "--scene", (fixtures / "cornell.json").string(), "--table",
                (dir / "table.json").string(), "--width", "8", "--height", "8", "--out",
                (dir / "mu.pfm").string()}),
      0);
  auto mu = read_pfm(dir / "mu.pfm");
  EXPECT_EQ(mu.channels, 1);
  for (auto v : mu.data) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
  ASSERT_EQ(run_cli({"export-urdf", "--obj", (fixtures / "tetra.obj").string(), "--table",
                (dir / "table.json").string(), "--mass", "0.5", "--out",
                (dir / "tetra.urdf").string()}),
      0);
  EXPECT_NE(read_binary(dir / "tetra.urdf").find("<lateral_friction"), std::string::npos);
  EXPECT_EQ(run_cli({"export-urdf", "--obj", (fixtures / "tetra.obj").string(), "--table",
                (dir / "table.json").string(), "--mass", "-1"}),
      1);
  EXPECT_EQ(run_cli({"friction-map", "--scene", (fixtures / "cornell.json").string(), "--table",
                (dir / "table.json").string(), "--mode", "cubic", "--out", (dir / "x.pfm").string()}),
      2);
}

TEST(Cli, SelectViews) {
  auto dir = scratch("views");
  write_binary(dir / "layout.json",
      R"({"vertices": [[0, 0], [2, 0], [2, 2], [0, 2]], "floor_z": 0, "height": 2})");
  ASSERT_EQ(run_cli({"select-views", "--scene", (fixtures / "cornell.json").string(), "--layout",
                (dir / "layout.json").string(), "--k", "3", "--out", (dir / "views.json").string()}),
      0);
  auto j = nlohmann::json::parse(read_binary(dir / "views.json"));
  ASSERT_EQ(j.size(), 3u);
  EXPECT_GE(j[0]["score"].get<double>(), j[1]["score"].get<double>());
  EXPECT_GE(j[1]["score"].get<double>(), j[2]["score"].get<double>());
}
