#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "amrt/cli/commands.hpp"
#include "amrt/io.hpp"

namespace amrt::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("amrt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_config(const std::string& name, const std::string& extra = "", int resolution = 32) const {
    std::ostringstream s;
    s << "[domain]\nkind = disk\nradius = 1\n"
      << "[grid]\nresolution = " << resolution << "\nsupport_radius = 0.75\n"
      << "[sinogram]\nn_boundary = 64\nn_angles = 64\nh_ray = 0.015625\n"
      << "[reconstruction]\nN = 12\n"
      << "[convergence]\nresolutions = 16, 32\n"
      << extra;
    std::ofstream(path(name)) << s.str();
    return path(name);
  }

  int run_cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::string read_bytes(const std::string& p) const {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, PhantomForwardReconstructSucceed) {
  const std::string cfg = write_config("run.ini");
  const std::string out = path("a");
  ASSERT_EQ(run_cli({"phantom", "--config", cfg, "--out", out}), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(fs::path(out) / kFieldsFile));
  EXPECT_TRUE(fs::exists(fs::path(out) / kAttenuationFile));
  EXPECT_TRUE(fs::exists(fs::path(out) / kConfigFile));
  ASSERT_EQ(run_cli({"forward", "--config", cfg, "--out", out, "--fields", out + "/" + kFieldsFile}), kExitOk)
      << err_.str();
  ASSERT_EQ(run_cli({"reconstruct", "--config", cfg, "--out", out, "--sinogram", out + "/" + kSinogramFile}), kExitOk)
      << err_.str();
  const io::Sections report = io::read_ini(out + "/" + kReportFile);
  EXPECT_TRUE(report.count("metrics"));
  EXPECT_TRUE(report.count("stability"));
}

TEST_F(CliTest, ForwardIsDeterministic) {
  const std::string cfg = write_config("run.ini");
  ASSERT_EQ(run_cli({"phantom", "--config", cfg, "--out", path("p"), "--seed", "5"}), kExitOk);
  const std::string fields = path("p") + "/" + kFieldsFile;
  const std::string sino = path("x") + "/" + kSinogramFile;
  ASSERT_EQ(run_cli({"forward", "--config", cfg, "--out", path("x"), "--fields", fields, "--noise", "0.01"}), kExitOk);
  const std::string a = read_bytes(sino);
  ASSERT_EQ(run_cli({"forward", "--config", cfg, "--out", path("x"), "--fields", fields, "--noise", "0.01"}), kExitOk);
  const std::string b = read_bytes(sino);
  EXPECT_FALSE(a.empty());
  EXPECT_TRUE(a == b);
}

TEST_F(CliTest, SeedControlsPhantom) {
  const std::string cfg = write_config("run.ini");
  ASSERT_EQ(run_cli({"phantom", "--config", cfg, "--out", path("s1"), "--seed", "3"}), kExitOk);
  ASSERT_EQ(run_cli({"phantom", "--config", cfg, "--out", path("s2"), "--seed", "3"}), kExitOk);
  ASSERT_EQ(run_cli({"phantom", "--config", cfg, "--out", path("s3"), "--seed", "4"}), kExitOk);
  auto data = [&](const std::string& dir) {
    const io::GridDocument doc = io::read_grid_file(path(dir) + "/" + kFieldsFile);
    std::vector<double> all;
    for (const auto& a : doc.arrays) all.insert(all.end(), a.data.begin(), a.data.end());
    return all;
  };
  EXPECT_TRUE(data("s1") == data("s2"));
  EXPECT_FALSE(data("s1") == data("s3"));
}

TEST_F(CliTest, ZeroPhantomGivesZeroSinogram) {
  const std::string cfg = write_config("run.ini", "[phantom]\nkind = zero\n");
  ASSERT_EQ(run_cli({"phantom", "--config", cfg, "--out", path("z")}), kExitOk);
  ASSERT_EQ(run_cli({"forward", "--config", cfg, "--out", path("z"), "--fields", path("z") + "/" + kFieldsFile}),
            kExitOk);
  const io::GridDocument doc = io::read_grid_file(path("z") + "/" + kSinogramFile);
  for (const char* layer : {"M0", "M1", "M2"})
    for (double v : doc.array(layer).data) EXPECT_EQ(v, 0.0);
}

TEST_F(CliTest, MetadataRoundTrip) {
  const std::string cfg = write_config("run.ini", "[run]\nnoise = 0.02\nnoise_seed = 11\n");
  ASSERT_EQ(run_cli({"phantom", "--config", cfg, "--out", path("m"), "--seed", "9"}), kExitOk);
  ASSERT_EQ(run_cli({"forward", "--config", cfg, "--out", path("m"), "--seed", "9", "--fields",
                     path("m") + "/" + kFieldsFile}),
            kExitOk);
  const io::GridDocument doc = io::read_grid_file(path("m") + "/" + kSinogramFile);
  const RunConfig back = embedded_config(doc.header);
  Overrides o;
  o.config_path = cfg;
  o.seed = 9;
  o.out_dir = path("m");
  const RunConfig expect = resolve_config(o);
  EXPECT_EQ(back.resolution, expect.resolution);
  EXPECT_EQ(back.n_boundary, expect.n_boundary);
  EXPECT_EQ(back.n_angles, expect.n_angles);
  EXPECT_EQ(back.N, expect.N);
  EXPECT_EQ(back.phantom.seed, 9u);
  EXPECT_DOUBLE_EQ(back.noise, 0.02);
  EXPECT_EQ(back.noise_seed, 11u);
  EXPECT_DOUBLE_EQ(back.h_ray, expect.h_ray);
  EXPECT_EQ(config_sections(back), config_sections(expect));
}

TEST_F(CliTest, RoundTripWritesReport) {
  const std::string cfg = write_config("run.ini");
  ASSERT_EQ(run_cli({"roundtrip", "--config", cfg, "--out", path("r")}), kExitOk) << err_.str();
  const io::Sections report = io::read_ini(path("r") + "/" + kReportFile);
  const double ef = std::stod(report.at("metrics").at("rel_l2_f"));
  EXPECT_TRUE(std::isfinite(ef));
  EXPECT_LT(ef, 0.5);
}

TEST_F(CliTest, ConvergenceWritesOrders) {
  const std::string cfg = write_config("run.ini");
  ASSERT_EQ(run_cli({"convergence", "--config", cfg, "--out", path("c")}), kExitOk) << err_.str();
  const io::Sections conv = io::read_ini(path("c") + "/" + kConvergenceFile);
  EXPECT_TRUE(conv.count("resolution.16"));
  EXPECT_TRUE(conv.count("resolution.32"));
  EXPECT_TRUE(conv.count("orders"));
}

TEST_F(CliTest, OutOfSupportBumpIsValidationError) {
  const std::string cfg = write_config("run.ini", "[phantom]\nkind = explicit\nF11 = 1 0.8 0 0.2\n");
  EXPECT_EQ(run_cli({"phantom", "--config", cfg, "--out", path("o")}), kExitValidation);
}

TEST_F(CliTest, AttenuatedWithoutFileIsValidationError) {
  const std::string cfg = write_config("run.ini");
  ASSERT_EQ(run_cli({"phantom", "--config", cfg, "--out", path("w")}), kExitOk);
  ASSERT_EQ(run_cli({"forward", "--config", cfg, "--out", path("w"), "--fields", path("w") + "/" + kFieldsFile}),
            kExitOk);
  EXPECT_EQ(run_cli({"reconstruct", "--config", cfg, "--out", path("w"), "--mode", "attenuated", "--sinogram",
                     path("w") + "/" + kSinogramFile}),
            kExitValidation);
}

TEST_F(CliTest, MismatchedGridIsValidationError) {
  const std::string small = write_config("small.ini");
  const std::string large = write_config("large.ini", "", 64);
  ASSERT_EQ(run_cli({"phantom", "--config", small, "--out", path("g")}), kExitOk);
  EXPECT_EQ(run_cli({"forward", "--config", large, "--out", path("g"), "--fields", path("g") + "/" + kFieldsFile}),
            kExitValidation);
}

TEST_F(CliTest, BadArgumentsAreValidationErrors) {
  EXPECT_EQ(run_cli({"phantom", "--bogus"}), kExitValidation);
  EXPECT_EQ(run_cli({"phantom", "--mode", "sideways"}), kExitValidation);
  EXPECT_EQ(run_cli({}), kExitValidation);
  EXPECT_EQ(run_cli({"forward", "--out", path("q")}), kExitValidation);
  const std::string cfg = write_config("bad.ini", "[grid]\nresolution = 33\n");
  EXPECT_EQ(run_cli({"phantom", "--config", cfg}), kExitValidation);
  const std::string unknown = write_config("unknown.ini", "[extra]\nkey = 1\n");
  EXPECT_EQ(run_cli({"phantom", "--config", unknown}), kExitValidation);
  EXPECT_EQ(run_cli({"phantom", "--noise", "-1", "--out", path("n")}), kExitValidation);
}

TEST_F(CliTest, HelpExitsCleanly) { EXPECT_EQ(run_cli({"--help"}), kExitOk); }

TEST(GridFile, RoundTripPreservesArraysAndHeader) {
  const fs::path p = fs::temp_directory_path() / "amrt_grid_roundtrip.amrt";
  io::GridDocument doc;
  doc.header["meta"]["note"] = "x = 1";
  doc.arrays.push_back({"A", 2, 3, {1.0, -2.5, 3.25, 1e-300, 0.0, 7.0}});
  io::write_grid_file(p.string(), doc);
  const io::GridDocument back = io::read_grid_file(p.string());
  EXPECT_EQ(back.value("meta", "note"), "x = 1");
  EXPECT_EQ(back.array("A").rows, 2);
  EXPECT_EQ(back.array("A").cols, 3);
  EXPECT_EQ(back.array("A").data, doc.arrays[0].data);
  fs::remove(p);
}

}  // namespace
}  // namespace amrt::cli
