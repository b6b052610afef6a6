#include <gtest/gtest.h>

#include "cli_runner.hpp"
#include "frobgeom/io.hpp"
#include "oracles.hpp"

using frobgeom::Json;

TEST(Cli, FrobeniusExample) {
  const auto r = run_cli("frobenius 6 9 20");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["F"].get<long long>(), oracle::brute_frobenius({6, 9, 20}));
  EXPECT_EQ(j["config"]["subcommand"], "frobenius");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli("frobenius 6 9").code, 1);
  EXPECT_EQ(run_cli("frobenius").code, 1);
  EXPECT_EQ(run_cli("no-such-command").code, 1);
  EXPECT_EQ(run_cli("ensemble --domain blob --T 5").code, 1);
  EXPECT_EQ(run_cli("minima --lattice /nonexistent/lattice.json").code, 1);
  EXPECT_EQ(run_cli("ensemble --T 5 --mode sample").code, 1);
}

TEST(Cli, EnsembleCsvRoundTrips) {
  const std::string path = testing::TempDir() + "cli_ens.csv";
  ASSERT_EQ(run_cli("ensemble --domain cube --dim 3 --T 20 --mode exhaustive --out " + path).code, 0);
  std::ifstream in(path);
  const auto csv = frobgeom::read_ensemble_csv(in);
  ASSERT_TRUE(csv.config);
  EXPECT_EQ(csv.config->subcommand, "ensemble");
  EXPECT_EQ(csv.records.size(), frobgeom::enumerate_primitive(frobgeom::Domain::unit_cube(3), 20).size());
  for (const auto& r : csv.records) EXPECT_EQ(r.F, oracle::brute_frobenius(r.a.coords()));
}

TEST(Cli, LatticeJsonFeedsMinimaAndCovering) {
  const auto lat = run_cli("lattice 2 3 5");
  ASSERT_EQ(lat.code, 0);
  const auto j = Json::parse(lat.out);
  EXPECT_TRUE(j["equal"].get<bool>());
  const std::string path = testing::TempDir() + "cli_lat.json";
  std::ofstream(path) << j["L_a"].dump();
  const auto m = run_cli("minima --lattice " + path);
  ASSERT_EQ(m.code, 0);
  const auto c = run_cli("covering --lattice " + path + " --tol 1e-7");
  ASSERT_EQ(c.code, 0);
  const auto cj = Json::parse(c.out);
  EXPECT_NEAR(cj["planar"]["value"].get<double>(), (1 + 10) / std::sqrt(30.0), 1e-6);
}

TEST(Cli, VerifyCommandsExitCodes) {
  const auto ok = run_cli("verify-identity --dim 3 --T 12 --tol 1e-6");
  EXPECT_EQ(ok.code, 0);
  // (4,7,8) lies in 9*cube and violates the printed Erdos-Graham bound
  const auto bad = run_cli("verify-bounds --domain cube --dim 3 --T 9");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("erdos_graham"), std::string::npos);
}

TEST(Cli, ByteIdenticalAcrossThreadCounts) {
  for (const std::string args : {"ensemble --domain cube --dim 3 --T 25 --mode sample --n 300 --seed 4",
                                 "ensemble --domain d0 --dim 3 --T 30 --format json",
                                 "siegel --domain d0 --dim 3 --T 30 --body box:0.75,1 --r-grid 0.3,0.5"}) {
    const auto a = run_cli(args + " --threads 1");
    const auto b = run_cli(args + " --threads 8");
    ASSERT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}
