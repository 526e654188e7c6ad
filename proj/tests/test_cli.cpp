#include "croof/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace croof;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("croof_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const std::string& p, std::string& header) {
  std::ifstream in(p);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string value_line(const std::string& report) {
  std::istringstream is(report);
  for (std::string line; std::getline(is, line);)
    if (line.rfind("value ", 0) == 0) return line;
  return {};
}

}  // namespace

TEST_F(CliTest, RandRhoWritesValidReproducibleFiles) {
  const ComplexMatrix rho = cli::cmd_rand_rho(8, 8, 11, path("a.cmat"));
  cli::cmd_rand_rho(8, 8, 11, path("b.cmat"));
  EXPECT_EQ(slurp(path("a.cmat")), slurp(path("b.cmat")));
  const ComplexMatrix back = load_cmat(path("a.cmat"));
  EXPECT_EQ(back, rho);
  EXPECT_LT(hermiticity_defect(back), 1e-15);
  EXPECT_NEAR(back.trace().real(), 1.0, 1e-14);

  cli::cmd_rand_rho(6, 3, 5, path("r3.cmat"));
  EXPECT_EQ(densityEig(load_cmat(path("r3.cmat"))).rank(), 3);
  EXPECT_THROW(cli::cmd_rand_rho(4, 2, 0, path("missing/dir/x.cmat")), std::runtime_error);
}

TEST_F(CliTest, EvalPureGhzState) {
  save_cmat(path("ghz.cmat"), ghz_state() * ghz_state().adjoint());
  cli::RunConfig cfg;
  cfg.rho_path = path("ghz.cmat");
  cfg.measure = "tangle";
  cfg.trace_path = path("trace.csv");
  cfg.decomposition_path = path("dec.txt");
  std::ostringstream os;
  const auto rep = cli::cmd_eval(cfg, os);
  EXPECT_EQ(rep.exit_code, cli::converged);
  EXPECT_NEAR(rep.solution.value, 1.0, 1e-12);
  EXPECT_LE(rep.solution.iterations, 1);
  EXPECT_NE(os.str().find("status "), std::string::npos);

  std::string header;
  const auto rows = read_csv(cfg.trace_path, header);
  EXPECT_EQ(header, "iter,fval");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.back()[1], rep.solution.value);

  std::ifstream dec(cfg.decomposition_path);
  const ComplexMatrix states = read_cmat(dec);
  EXPECT_EQ(states.rows(), 8);
  EXPECT_EQ(states.cols(), rep.solution.k);
  std::vector<double> weights;
  for (double w; dec >> w;) weights.push_back(w);
  ASSERT_EQ(static_cast<Eigen::Index>(weights.size()), states.cols());
  ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Eigen::Index c = static_cast<Eigen::Index>(i);
    rho += weights[i] * states.col(c) * states.col(c).adjoint();
  }
  EXPECT_LT(max_abs(rho - ghz_state() * ghz_state().adjoint()), 1e-12);
}

TEST_F(CliTest, EvalStoredIsotropicState) {
  save_cmat(path("iso.cmat"), isotropic_state(5, 0.3));
  cli::RunConfig cfg;
  cfg.rho_path = path("iso.cmat");
  cfg.measure = "entropy";
  cfg.k = 50;
  cfg.restarts = 2;
  cfg.trace_path = path("trace.csv");
  std::ostringstream os;
  const auto rep = cli::cmd_eval(cfg, os);
  EXPECT_EQ(rep.exit_code, cli::converged);
  EXPECT_NEAR(rep.solution.value, 0.129322085695260, 1e-9);

  // first trace value is h at the starting point, last is the reported optimum
  std::string header;
  const auto rows = read_csv(cfg.trace_path, header);
  EXPECT_EQ(rows.back()[1], rep.solution.value);
  EXPECT_EQ(rows.front()[1], rep.solution.fvals.front());
  EXPECT_GT(rows.front()[1], rep.solution.value);
}

TEST_F(CliTest, IterationLimitGivesExitTwo) {
  save_cmat(path("w.cmat"), ghz_w_mixture(0.8));
  cli::RunConfig cfg;
  cfg.rho_path = path("w.cmat");
  cfg.measure = "tangle";
  cfg.termination.MaxIter = 1;
  cfg.restarts = 1;
  std::ostringstream os;
  EXPECT_EQ(cli::cmd_eval(cfg, os).exit_code, cli::iteration_limit);
  EXPECT_NE(os.str().find("status max-iter"), std::string::npos);
}

TEST_F(CliTest, EvalIsBitReproducible) {
  cli::cmd_rand_rho(8, 3, 2, path("r.cmat"));
  cli::RunConfig cfg;
  cfg.rho_path = path("r.cmat");
  cfg.measure = "meyer-wallach";
  cfg.algorithm = Algorithm::bfgs;
  cfg.restarts = 2;
  cfg.seed = 99;
  std::ostringstream a, b;
  cli::cmd_eval(cfg, a);
  cli::cmd_eval(cfg, b);
  EXPECT_FALSE(value_line(a.str()).empty());
  EXPECT_EQ(value_line(a.str()), value_line(b.str()));
}

TEST_F(CliTest, EvalRejectsBadInput) {
  cli::RunConfig cfg;
  std::ostringstream os;
  EXPECT_THROW(cli::cmd_eval(cfg, os), std::invalid_argument);
  cfg.rho_path = path("nope.cmat");
  EXPECT_THROW(cli::cmd_eval(cfg, os), std::runtime_error);

  std::ofstream(path("bad.cmat")) << "cmat 2 2\n1 0\n";
  cfg.rho_path = path("bad.cmat");
  EXPECT_THROW(cli::cmd_eval(cfg, os), ParseError);

  cli::cmd_rand_rho(4, 4, 1, path("four.cmat"));
  cfg.rho_path = path("four.cmat");
  cfg.measure = "tangle";
  EXPECT_THROW(cli::cmd_eval(cfg, os), std::invalid_argument);
  cfg.measure = "entropy";
  cfg.dims = {2, 3};
  EXPECT_THROW(cli::cmd_eval(cfg, os), std::invalid_argument);
  cfg.dims.clear();
  cfg.k = 2;
  EXPECT_THROW(cli::cmd_eval(cfg, os), std::invalid_argument);
}

TEST(CliShapes, DefaultSubsystems) {
  EXPECT_EQ(cli::measure_shape("entropy", 9, {}).dims(), (std::vector<int>{3, 3}));
  EXPECT_EQ(cli::measure_shape("entropy", 8, {2, 4}).dims(), (std::vector<int>{2, 4}));
  EXPECT_EQ(cli::measure_shape("tangle", 8, {}).dims(), (std::vector<int>{2, 2, 2}));
  EXPECT_THROW(cli::measure_shape("entropy", 8, {}), std::invalid_argument);
  EXPECT_THROW(cli::measure_shape("meyer-wallach", 6, {}), std::invalid_argument);
}

TEST_F(CliTest, ExamplesReportReferenceAndErrorTrace) {
  cli::RunConfig cfg;
  cfg.algorithm = Algorithm::bfgs;
  cfg.restarts = 10;
  cfg.trace_path = path("ghzw.csv");
  std::ostringstream os;
  const auto rep = cli::cmd_example_ghzw(0.7, cfg, os);
  ASSERT_TRUE(rep.reference);
  EXPECT_EQ(rep.solution.k, 6);
  EXPECT_NEAR(rep.solution.value, 0.190667409058084, 1e-9);
  EXPECT_NE(os.str().find("reference 0.19066740905808"), std::string::npos);

  std::string header;
  const auto rows = read_csv(cfg.trace_path, header);
  EXPECT_EQ(header, "iter,fval,error");
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_LE(rows[i][2], rows[i - 1][2] + 1e-14);

  for (double p : {0.0, 1.0}) {
    cli::RunConfig c;
    c.restarts = 2;
    std::ostringstream o;
    EXPECT_NEAR(cli::cmd_example_ghzw(p, c, o).solution.value, p, 1e-10) << p;
  }
}

TEST_F(CliTest, IsotropicExampleEndpoints) {
  cli::RunConfig cfg;
  cfg.restarts = 2;
  std::ostringstream os;
  EXPECT_NEAR(cli::cmd_example_isotropic(3, 1.0, cfg, os).solution.value, std::log2(3.0), 1e-10);
  const auto sep = cli::cmd_example_isotropic(3, 1.0 / 9.0, cfg, os);
  EXPECT_EQ(sep.reference->exact_value, 0.0);
  EXPECT_LT(sep.solution.value, 1e-7);
  EXPECT_EQ(sep.solution.k, 18);
  EXPECT_THROW(cli::cmd_example_isotropic(3, 1.5, cfg, os), std::invalid_argument);
}
