#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "graphsum/config.hpp"

using namespace graphsum::train;

namespace {

std::string write_config(const std::string& name, const std::string& body) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "graphsum_test_config";
  fs::create_directories(dir);
  const auto path = (dir / name).string();
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("config files parse key=value lines with comments") {
  auto path = write_config("ok.cfg",
                           "# a comment\n"
                           "learning_rate = 0.01  # trailing comment\n"
                           "mode=hdsg\n"
                           "\n"
                           "heads = 4\n"
                           "use_tri_blocking = true\n");
  auto config = parse_config_file(path);
  CHECK(config.learning_rate == 0.01);
  CHECK(config.model.hdsg);
  CHECK(config.model.heads == 4);
  CHECK(config.use_tri_blocking);
  // Untouched keys keep defaults.
  CHECK(config.batch_size == 32);
  CHECK(config.patience_epochs == 3);
}

TEST_CASE("unknown keys and malformed lines are rejected with the line number") {
  auto path = write_config("bad.cfg", "learning_rate = 0.01\nbogus_key = 1\n");
  try {
    parse_config_file(path);
    FAIL("expected unknown-key error");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bogus_key") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }

  auto noeq = write_config("noeq.cfg", "just words\n");
  CHECK_THROWS(parse_config_file(noeq));

  auto badval = write_config("badval.cfg", "batch_size = many\n");
  CHECK_THROWS(parse_config_file(badval));
}

TEST_CASE("overrides win over file values") {
  auto path = write_config("base.cfg", "learning_rate = 0.01\nselect_k = 3\n");
  auto config = parse_config_file(path);
  apply_override(config, "select_k", "9");
  apply_override(config, "no_edge_feature", "true");
  CHECK(config.select_k == 9);
  CHECK_FALSE(config.model.use_edge_feature);
  CHECK_THROWS(apply_override(config, "nonsense", "1"));
}

TEST_CASE("dump echoes every key and round-trips") {
  TrainConfig config;
  config.model.hdsg = true;
  config.select_k = 9;
  config.metric = "limited_length_recall";
  const std::string dumped = dump_config(config);
  CHECK(dumped.find("mode=hdsg") != std::string::npos);
  CHECK(dumped.find("select_k=9") != std::string::npos);
  CHECK(dumped.find("metric=limited_length_recall") != std::string::npos);

  auto path = write_config("round.cfg", dumped);
  auto back = parse_config_file(path);
  CHECK(dump_config(back) == dumped);
}

TEST_CASE("config validation") {
  TrainConfig config;
  CHECK_NOTHROW(config.validate());
  config.learning_rate = 0.0;
  CHECK_THROWS(config.validate());
  config = TrainConfig{};
  config.patience_epochs = 0;
  CHECK_THROWS(config.validate());
  config = TrainConfig{};
  config.filter_fraction = 1.0;
  CHECK_THROWS(config.validate());
}
