#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sparsedom/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sparse domination experiments on dyadic grids"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  for (const char* name : {"constants", "dominate", "endpoint", "sparse-bounds", "whitney", "selftest"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();

  try {
    std::ifstream is(config_path, std::ios::binary);
    if (!is) throw sparsedom::Error(sparsedom::Errc::io_error, "cannot read config " + config_path);
    std::ostringstream text;
    text << is.rdbuf();
    sparsedom::RunConfig c = sparsedom::parse_config(text.str(), command);
    if (c.command != command)
      throw sparsedom::Error(sparsedom::Errc::type_mismatch,
                             "command: config says '" + c.command + "' but '" + command + "' was requested");
    if (sub->count("--out")) c.out = out_dir;
    if (sub->count("--seed")) c.seed = seed;
    const auto r = sparsedom::run(c);
    for (const auto& m : r.messages) std::cerr << m << '\n';
    for (const auto& f : r.files) std::cout << f << '\n';
    return 0;
  } catch (const sparsedom::Error& e) {
    std::cerr << "sparsedom " << command << ": " << e.what() << '\n';
    return sparsedom::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "sparsedom " << command << ": " << e.what() << '\n';
    return 1;
  }
}
