// chipfire: batch front end for the chip-firing polytope library.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "chipfire/cli.hpp"

namespace fs = std::filesystem;
using namespace chipfire;

namespace {

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-reachable chip configurations on trees and their polytopes"};
  app.require_subcommand(1, 1);

  cli::RunConfig rc;
  std::string format, out_path, cache_flag;
  for (const auto& name : cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--tree", rc.tree_path, "tree file: n, then one 1-indexed edge per line");
    sub->add_option("--config", rc.config, "comma-separated chip counts");
    sub->add_option("--l", rc.l, "number of chips l");
    sub->add_option("--t", rc.t, "dilation factor t");
    sub->add_option("--n-max", rc.n_max, "largest tree size in sweeps");
    sub->add_option("--l-max", rc.l_max, "largest chip count in sweeps");
    sub->add_option("--t-max", rc.t_max, "largest dilation factor in sweeps");
    sub->add_option("--format", format, "json, csv or text");
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--jobs", rc.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cache", cache_flag, "result cache directory");
    sub->add_flag("--force", rc.force, "lift size guards");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }
  rc.command = app.get_subcommands().front()->get_name();

  try {
    if (!format.empty()) rc.format = cli::parse_format(format);

    const std::string cache_dir = cli::resolve_cache_dir(cache_flag);
    fs::path cached;
    if (!cache_dir.empty()) {
      std::optional<Tree> tree;
      if (!rc.tree_path.empty()) tree = parse_tree(cli::read_file(rc.tree_path));
      cached = fs::path(cache_dir) / (rc.command + "-" + cli::cache_key(rc, tree) + ".out");
      if (fs::exists(cached)) {
        write_output(out_path, cli::read_file(cached.string()));
        return cli::kExitOk;
      }
    }

    std::string err;
    cli::CommandOutput result = cli::run_command(rc, err);
    if (!err.empty()) std::cerr << "chipfire: " << err << "\n";
    if (!result.text.empty()) write_output(out_path, result.text);
    if (!cached.empty() && result.exit_code == cli::kExitOk) {
      fs::create_directories(cached.parent_path());
      fs::path tmp = cached;
      tmp += ".tmp";
      {
        std::ofstream out(tmp, std::ios::binary);
        out << result.text;
      }
      fs::rename(tmp, cached);
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "chipfire: " << e.what() << "\n";
    return cli::kExitUsage;
  }
}
