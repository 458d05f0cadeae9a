#include "monolab/catalog.hpp"
#include "monolab/error.hpp"
#include "monolab/report.hpp"
#include "monolab/scene.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int cmd_run(const std::string& scene_path, const std::string& out_path,
            const std::string& plot_dir, std::uint64_t seed,
            std::optional<double> tol) {
  std::ifstream f(scene_path, std::ios::binary);
  if (!f) {
    std::cerr << "cannot open scene file: " << scene_path << "\n";
    return 3;
  }
  std::ostringstream buf;
  buf << f.rdbuf();

  monolab::scene::Scene sc;
  try {
    sc = monolab::scene::parse_scene(buf.str());
  } catch (const monolab::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  nlohmann::json rep;
  try {
    monolab::scene::RunOptions opt;
    opt.seed = seed;
    opt.tol = tol;
    opt.plot_dir = plot_dir;
    rep = monolab::scene::run_analyses(sc, opt);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  std::string text = monolab::report::canonical_json(rep);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << text;
  }
  for (const auto& r : rep["requests"]) {
    std::string status = r.contains("verdict")
                             ? r["verdict"].value("status", "?")
                             : std::string("ERROR");
    std::cerr << "[" << status << "] " << r.value("name", "?") << " ("
              << r.value("kind", "?") << " on " << r.value("operator", "?")
              << ")\n";
  }
  return monolab::scene::any_inconclusive(rep) ? 2 : 0;
}

int cmd_catalog_list() {
  for (const auto& name : monolab::catalog::list_names())
    std::cout << name << "\n";
  return 0;
}

int cmd_catalog_show(const std::string& name) {
  try {
    auto e = monolab::catalog::expected(name);
    std::cout << e.name << ": " << e.description << "\n";
    std::cout << "  dimension: " << e.dim << "\n";
    for (const auto& p : e.points) {
      std::cout << "  point x=(";
      for (size_t i = 0; i < p.at.x.size(); ++i)
        std::cout << (i ? ", " : "") << p.at.x[i];
      std::cout << ") v=(";
      for (size_t i = 0; i < p.at.v.size(); ++i)
        std::cout << (i ? ", " : "") << p.at.v[i];
      std::cout << "): local max monotone expected "
                << monolab::status_name(p.local_max) << " [" << p.provenance
                << "]\n";
    }
    if (e.strong_modulus)
      std::cout << "  strong modulus (sampled): " << *e.strong_modulus << "\n";
    if (e.hypo_modulus)
      std::cout << "  hypomonotonicity modulus (sampled): " << *e.hypo_modulus
                << "\n";
    if (e.qualification)
      std::cout << "  sum qualification (dom T1 meets int dom T2): "
                << (*e.qualification ? "yes" : "no") << "\n";
  } catch (const monolab::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"monolab: local monotonicity analysis of set-valued operators"};
  app.require_subcommand(1);

  std::string scene_path, out_path, plot_dir;
  std::uint64_t seed = 0;
  double tol_value = -1.0;

  auto* run = app.add_subcommand("run", "run a scene file");
  run->add_option("scene", scene_path, "scene file")->required();
  run->add_option("--out", out_path, "write the JSON report here");
  run->add_option("--plot", plot_dir, "emit one SVG per analysis into this directory");
  run->add_option("--seed", seed, "PRNG seed recorded in the report");
  run->add_option("--tol", tol_value, "override the default tolerance");

  auto* cat = app.add_subcommand("catalog", "catalog of named operators");
  cat->require_subcommand(1);
  auto* list = cat->add_subcommand("list", "list operator names");
  std::string show_name;
  auto* show = cat->add_subcommand("show", "show an entry with expectations");
  show->add_option("name", show_name, "catalog entry")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(scene_path, out_path, plot_dir, seed,
                   tol_value > 0 ? std::optional<double>(tol_value)
                                 : std::nullopt);
  if (list->parsed()) return cmd_catalog_list();
  if (show->parsed()) return cmd_catalog_show(show_name);
  return 0;
}
