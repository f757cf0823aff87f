#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "biord/cli.hpp"

int main(int argc, char** argv) {
  using biord::Command;
  biord::RunConfig cfg;
  CLI::App app{"Exact experiments with bi-orders on free products"};
  app.require_subcommand(1);

  auto order_opts = [&](CLI::App* sub) {
    sub->add_option("--order", cfg.order, "magnus, realized or type:<alpha>");
    sub->add_option("--realization", cfg.realization, "realization file for the realized order");
    sub->add_option("--base-seed", cfg.base_seed, "seed of the default merged Z*Z realization");
  };

  auto* compare = app.add_subcommand("compare", "compare two words in an order");
  order_opts(compare);
  compare->add_option("words", cfg.words, "two words")->expected(2)->required();

  auto* cone = app.add_subcommand("cone", "positive words of a ball");
  order_opts(cone);
  cone->add_option("--radius", cfg.radius);

  auto* biinv = app.add_subcommand("biinv", "audit bi-invariance on a ball");
  order_opts(biinv);
  biinv->add_option("--radius", cfg.radius);

  auto* merge = app.add_subcommand("merge", "merge two realizations");
  merge->add_option("--radius", cfg.radius);
  merge->add_option("--eps", cfg.eps);
  merge->add_option("--seed", cfg.seed);
  merge->add_option("--realization", cfg.realization, "first realization (default Z at 0, step 1/2)");
  merge->add_option("--realization-h", cfg.realization_h, "second realization (default Z at 0, step 1/3)");
  merge->add_option("--out", cfg.out, "write the merged realization here");

  auto* noniso = app.add_subcommand("noniso", "two orders positive on a chain that disagree");
  noniso->add_option("--chain", cfg.chain, "words separated by ';'");
  noniso->add_option("--search", cfg.search_radius);
  noniso->add_option("--audit", cfg.audit_radius);
  noniso->add_option("--seed", cfg.seed);
  noniso->add_option("--realization", cfg.realization);
  noniso->add_option("--base-seed", cfg.base_seed);

  auto* type = app.add_subcommand("type", "window membership of a type alpha order");
  type->add_option("--alpha", cfg.alpha);
  type->add_option("--window", cfg.window, "k,l,m,n");
  type->add_flag("--printed", cfg.printed_form, "use the printed form b^l < (b^a)^k of the last inequality");

  auto* separate = app.add_subcommand("separate", "orbit separation evidence");
  separate->add_option("--alpha", cfg.alpha);
  separate->add_option("--beta", cfg.beta);
  separate->add_option("--w1", cfg.w1);
  separate->add_option("--w2", cfg.w2);
  separate->add_option("--aut-len", cfg.aut_len);
  separate->add_option("--bound", cfg.bound);
  separate->add_option("--rounds", cfg.max_rounds);

  auto* saturate = app.add_subcommand("saturate", "close positive seeds under products and conjugation");
  saturate->add_option("--bound", cfg.bound);
  saturate->add_option("--rounds", cfg.max_rounds);
  saturate->add_option("words", cfg.words)->required();

  auto* plot = app.add_subcommand("plot", "SVG and CSV of a PL map");
  plot->add_option("--map", cfg.map, "PL map text, e.g. '1/2; (-1,-1/2) (0,0)'");
  plot->add_option("--range", cfg.range, "lo,hi");
  plot->add_option("--out", cfg.out, "output stem; writes <stem>.svg and <stem>.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return biord::kExitInput;
  }

  const std::pair<CLI::App*, Command> table[] = {
      {compare, Command::compare}, {cone, Command::cone},         {biinv, Command::biinv},
      {merge, Command::merge},     {noniso, Command::noniso},     {type, Command::type},
      {separate, Command::separate}, {saturate, Command::saturate}, {plot, Command::plot}};
  for (const auto& [sub, cmd] : table) {
    if (sub->parsed()) cfg.command = cmd;
  }
  return biord::run(cfg, std::cout);
}
