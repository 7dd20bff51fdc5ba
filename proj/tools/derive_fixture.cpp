// Usage: derive_fixture <out_dir> [seed]
// Writes paper_fixture.tcg and paper_fixture.scenario as derived from the seed.
#include <filesystem>
#include <iostream>

#include "trustconnect/experiment.hpp"
#include "trustconnect/text_format.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: derive_fixture <out_dir> [seed]\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  const std::uint64_t seed = argc > 2 ? trustconnect::parse_u64(argv[2]) : trustconnect::kPaperFixtureSeed;
  const auto fixture = trustconnect::derive_paper_fixture(seed);
  std::filesystem::create_directories(dir);
  trustconnect::save_graph(fixture.graph, dir / "paper_fixture.tcg");
  trustconnect::save_scenario(fixture.scenario, dir / "paper_fixture.scenario");
  std::cout << "graph hash " << trustconnect::hex64(trustconnect::graph_hash(fixture.graph)) << "\n";
  return 0;
}
