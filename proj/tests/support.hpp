#pragma once

// Test-only helpers: scratch directories, random input generators and the
// brute-force trust oracle. Nothing here calls into the kernels.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "trustconnect/graph.hpp"
#include "trustconnect/snapshot.hpp"
#include "trustconnect/text_format.hpp"

namespace tc_test {

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("trustconnect_" + tag + "_" + std::to_string(getpid_compat()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static long getpid_compat();
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) { return trustconnect::detail::read_file(p); }

/// Random small graph with random resilience; edges drawn with probability p.
inline trustconnect::DependencyGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes, double p) {
  std::uniform_int_distribution<std::size_t> count(1, max_nodes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = count(rng);
  std::vector<trustconnect::EcuNode> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back({static_cast<trustconnect::NodeId>(i), "E" + std::to_string(i), unit(rng)});
  }
  std::vector<trustconnect::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && unit(rng) < p) edges.push_back({static_cast<trustconnect::NodeId>(i), static_cast<trustconnect::NodeId>(j)});
    }
  }
  return {std::move(nodes), std::move(edges)};
}

/// Arbitrary complete snapshot with values in [-10, 10].
inline trustconnect::Snapshot random_snapshot(std::mt19937_64& rng, const trustconnect::DependencyGraph& g) {
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  trustconnect::Snapshot s;
  for (const auto& n : g.nodes()) s.observed[n.id] = value(rng);
  for (const auto& e : g.edges()) s.inferred[e] = value(rng);
  return s;
}

/// Direct transcription of the scoring equations: D = |Val(i,i) - Val(i,j)|,
/// W = e^{-kD}, T(i) = sum over edges i->j of (eps_j * alpha * C(j) + W), with
/// nodes scored in ascending id order and C(j) = T(j) once j has a score,
/// otherwise the prior c0.
inline std::map<trustconnect::NodeId, double> oracle_single_pass(const trustconnect::DependencyGraph& g,
                                                                 const trustconnect::Snapshot& s, double k,
                                                                 double alpha, double c0) {
  std::map<trustconnect::NodeId, double> eps;
  for (const auto& n : g.nodes()) eps[n.id] = n.epsilon;
  std::map<trustconnect::NodeId, double> scored;
  std::set<trustconnect::NodeId> ids;
  for (const auto& n : g.nodes()) ids.insert(n.id);
  for (auto i : ids) {
    double total = 0.0;
    for (const auto& e : g.edges()) {
      if (e.from != i) continue;
      const double d = std::fabs(s.observed.at(i) - s.inferred.at(e));
      const double w = std::exp(-k * d);
      const double c = scored.count(e.to) ? scored.at(e.to) : c0;
      total += eps.at(e.to) * alpha * c + w;
    }
    scored[i] = total;
  }
  return scored;
}

/// Fixed-point reading of the same equations, iterated naively.
inline std::map<trustconnect::NodeId, double> oracle_fixed_point(const trustconnect::DependencyGraph& g,
                                                                 const trustconnect::Snapshot& s, double k,
                                                                 double alpha, double c0, int iterations) {
  std::map<trustconnect::NodeId, double> current;
  for (const auto& n : g.nodes()) current[n.id] = c0;
  for (int it = 0; it < iterations; ++it) {
    std::map<trustconnect::NodeId, double> next;
    for (const auto& n : g.nodes()) {
      double total = 0.0;
      for (const auto& e : g.edges()) {
        if (e.from != n.id) continue;
        const double d = std::fabs(s.observed.at(n.id) - s.inferred.at(e));
        total += g.node(e.to).epsilon * alpha * current.at(e.to) + std::exp(-k * d);
      }
      next[n.id] = total;
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace tc_test

#include <unistd.h>
inline long tc_test::ScratchDir::getpid_compat() { return static_cast<long>(::getpid()); }
