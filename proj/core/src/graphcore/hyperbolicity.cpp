#include "shgcn/graphcore/hyperbolicity.hpp"

#include <algorithm>
#include <cstdint>
#include <future>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "shgcn/error.hpp"

namespace shgcn::graphcore {
namespace {

using Dist = std::int32_t;

// Twice delta restricted to tuples whose smallest index is in {first, first + stride, ...}.
Dist scan(const std::vector<Dist>& d, std::size_t n, std::size_t first, std::size_t stride) {
  Dist best = 0;
  for (std::size_t i = first; i < n; i += stride) {
    const Dist* di = d.data() + i * n;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Dist* dj = d.data() + j * n;
      const Dist dij = di[j];
      for (std::size_t k = j + 1; k < n; ++k) {
        const Dist* dk = d.data() + k * n;
        const Dist dik = di[k];
        const Dist djk = dj[k];
        Dist local = 0;
        for (std::size_t l = k + 1; l < n; ++l) {
          const Dist s1 = dij + dk[l];
          const Dist s2 = dik + dj[l];
          const Dist s3 = djk + di[l];
          const Dist hi = std::max(s1, std::max(s2, s3));
          const Dist lo = std::min(s1, std::min(s2, s3));
          const Dist mid = s1 + s2 + s3 - hi - lo;
          local = std::max(local, hi - mid);
        }
        best = std::max(best, local);
      }
    }
  }
  return best;
}

}  // namespace

double delta_hyperbolicity(const Graph& g, const HyperbolicityOptions& options) {
  const std::size_t n = g.num_nodes();
  if (n > options.max_nodes) {
    throw CapacityError("delta_hyperbolicity: " + std::to_string(n) + " nodes exceeds the cap of " +
                        std::to_string(options.max_nodes) + " (exact computation is quartic in n)");
  }
  if (!g.connected()) throw ContractError("delta_hyperbolicity: graph is disconnected");
  if (n < 4) return 0.0;

  std::vector<Dist> d(n * n);
  for (NodeId s = 0; s < n; ++s) {
    const auto row = bfs_distances(g, s);
    for (std::size_t t = 0; t < n; ++t) d[s * n + t] = static_cast<Dist>(row[t]);
  }

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  Dist best = 0;
  if (threads <= 1) {
    best = scan(d, n, 0, 1);
  } else {
    // Interleaved rows balance the triangular workload.
    std::vector<std::future<Dist>> parts;
    for (unsigned t = 0; t < threads; ++t) parts.push_back(std::async(std::launch::async, scan, std::cref(d), n, t, threads));
    for (auto& p : parts) best = std::max(best, p.get());
  }
  return static_cast<double>(best) / 2.0;
}

}  // namespace shgcn::graphcore
