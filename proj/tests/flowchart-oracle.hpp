#ifndef BLEND_TESTS_FLOWCHART_ORACLE_HPP
#define BLEND_TESTS_FLOWCHART_ORACLE_HPP

// Brute-force replay of the sender encode and receiver decode pipelines as
// straight-line state updates, independent of BlendLinkService (no tables,
// no packets). Used as the oracle for the flow-balance properties.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

struct Result {
  std::vector<uint64_t> emitted;                          // receiver output seqs, in order
  std::vector<std::pair<uint64_t, uint64_t>> bundles;     // (SS, ES) per transmitted frame
};

/** Feed fresh sequences 1..n through the two flowcharts.
 *  cwnds[seq-1] is the tagged congestion window for each fresh sequence
 *  (any tail rule must already be applied by the caller).
 *  dropBundle, when nonzero, loses the k-th transmitted bundle on the wire.
 */
inline Result
replay(uint64_t n, uint32_t bi, const std::vector<uint32_t>& cwnds, size_t dropBundle = 0)
{
  int64_t lss = 1 - int64_t(bi); // admit seq 1 at once
  uint64_t pes = 0;
  Result res;
  size_t frameNo = 0;

  for (uint64_t seq = 1; seq <= n; ++seq) {
    uint32_t cwnd = cwnds[seq - 1] == 0 ? 1 : cwnds[seq - 1];

    // sender gate: a previous bundle already covers this seq
    if (int64_t(seq) < lss + int64_t(bi)) {
      continue;
    }
    uint64_t ss = uint64_t(lss + int64_t(bi));
    uint64_t es = ss + std::min<uint64_t>(cwnd, bi) - 1;
    lss = int64_t(ss);
    res.bundles.emplace_back(ss, es);

    if (++frameNo == dropBundle) {
      continue; // lost in flight
    }

    // receiver
    uint64_t dss = 0;
    uint64_t des = 0;
    if (ss == es) {
      dss = des = ss; // RTx-shaped: decode alone, no state update
    }
    else if (es <= pes) {
      continue; // previously decoded
    }
    else {
      dss = pes + 1;
      des = es;
      pes = es;
    }
    for (uint64_t s = dss; s <= des; ++s) {
      res.emitted.push_back(s);
    }
  }
  return res;
}

} // namespace oracle

#endif // BLEND_TESTS_FLOWCHART_ORACLE_HPP
