#pragma once

#include <vector>

#include "bitprobe/bit_table.hpp"

namespace bitprobe::classical {

// A classical query procedure: internal nodes probe one table location,
// leaves output the answer bit. Depth counts internal nodes on the longest
// root-to-leaf path.
struct DecisionTree {
  struct Node {
    int probe = -1;   // table location, -1 for leaves
    int leaf = -1;    // output bit, -1 for internal nodes
    int child0 = -1;  // next node when the probed bit is 0
    int child1 = -1;  // next node when the probed bit is 1
  };

  std::vector<Node> nodes;
  int root = -1;

  static DecisionTree constant(int value);
  // probe location j, output leaf0 on 0, leaf1 on 1
  static DecisionTree single_probe(int j, int leaf0, int leaf1);

  bool empty() const { return root < 0; }
  int eval(TableReader& reader) const;
  int depth() const;
  // checks probe locations against table size s and tree well-formedness
  void validate(int s) const;
};

}  // namespace bitprobe::classical
