#include "bitprobe/decision_tree.hpp"

#include <stdexcept>

namespace bitprobe::classical {

DecisionTree DecisionTree::constant(int value) {
  DecisionTree t;
  t.nodes.push_back({-1, value, -1, -1});
  t.root = 0;
  return t;
}

DecisionTree DecisionTree::single_probe(int j, int leaf0, int leaf1) {
  DecisionTree t;
  t.nodes.push_back({-1, leaf0, -1, -1});
  t.nodes.push_back({-1, leaf1, -1, -1});
  t.nodes.push_back({j, -1, 0, 1});
  t.root = 2;
  return t;
}

int DecisionTree::eval(TableReader& reader) const {
  int at = root;
  while (true) {
    const Node& node = nodes.at(static_cast<size_t>(at));
    if (node.probe < 0) return node.leaf;
    at = reader.get(static_cast<size_t>(node.probe)) ? node.child1 : node.child0;
  }
}

namespace {
int depth_below(const DecisionTree& t, int at) {
  const auto& node = t.nodes.at(static_cast<size_t>(at));
  if (node.probe < 0) return 0;
  return 1 + std::max(depth_below(t, node.child0), depth_below(t, node.child1));
}
}  // namespace

int DecisionTree::depth() const {
  if (root < 0) throw std::logic_error("DecisionTree::depth: empty tree");
  return depth_below(*this, root);
}

void DecisionTree::validate(int s) const {
  if (root < 0 || root >= static_cast<int>(nodes.size()))
    throw std::invalid_argument("DecisionTree: bad root");
  for (const Node& node : nodes) {
    if (node.probe >= 0) {
      if (node.probe >= s) throw std::invalid_argument("DecisionTree: probe location out of range");
      if (node.child0 < 0 || node.child0 >= static_cast<int>(nodes.size()) || node.child1 < 0 ||
          node.child1 >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("DecisionTree: bad child index");
    } else if (node.leaf != 0 && node.leaf != 1) {
      throw std::invalid_argument("DecisionTree: leaf value must be 0 or 1");
    }
  }
}

}  // namespace bitprobe::classical
