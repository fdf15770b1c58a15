// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#include "treehash/codec.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "treehash/topology.hpp"
#include "treehash/treemode.hpp"

namespace treehash {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8(const char* what) {
    if (pos_ >= bytes_.size()) throw ParseError(std::string("truncated ") + what, pos_);
    return bytes_[pos_++];
  }
  std::uint32_t u32(const char* what) {
    if (pos_ + 4 > bytes_.size()) throw ParseError(std::string("truncated ") + what, pos_);
    std::uint32_t v = bytes_[pos_] | bytes_[pos_ + 1] << 8 | bytes_[pos_ + 2] << 16 |
                      static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24;
    pos_ += 4;
    return v;
  }
  std::span<const std::uint8_t> raw(std::size_t count, const char* what) {
    if (pos_ + count > bytes_.size()) throw ParseError(std::string("truncated ") + what, pos_);
    auto out = bytes_.subspan(pos_, count);
    pos_ += count;
    return out;
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

constexpr std::uint8_t kMagic[4] = {'F', 'T', 'R', 'E'};

struct DerivedLevel {
  std::vector<std::uint32_t> nodes;  // left to right
};

// Tree layout recomputed from the pointers alone: depth-ordered levels with
// left-to-right node order, ignoring the stored level/index fields.
struct Layout {
  std::vector<DerivedLevel> levels;          // levels[0] holds the root
  std::vector<std::uint32_t> parent;         // id -> parent id (root: itself)
  std::vector<std::uint32_t> pos_in_parent;  // id -> child slot
  std::vector<std::uint64_t> blocks;         // id -> payload block count (0 if invalid)
};

Layout derive_layout(const FInputTree& tree, unsigned block_bits) {
  Layout layout;
  std::size_t count = tree.nodes.size();
  layout.parent.assign(count, tree.root);
  layout.pos_in_parent.assign(count, 0);
  layout.blocks.assign(count, 0);
  for (std::size_t id = 0; id < count; ++id) {
    const BitString& p = tree.nodes[id].payload;
    if (!p.empty() && p.size() % block_bits == 0)
      layout.blocks[id] = p.size() / block_bits;
  }
  std::vector<std::uint32_t> frontier = {tree.root};
  while (!frontier.empty()) {
    layout.levels.push_back({frontier});
    std::vector<std::uint32_t> next;
    for (std::uint32_t id : frontier) {
      const auto& children = tree.nodes[id].children;
      for (std::size_t slot = 0; slot < children.size(); ++slot) {
        layout.parent[children[slot]] = id;
        layout.pos_in_parent[children[slot]] = static_cast<std::uint32_t>(slot);
        next.push_back(children[slot]);
      }
    }
    frontier = std::move(next);
  }
  return layout;
}

// Rightmost in the complete tree: matched to the last chaining value of its
// parent at every hop up to the root. Present children are assumed to occupy
// the leading chaining-value slots of their parent.
bool rightmost_in_complete(const Layout& layout, const FInputTree& tree,
                           std::uint32_t id) {
  while (id != tree.root) {
    std::uint32_t up = layout.parent[id];
    if (layout.blocks[up] == 0) return false;
    if (layout.pos_in_parent[id] + 1 != layout.blocks[up]) return false;
    id = up;
  }
  return true;
}

std::vector<int> expected_arities(std::uint64_t l) {
  if (l >= 2) return optimal_plan(l).arities;
  return {1};
}

// The honest shape for a message of l padded blocks: per-level node counts,
// node widths and kinds of the truncated tree, base level last.
struct ExpectedLevel {
  std::uint64_t count;
  int arity;
  std::uint64_t last_width;
  NodeKind kind;
};

std::vector<ExpectedLevel> expected_shape(std::uint64_t l) {
  std::vector<int> arities = expected_arities(l);
  int h = static_cast<int>(arities.size());
  std::vector<ExpectedLevel> shape;
  std::uint64_t cur = l;
  for (int k = 1; k <= h; ++k) {
    ExpectedLevel lvl;
    lvl.arity = arities[k - 1];
    lvl.count = ceil_div(cur, static_cast<std::uint64_t>(lvl.arity));
    lvl.last_width = cur - static_cast<std::uint64_t>(lvl.arity) * (lvl.count - 1);
    lvl.kind = h == 1 ? NodeKind::SingleNode
               : k == 1 ? NodeKind::BaseLevel
               : k == h ? NodeKind::Final
                        : NodeKind::Inner;
    shape.push_back(lvl);
    cur = lvl.count;
  }
  std::reverse(shape.begin(), shape.end());  // root first, like derived levels
  return shape;
}

Verdict phase2_c0(const FInputTree& tree, const Layout& layout) {
  auto message = a_message(tree);
  if (!message) return {Compliance::Incompliant, DecodeState::C0, "pad"};
  std::uint64_t l = (message->size() + 1 + tree.block_bits - 1) / tree.block_bits;
  std::vector<ExpectedLevel> shape = expected_shape(l);
  if (shape.size() != layout.levels.size())
    return {Compliance::Incompliant, DecodeState::C0, "topology"};
  for (std::size_t r = 0; r < shape.size(); ++r) {
    const ExpectedLevel& want = shape[r];
    const auto& level = layout.levels[r].nodes;
    if (level.size() != want.count)
      return {Compliance::Incompliant, DecodeState::C0, "topology"};
    bool base = r + 1 == shape.size();
    for (std::size_t j = 0; j < level.size(); ++j) {
      const FInput& node = tree.nodes[level[j]];
      std::uint64_t want_width = j + 1 == level.size()
                                     ? want.last_width
                                     : static_cast<std::uint64_t>(want.arity);
      if (node.kind != want.kind) return {Compliance::Incompliant, DecodeState::C0, "topology"};
      if (layout.blocks[level[j]] != want_width)
        return {Compliance::Incompliant, DecodeState::C0, "topology"};
      std::size_t want_children = base ? 0 : static_cast<std::size_t>(want_width);
      if (node.children.size() != want_children)
        return {Compliance::Incompliant, DecodeState::C0, "topology"};
    }
  }
  return {Compliance::Compliant, DecodeState::C0, ""};
}

Verdict phase2_c3(const FInputTree& tree, const Layout& layout) {
  // A non-base code below an inner node is never producible.
  for (const FInput& node : tree.nodes) {
    if (node.kind != NodeKind::Inner) continue;
    for (std::uint32_t child : node.children) {
      NodeKind ck = tree.nodes[child].kind;
      if (ck == NodeKind::Final || ck == NodeKind::SingleNode)
        return {Compliance::Incompliant, DecodeState::C3, "R3"};
    }
  }

  // Per-level constraints, root level first: nodes that are provably not the
  // complete tree's rightmost pin the level arity exactly; a lone rightmost
  // node only bounds it from below.
  std::size_t height = layout.levels.size();
  std::vector<std::optional<std::uint64_t>> eq(height);
  std::vector<std::uint64_t> lower(height, 2);
  eq[0] = layout.blocks[tree.root];
  for (std::size_t r = 1; r < height; ++r) {
    for (std::uint32_t id : layout.levels[r].nodes) {
      std::uint64_t b = layout.blocks[id];
      if (rightmost_in_complete(layout, tree, id)) {
        lower[r] = std::max(lower[r], b);
      } else {
        if (eq[r] && *eq[r] != b)
          return {Compliance::Incompliant, DecodeState::C3, "topology"};
        eq[r] = b;
      }
    }
  }
  for (std::size_t r = 0; r < height; ++r) {
    if (eq[r] && (*eq[r] < 2 || *eq[r] > 5))
      return {Compliance::Incompliant, DecodeState::C3, "topology"};
    if (!eq[r] && lower[r] > 5)
      return {Compliance::Incompliant, DecodeState::C3, "topology"};
  }

  // Candidate arities are non-decreasing from the root down. Complete each
  // candidate virtually with maximal arities, count the blocks it covers and
  // test the count against the closed-form shape.
  std::vector<std::uint64_t> arity(height, 0);
  auto covered = [&](auto&& self, std::uint32_t id, std::size_t r) -> std::uint64_t {
    if (r + 1 == height) return layout.blocks[id];
    std::uint64_t max_below = 1;
    for (std::size_t rr = r + 1; rr < height; ++rr) max_below *= arity[rr];
    const auto& children = tree.nodes[id].children;
    std::uint64_t total = 0;
    for (std::uint32_t child : children) total += self(self, child, r + 1);
    std::uint64_t b = layout.blocks[id];
    if (children.size() < b) total += (b - children.size()) * max_below;
    return total;
  };
  auto try_assign = [&](auto&& self, std::size_t r, std::uint64_t floor_arity) -> bool {
    if (r == height) {
      std::uint64_t l = covered(covered, tree.root, 0);
      if (l < 2) return false;
      std::vector<int> want = expected_arities(l);
      if (want.size() != height) return false;
      for (std::size_t j = 0; j < height; ++j) {
        // want is base-first descending; arity is root-first ascending.
        if (static_cast<std::uint64_t>(want[j]) != arity[height - 1 - j]) return false;
      }
      return true;
    }
    std::uint64_t lo = std::max<std::uint64_t>(floor_arity, eq[r] ? *eq[r] : lower[r]);
    std::uint64_t hi = eq[r] ? *eq[r] : 5;
    for (std::uint64_t v = lo; v <= hi; ++v) {
      arity[r] = v;
      if (self(self, r + 1, v)) return true;
    }
    return false;
  };
  if (try_assign(try_assign, 0, 2))
    return {Compliance::FinalSubtreeCompliant, DecodeState::C3, ""};
  return {Compliance::Incompliant, DecodeState::C3, "topology"};
}

}  // namespace

const char* to_string(Compliance c) {
  switch (c) {
    case Compliance::Compliant: return "compliant";
    case Compliance::FinalSubtreeCompliant: return "final-subtree-compliant";
    case Compliance::Incompliant: return "incompliant";
  }
  return "?";
}

std::vector<std::uint8_t> serialize(const FInputTree& tree) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u32(out, 1);
  put_u32(out, tree.block_bits);
  put_u32(out, static_cast<std::uint32_t>(tree.nodes.size()));
  for (const FInput& node : tree.nodes) {
    put_u32(out, node.level);
    put_u32(out, node.index);
    out.push_back(static_cast<std::uint8_t>(node.kind));
    put_u32(out, static_cast<std::uint32_t>(node.payload.size()));
    const auto& bytes = node.payload.bytes();
    out.insert(out.end(), bytes.begin(), bytes.end());
    put_u32(out, static_cast<std::uint32_t>(node.children.size()));
    for (std::uint32_t child : node.children) put_u32(out, child);
  }
  return out;
}

FInputTree deserialize(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  auto magic = in.raw(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), kMagic))
    throw ParseError("bad magic", 0);
  std::uint32_t version = in.u32("version");
  if (version != 1) throw ParseError("unsupported version", 4);
  FInputTree tree;
  tree.block_bits = in.u32("block bits");
  if (tree.block_bits < 64 || tree.block_bits % 16 != 0)
    throw ParseError("bad block size", 8);
  std::uint32_t count = in.u32("node count");
  if (count == 0) throw ParseError("empty tree", 12);
  tree.nodes.reserve(count);
  for (std::uint32_t id = 0; id < count; ++id) {
    FInput node;
    node.level = in.u32("level");
    node.index = in.u32("index");
    std::uint8_t kind = in.u8("kind");
    if (kind > 3) throw ParseError("bad kind", in.pos() - 1);
    node.kind = static_cast<NodeKind>(kind);
    std::uint32_t payload_bits = in.u32("payload length");
    auto payload = in.raw((payload_bits + 7) / 8, "payload");
    node.payload = BitString::from_bytes(payload).slice(0, payload_bits);
    std::uint32_t child_count = in.u32("child count");
    for (std::uint32_t j = 0; j < child_count; ++j) {
      std::uint32_t child = in.u32("child id");
      if (child >= count) throw ParseError("dangling child id", in.pos() - 4);
      node.children.push_back(child);
    }
    tree.nodes.push_back(std::move(node));
  }
  if (!in.done()) throw ParseError("trailing bytes", in.pos());

  std::vector<int> parents(count, 0);
  for (const FInput& node : tree.nodes)
    for (std::uint32_t child : node.children) ++parents[child];
  std::uint32_t root = count;
  for (std::uint32_t id = 0; id < count; ++id) {
    if (parents[id] > 1) throw ParseError("node has several parents", 12);
    if (parents[id] == 0) {
      if (root != count) throw ParseError("several roots", 12);
      root = id;
    }
  }
  if (root == count) throw ParseError("no root", 12);
  tree.root = root;

  std::vector<char> seen(count, 0);
  std::deque<std::uint32_t> queue = {root};
  std::size_t reached = 0;
  while (!queue.empty()) {
    std::uint32_t id = queue.front();
    queue.pop_front();
    if (seen[id]) throw ParseError("cycle", 12);
    seen[id] = 1;
    ++reached;
    for (std::uint32_t child : tree.nodes[id].children) queue.push_back(child);
  }
  if (reached != count) throw ParseError("unreachable nodes", 12);
  return tree;
}

std::optional<BitString> a_message(const FInputTree& tree) {
  Layout layout = derive_layout(tree, tree.block_bits);
  BitString concatenated;
  for (std::uint32_t id : layout.levels.back().nodes)
    concatenated.append(tree.nodes[id].payload);
  return unpad10(concatenated);
}

Verdict a_decode(const FInputTree& tree) {
  unsigned n = tree.block_bits;
  Layout layout = derive_layout(tree, n);

  bool broken_r0 = false, broken_r1 = false, broken_r2 = false, broken_r3 = false;
  bool broken_ra = false, broken_rb = false, broken_rc = false;

  for (std::size_t id = 0; id < tree.nodes.size(); ++id)
    if (layout.blocks[id] == 0) broken_ra = true;

  NodeKind root_kind = tree.nodes[tree.root].kind;
  if (root_kind != NodeKind::Final && root_kind != NodeKind::SingleNode)
    broken_r0 = true;

  for (const FInput& node : tree.nodes) {
    bool leafish = node.kind == NodeKind::BaseLevel || node.kind == NodeKind::SingleNode;
    if (leafish && !node.children.empty()) broken_r2 = true;
    if (node.kind == NodeKind::Final) {
      if (node.children.empty()) broken_r1 = true;
      for (std::uint32_t child : node.children) {
        NodeKind ck = tree.nodes[child].kind;
        if (ck != NodeKind::BaseLevel && ck != NodeKind::Inner) broken_r1 = true;
      }
    }
    if (node.kind == NodeKind::Inner) {
      if (node.children.empty()) broken_r3 = true;
      for (std::uint32_t child : node.children) {
        NodeKind ck = tree.nodes[child].kind;
        if (ck != NodeKind::BaseLevel && ck != NodeKind::Inner) broken_r3 = true;
      }
    }
  }

  for (const DerivedLevel& level : layout.levels) {
    for (std::size_t j = 0; j + 1 < level.nodes.size(); ++j) {
      if (layout.blocks[level.nodes[j]] != layout.blocks[level.nodes[0]]) broken_rb = true;
      if (layout.blocks[level.nodes.back()] > layout.blocks[level.nodes[0]]) broken_rb = true;
      if (tree.nodes[level.nodes[j + 1]].kind != tree.nodes[level.nodes[0]].kind)
        broken_rc = true;
    }
  }

  DecodeState state;
  std::string rule;
  if (broken_r0 || broken_r2 || broken_ra || broken_rb || broken_rc) {
    state = DecodeState::C1;
    rule = broken_r0 ? "R0" : broken_r2 ? "R2" : broken_ra ? "RA" : broken_rb ? "RB" : "RC";
  } else if (broken_r1) {
    state = DecodeState::C2;
    rule = "R1";
  } else if (broken_r3) {
    state = DecodeState::C3;
    rule = "R3";
  } else {
    state = DecodeState::C0;
  }

  switch (state) {
    case DecodeState::C0:
      return phase2_c0(tree, layout);
    case DecodeState::C1:
      return {Compliance::Incompliant, DecodeState::C1, rule};
    case DecodeState::C2:
      if (tree.nodes.size() == 1) {
        std::uint64_t blocks = layout.blocks[tree.root];
        if (blocks >= 2 && blocks <= 4)
          return {Compliance::FinalSubtreeCompliant, DecodeState::C2, ""};
      }
      return {Compliance::Incompliant, DecodeState::C2, "R1"};
    case DecodeState::C3:
      return phase2_c3(tree, layout);
  }
  return {Compliance::Incompliant, DecodeState::C0, "unreachable"};
}

FInputTree cut_final_subtree(const FInputTree& tree, int levels,
                             std::uint64_t drop_tail) {
  Layout layout = derive_layout(tree, tree.block_bits);
  std::size_t height = layout.levels.size();
  if (levels < 0 || static_cast<std::size_t>(levels) >= height)
    throw std::invalid_argument("cannot cut that many levels");

  std::vector<char> keep(tree.nodes.size(), 0);
  std::size_t kept_height = height - static_cast<std::size_t>(levels);
  for (std::size_t r = 0; r < kept_height; ++r)
    for (std::uint32_t id : layout.levels[r].nodes) keep[id] = 1;
  const auto& bottom = layout.levels[kept_height - 1].nodes;
  if (drop_tail >= bottom.size() && kept_height > 1)
    throw std::invalid_argument("cannot drop the whole bottom level");
  for (std::uint64_t j = 0; j < drop_tail; ++j)
    keep[bottom[bottom.size() - 1 - j]] = 0;

  FInputTree out;
  out.block_bits = tree.block_bits;
  std::vector<std::uint32_t> remap(tree.nodes.size(), 0);
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    if (!keep[id]) continue;
    remap[id] = static_cast<std::uint32_t>(out.nodes.size());
    out.nodes.push_back(tree.nodes[id]);
    out.nodes.back().children.clear();
  }
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    if (!keep[id]) continue;
    for (std::uint32_t child : tree.nodes[id].children)
      if (keep[child]) out.nodes[remap[id]].children.push_back(remap[child]);
  }
  out.root = remap[tree.root];
  return out;
}

DualComplianceReport no_dual_compliance_probe(std::uint64_t l_min,
                                              std::uint64_t l_max,
                                              const HashParams& params) {
  DualComplianceReport report;
  unsigned n = params.block_bits;
  for (std::uint64_t l = l_min; l <= l_max; ++l) {
    // A message of exactly l padded blocks; contents drawn from the length.
    std::vector<std::uint8_t> message(l * n / 8 - 1);
    for (std::size_t j = 0; j < message.size(); ++j)
      message[j] = static_cast<std::uint8_t>(l * 131 + j * 17);
    FInputTree tree = emit_f_input_tree(make_tree_job(message, params));
    ++report.trees;
    if (a_decode(tree).compliance != Compliance::Compliant) ++report.violations;

    Layout layout = derive_layout(tree, n);
    std::size_t height = layout.levels.size();
    for (std::size_t cut = 0; cut < height; ++cut) {
      std::size_t bottom = layout.levels[height - 1 - cut].nodes.size();
      for (std::uint64_t drop = 0; drop < bottom; ++drop) {
        if (cut == 0 && drop == 0) continue;  // the full tree itself
        if (cut + 1 == height && drop > 0) break;
        FInputTree sub = cut_final_subtree(tree, static_cast<int>(cut), drop);
        ++report.subtrees;
        if (a_decode(sub).compliance == Compliance::Compliant) ++report.violations;
      }
    }
  }
  return report;
}

}  // namespace treehash
