#pragma once

#include <cassert>
#include <unordered_map>

#include "payda/model.hpp"

namespace payda {

// Wired-lab link model: every UE reports top channel quality, so RBs map
// linearly to transport bits. The per-UE override table allows unequal
// channels without structural change; defaults keep all UEs identical.
struct LinkModel {
  int cqi = 15;  // reporting only
  Bits bits_per_rb_per_tti = 732;
  std::unordered_map<int, Bits> ue_override;  // ue_id -> bits per RB

  static LinkModel from_cell(const CellConfig& cell) {
    LinkModel link;
    link.bits_per_rb_per_tti = cell.bits_per_rb_per_tti;
    return link;
  }

  Bits bits_per_rb(int ue_id) const {
    auto it = ue_override.find(ue_id);
    return it == ue_override.end() ? bits_per_rb_per_tti : it->second;
  }

  // Transport block size for a grant of rbs resource blocks in one TTI.
  Bits tbs(int rbs, int ue_id) const {
    assert(rbs >= 0);
    return static_cast<Bits>(rbs) * bits_per_rb(ue_id);
  }
};

}  // namespace payda
