#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "schemaforge/fca.hpp"

namespace schemaforge {

/// Exact property-sharing partition over a selection of etypes.
/// Mask bit i refers to selected[i]; every property held by at least one
/// selected etype lands in exactly one region.
struct RegionTable {
  std::vector<std::string> selected;
  std::map<std::uint32_t, std::vector<std::string>> regions;  // mask -> properties

  std::size_t count(std::uint32_t mask) const;
};

constexpr std::size_t kMaxRegionEtypes = 16;
constexpr std::size_t kMaxLotusEtypes = 6;

RegionTable compute_regions(const FormalContext& ctx, const std::vector<std::string>& selected);

struct VisRegion {
  std::vector<std::string> members;
  std::size_t count = 0;
  std::vector<std::string> properties;
};

struct VisDocument {
  std::string variant;  // "lotus" or "upset"
  std::vector<std::string> etypes;
  std::map<std::string, std::size_t> set_sizes;
  std::vector<VisRegion> regions;
};

VisDocument lotus_data(const RegionTable& regions);
VisDocument upset_data(const RegionTable& regions);

std::string vis_to_json(const VisDocument& vis);
VisDocument vis_from_json(const std::string& text);

std::string render_svg(const VisDocument& vis);

}  // namespace schemaforge
