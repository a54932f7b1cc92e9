#include "schemaforge/intersections.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "schemaforge/errors.hpp"

namespace schemaforge {

namespace {

std::string short_label(const std::string& full_iri) {
  std::size_t cut = full_iri.find_last_of("#/");
  if (cut == std::string::npos || cut + 1 >= full_iri.size()) return full_iri;
  return full_iri.substr(cut + 1);
}

void append_xml_escaped(std::string& out, const std::string& text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void validate_vis(const VisDocument& vis) {
  if (vis.variant != "lotus" && vis.variant != "upset") {
    throw MalformedVisError("unknown VIS variant: " + vis.variant);
  }
  std::vector<std::string> known = vis.etypes;
  std::sort(known.begin(), known.end());
  for (const VisRegion& r : vis.regions) {
    if (r.members.empty()) throw MalformedVisError("VIS region with no members");
    for (const std::string& m : r.members) {
      if (!std::binary_search(known.begin(), known.end(), m)) {
        throw MalformedVisError("VIS region member not in etypes: " + m);
      }
    }
    if (!r.properties.empty() && r.properties.size() != r.count) {
      throw MalformedVisError("VIS region count disagrees with its property list");
    }
  }
}

}  // namespace

std::size_t RegionTable::count(std::uint32_t mask) const {
  auto it = regions.find(mask);
  return it == regions.end() ? 0 : it->second.size();
}

RegionTable compute_regions(const FormalContext& ctx, const std::vector<std::string>& selected) {
  if (selected.size() < 2) {
    throw std::invalid_argument("region computation needs at least 2 etypes");
  }
  if (selected.size() > kMaxRegionEtypes) {
    throw TooManyEtypesError("region computation capped at " +
                             std::to_string(kMaxRegionEtypes) + " etypes");
  }

  std::vector<std::size_t> rows;
  for (const std::string& e : selected) {
    auto it = std::find(ctx.row_labels.begin(), ctx.row_labels.end(), e);
    if (it == ctx.row_labels.end()) throw UnknownEtypeError("unknown entity type: " + e);
    rows.push_back(static_cast<std::size_t>(it - ctx.row_labels.begin()));
  }

  RegionTable table;
  table.selected = selected;
  std::uint32_t full = (1u << selected.size()) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) table.regions[mask];

  for (std::size_t j = 0; j < ctx.col_labels.size(); ++j) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (ctx.cells[rows[i]][j]) mask |= 1u << i;
    }
    if (mask != 0) table.regions[mask].push_back(ctx.col_labels[j]);
  }
  return table;
}

VisDocument lotus_data(const RegionTable& table) {
  if (table.selected.size() > kMaxLotusEtypes) {
    throw TooManyEtypesError("knowledge lotus capped at " +
                             std::to_string(kMaxLotusEtypes) + " etypes");
  }
  VisDocument vis;
  vis.variant = "lotus";
  vis.etypes = table.selected;
  for (std::size_t i = 0; i < table.selected.size(); ++i) {
    std::size_t total = 0;
    for (const auto& [mask, props] : table.regions) {
      if (mask & (1u << i)) total += props.size();
    }
    vis.set_sizes[table.selected[i]] = total;
  }
  // Petals (singleton masks) always appear, even when empty; shared
  // regions appear only when inhabited. Ordered by arity, then mask.
  std::vector<std::uint32_t> masks;
  for (const auto& [mask, props] : table.regions) {
    if (std::popcount(mask) == 1 || !props.empty()) masks.push_back(mask);
  }
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
    return a < b;
  });
  for (std::uint32_t mask : masks) {
    VisRegion region;
    for (std::size_t i = 0; i < table.selected.size(); ++i) {
      if (mask & (1u << i)) region.members.push_back(table.selected[i]);
    }
    region.properties = table.regions.at(mask);
    region.count = region.properties.size();
    vis.regions.push_back(std::move(region));
  }
  return vis;
}

VisDocument upset_data(const RegionTable& table) {
  VisDocument vis;
  vis.variant = "upset";
  vis.etypes = table.selected;
  for (std::size_t i = 0; i < table.selected.size(); ++i) {
    std::size_t total = 0;
    for (const auto& [mask, props] : table.regions) {
      if (mask & (1u << i)) total += props.size();
    }
    vis.set_sizes[table.selected[i]] = total;
  }
  std::vector<std::uint32_t> masks;
  for (const auto& [mask, props] : table.regions) {
    if (!props.empty()) masks.push_back(mask);
  }
  std::sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    std::size_t ca = table.regions.at(a).size();
    std::size_t cb = table.regions.at(b).size();
    if (ca != cb) return ca > cb;
    return a > b;
  });
  for (std::uint32_t mask : masks) {
    VisRegion region;
    for (std::size_t i = 0; i < table.selected.size(); ++i) {
      if (mask & (1u << i)) region.members.push_back(table.selected[i]);
    }
    region.properties = table.regions.at(mask);
    region.count = region.properties.size();
    vis.regions.push_back(std::move(region));
  }
  return vis;
}

std::string vis_to_json(const VisDocument& vis) {
  nlohmann::ordered_json j;
  j["variant"] = vis.variant;
  j["etypes"] = vis.etypes;
  nlohmann::ordered_json sizes = nlohmann::ordered_json::object();
  for (const std::string& e : vis.etypes) {
    auto it = vis.set_sizes.find(e);
    sizes[e] = it == vis.set_sizes.end() ? 0 : it->second;
  }
  j["set_sizes"] = sizes;
  j["regions"] = nlohmann::ordered_json::array();
  for (const VisRegion& r : vis.regions) {
    nlohmann::ordered_json jr;
    jr["members"] = r.members;
    jr["count"] = r.count;
    jr["properties"] = r.properties;
    j["regions"].push_back(std::move(jr));
  }
  return j.dump(2) + "\n";
}

VisDocument vis_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedVisError(std::string("VIS document is not valid JSON: ") + e.what());
  }
  VisDocument vis;
  try {
    vis.variant = j.at("variant").get<std::string>();
    vis.etypes = j.at("etypes").get<std::vector<std::string>>();
    for (const auto& [key, value] : j.at("set_sizes").items()) {
      vis.set_sizes[key] = value.get<std::size_t>();
    }
    for (const auto& jr : j.at("regions")) {
      VisRegion r;
      r.members = jr.at("members").get<std::vector<std::string>>();
      r.count = jr.at("count").get<std::size_t>();
      if (jr.contains("properties")) {
        r.properties = jr.at("properties").get<std::vector<std::string>>();
      }
      vis.regions.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedVisError(std::string("VIS document field error: ") + e.what());
  }
  validate_vis(vis);
  return vis;
}

std::string render_svg(const VisDocument& vis) {
  validate_vis(vis);

  const double width = 960.0;
  const double bar_budget = 260.0;
  std::size_t max_count = 1;
  for (const VisRegion& r : vis.regions) max_count = std::max(max_count, r.count);
  for (const auto& [e, n] : vis.set_sizes) max_count = std::max(max_count, n);
  double scale = bar_budget / static_cast<double>(max_count);

  std::string svg;
  auto text_at = [&](double x, double y, const std::string& cls, const std::string& s) {
    svg += "  <text class=\"" + cls + "\" x=\"" + fixed2(x) + "\" y=\"" + fixed2(y) + "\">";
    append_xml_escaped(svg, s);
    svg += "</text>\n";
  };

  if (vis.variant == "lotus") {
    const double cx = width / 2.0, cy = 300.0;
    double height = 620.0 + 18.0 * static_cast<double>(vis.regions.size());
    svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed2(width) +
          "\" height=\"" + fixed2(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "  <line class=\"axis\" x1=\"40\" y1=\"560\" x2=\"" + fixed2(width - 40.0) +
           "\" y2=\"560\" stroke=\"black\"/>\n";
    svg += "  <line class=\"axis\" x1=\"40\" y1=\"40\" x2=\"40\" y2=\"560\" stroke=\"black\"/>\n";
    std::size_t k = vis.etypes.size();
    for (std::size_t i = 0; i < k; ++i) {
      double angle = k == 0 ? 0.0 : 360.0 * static_cast<double>(i) / static_cast<double>(k);
      svg += "  <ellipse class=\"petal\" cx=\"" + fixed2(cx) + "\" cy=\"" + fixed2(cy - 90.0) +
             "\" rx=\"60\" ry=\"120\" fill=\"none\" stroke=\"black\" transform=\"rotate(" +
             fixed2(angle) + " " + fixed2(cx) + " " + fixed2(cy) + ")\"/>\n";
      std::size_t petal_count = 0;
      for (const VisRegion& r : vis.regions) {
        if (r.members.size() == 1 && r.members[0] == vis.etypes[i]) petal_count = r.count;
      }
      auto size_it = vis.set_sizes.find(vis.etypes[i]);
      std::size_t set_size = size_it == vis.set_sizes.end() ? 0 : size_it->second;
      text_at(60.0, 600.0 + 18.0 * static_cast<double>(i), "petal-label",
              short_label(vis.etypes[i]) + ": exclusive " + std::to_string(petal_count) +
                  ", total " + std::to_string(set_size));
    }
    double y = 600.0 + 18.0 * static_cast<double>(k) + 10.0;
    for (const VisRegion& r : vis.regions) {
      if (r.members.size() < 2) continue;
      std::string label;
      for (const std::string& m : r.members) {
        if (!label.empty()) label += " + ";
        label += short_label(m);
      }
      text_at(60.0, y, "shared-label", label + ": " + std::to_string(r.count));
      y += 18.0;
    }
    svg += "</svg>\n";
    return svg;
  }

  // upset
  const double matrix_left = 340.0, matrix_top = 340.0, cell = 26.0;
  double height = matrix_top + cell * static_cast<double>(vis.etypes.size()) + 60.0;
  svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed2(width) + "\" height=\"" +
        fixed2(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "  <line class=\"axis\" x1=\"" + fixed2(matrix_left - 10.0) + "\" y1=\"" +
         fixed2(matrix_top - 10.0) + "\" x2=\"" + fixed2(width - 20.0) + "\" y2=\"" +
         fixed2(matrix_top - 10.0) + "\" stroke=\"black\"/>\n";
  svg += "  <line class=\"axis\" x1=\"" + fixed2(matrix_left - 10.0) + "\" y1=\"30\" x2=\"" +
         fixed2(matrix_left - 10.0) + "\" y2=\"" + fixed2(matrix_top - 10.0) +
         "\" stroke=\"black\"/>\n";

  for (std::size_t i = 0; i < vis.etypes.size(); ++i) {
    double y = matrix_top + cell * static_cast<double>(i);
    auto it = vis.set_sizes.find(vis.etypes[i]);
    std::size_t n = it == vis.set_sizes.end() ? 0 : it->second;
    double w = scale * static_cast<double>(n);
    svg += "  <rect class=\"set-size-bar\" x=\"" + fixed2(300.0 - w) + "\" y=\"" +
           fixed2(y + 4.0) + "\" width=\"" + fixed2(w) + "\" height=\"" + fixed2(cell - 8.0) +
           "\" fill=\"steelblue\"/>\n";
    text_at(16.0, y + cell - 8.0, "set-label",
            short_label(vis.etypes[i]) + " (" + std::to_string(n) + ")");
  }

  for (std::size_t r = 0; r < vis.regions.size(); ++r) {
    const VisRegion& region = vis.regions[r];
    double x = matrix_left + cell * static_cast<double>(r);
    double h = scale * static_cast<double>(region.count);
    svg += "  <rect class=\"intersection-bar\" x=\"" + fixed2(x + 4.0) + "\" y=\"" +
           fixed2(matrix_top - 20.0 - h) + "\" width=\"" + fixed2(cell - 8.0) + "\" height=\"" +
           fixed2(h) + "\" fill=\"dimgray\"/>\n";
    text_at(x + 6.0, matrix_top - 24.0 - h, "count-label", std::to_string(region.count));
    for (std::size_t i = 0; i < vis.etypes.size(); ++i) {
      bool member = std::find(region.members.begin(), region.members.end(), vis.etypes[i]) !=
                    region.members.end();
      double cyd = matrix_top + cell * static_cast<double>(i) + cell / 2.0;
      svg += "  <circle class=\"dot\" cx=\"" + fixed2(x + cell / 2.0) + "\" cy=\"" + fixed2(cyd) +
             "\" r=\"6\" fill=\"" + (member ? std::string("black") : std::string("lightgray")) +
             "\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace schemaforge
