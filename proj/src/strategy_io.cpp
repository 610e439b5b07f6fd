#include "seqbell/strategy_io.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace seqbell {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) throw SchemaError(where + ": unknown field '" + key + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + ": expected a number");
  return v.get<double>();
}

std::array<double, 2> angle_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw SchemaError(where + ": expected two angles");
  return {number(v[0], where), number(v[1], where)};
}

json state_to_json(const StateSpec& spec) {
  struct Visitor {
    json operator()(MaximallyEntangled) const { return {{"kind", "maximally_entangled"}}; }
    json operator()(PartiallyEntangled p) const { return {{"kind", "partial"}, {"parameter", p.ent_angle}}; }
    json operator()(Isotropic i) const { return {{"kind", "isotropic"}, {"parameter", i.visibility}}; }
  };
  return std::visit(Visitor{}, spec);
}

StateSpec state_from_json(const json& v) {
  const std::string where = "state";
  reject_unknown(v, {"kind", "parameter"}, where);
  const auto& kind = require(v, "kind", where);
  if (!kind.is_string()) throw SchemaError(where + ": kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "maximally_entangled") {
    if (v.contains("parameter")) throw SchemaError(where + ": maximally_entangled takes no parameter");
    return MaximallyEntangled{};
  }
  if (k == "partial") return PartiallyEntangled{number(require(v, "parameter", where), where)};
  if (k == "isotropic") return Isotropic{number(require(v, "parameter", where), where)};
  throw SchemaError(where + ": unknown kind '" + k + "'");
}

const char* rank_name(RankClass r) {
  switch (r) {
    case RankClass::basis:
      return "basis";
    case RankClass::trivial_zero:
      return "trivial_zero";
    case RankClass::trivial_one:
      return "trivial_one";
  }
  return "?";
}

json setting_to_json(const InstrumentSetting& s) {
  json out = {{"rank", rank_name(s.rank)}};
  if (s.rank == RankClass::basis) out["angle"] = s.angle;
  json us = json::array();
  for (const auto& u : s.unitaries) {
    us.push_back({{"axis", {u.axis(0), u.axis(1), u.axis(2)}}, {"angle", u.angle}});
  }
  out["unitaries"] = us;
  return out;
}

InstrumentSetting setting_from_json(const json& v, const std::string& where) {
  reject_unknown(v, {"rank", "angle", "unitaries"}, where);
  const auto& rank = require(v, "rank", where);
  if (!rank.is_string()) throw SchemaError(where + ": rank must be a string");
  InstrumentSetting s;
  const auto r = rank.get<std::string>();
  if (r == "basis") {
    s.rank = RankClass::basis;
    s.angle = number(require(v, "angle", where), where + ".angle");
  } else if (r == "trivial_zero" || r == "trivial_one") {
    s.rank = r == "trivial_zero" ? RankClass::trivial_zero : RankClass::trivial_one;
    if (v.contains("angle")) throw SchemaError(where + ": trivial settings take no angle");
  } else {
    throw SchemaError(where + ": unknown rank '" + r + "'");
  }
  if (v.contains("unitaries")) {
    const auto& us = v.at("unitaries");
    if (!us.is_array() || us.size() != 2) throw SchemaError(where + ": unitaries must list two outcomes");
    for (std::size_t b = 0; b < 2; ++b) {
      const std::string uw = where + ".unitaries[" + std::to_string(b) + "]";
      reject_unknown(us[b], {"axis", "angle"}, uw);
      Rotation rot;
      rot.angle = number(require(us[b], "angle", uw), uw);
      if (us[b].contains("axis")) {
        const auto& ax = us[b].at("axis");
        if (!ax.is_array() || ax.size() != 3) throw SchemaError(uw + ": axis must have three components");
        rot.axis = Eigen::Vector3d(number(ax[0], uw), number(ax[1], uw), number(ax[2], uw));
      }
      s.unitaries[b] = rot;
    }
  }
  return s;
}

}  // namespace

std::string strategy_to_json(const SequentialStrategy& strategy, int indent) {
  const auto& first = strategy.branches().front().branch.initial_state;
  json branches = json::array();
  for (const auto& wb : strategy.branches()) {
    if (wb.branch.initial_state.index() != first.index() ||
        state_to_json(wb.branch.initial_state) != state_to_json(first)) {
      throw std::invalid_argument("strategy_to_json: branches must share one initial state");
    }
    json instruments = json::array();
    for (const auto& inst : wb.branch.instruments) {
      instruments.push_back({setting_to_json(inst.setting(0)), setting_to_json(inst.setting(1))});
    }
    branches.push_back({{"weight", wb.weight},
                        {"a_angles", {wb.branch.a_observables[0].angle(), wb.branch.a_observables[1].angle()}},
                        {"instruments", instruments},
                        {"final_angles",
                         {wb.branch.final_observables[0].angle(), wb.branch.final_observables[1].angle()}}});
  }
  const json doc = {{"state", state_to_json(first)}, {"branches", branches}};
  return doc.dump(indent);
}

SequentialStrategy strategy_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, {"state", "branches"}, "document");
  const StateSpec state = state_from_json(require(doc, "state", "document"));
  const auto& branches = require(doc, "branches", "document");
  if (!branches.is_array() || branches.empty()) throw SchemaError("branches: expected a non-empty array");

  std::vector<WeightedBranch> parsed;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string where = "branches[" + std::to_string(i) + "]";
    const auto& b = branches[i];
    reject_unknown(b, {"weight", "a_angles", "instruments", "final_angles"}, where);
    DeterministicBranch branch;
    branch.initial_state = state;
    const auto a = angle_pair(require(b, "a_angles", where), where + ".a_angles");
    const auto f = angle_pair(require(b, "final_angles", where), where + ".final_angles");
    branch.a_observables = observable_pair(a[0], a[1]);
    branch.final_observables = observable_pair(f[0], f[1]);
    const auto& insts = require(b, "instruments", where);
    if (!insts.is_array()) throw SchemaError(where + ".instruments: expected an array");
    for (std::size_t k = 0; k < insts.size(); ++k) {
      const std::string iw = where + ".instruments[" + std::to_string(k) + "]";
      if (!insts[k].is_array() || insts[k].size() != 2) throw SchemaError(iw + ": expected two settings");
      branch.instruments.emplace_back(setting_from_json(insts[k][0], iw + "[0]"),
                                      setting_from_json(insts[k][1], iw + "[1]"));
    }
    parsed.push_back({number(require(b, "weight", where), where + ".weight"), std::move(branch)});
  }
  return SequentialStrategy(std::move(parsed));
}

SequentialStrategy load_strategy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return strategy_from_json(buf.str());
}

void save_strategy(const SequentialStrategy& strategy, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << strategy_to_json(strategy) << '\n';
}

}  // namespace seqbell
