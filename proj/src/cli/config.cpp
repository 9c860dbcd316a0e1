// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/cli/config.hpp"

#include "emsurf/cli/report.hpp"
#include "emsurf/mesh/msh.hpp"
#include "emsurf/postproc/polarization.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace emsurf {

using json = nlohmann::json;

namespace {

// Read-only view of a JSON value that remembers where it sits in the file.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Config, "config " + (path_.empty() ? std::string("/") : path_) + ": " + msg);
  }

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_->contains(key); }

  Node at(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    if (!j_->contains(key)) Node(*j_, path_ + "/" + key).fail("missing required field");
    return Node((*j_)[key], path_ + "/" + key);
  }
  std::optional<Node> opt(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    if (!j_->contains(key)) return std::nullopt;
    return Node((*j_)[key], path_ + "/" + key);
  }

  void only(const std::set<std::string>& keys) const {
    if (!j_->is_object()) fail("expected an object");
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!keys.count(it.key())) Node(it.value(), path_ + "/" + it.key()).fail("unknown field");
  }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }
  Node operator[](std::size_t i) const {
    if (!j_->is_array() || i >= j_->size()) fail("expected an array with more elements");
    return Node((*j_)[i], path_ + "/" + std::to_string(i));
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("expected a positive number");
    return v;
  }
  int integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<int>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  bool is_string() const { return j_->is_string(); }
  bool is_array() const { return j_->is_array(); }

  // A real number or a [re, im] pair.
  cdouble complex() const {
    if (j_->is_number()) return {number(), 0.0};
    if (j_->is_array() && j_->size() == 2) return {(*this)[0].number(), (*this)[1].number()};
    fail("expected a number or a [re, im] pair");
  }
  Vec3 vec3() const {
    if (!j_->is_array() || j_->size() != 3) fail("expected an array of three numbers");
    return {(*this)[0].number(), (*this)[1].number(), (*this)[2].number()};
  }
  CVec3 cvec3() const {
    if (!j_->is_array() || j_->size() != 3) fail("expected an array of three components");
    return {(*this)[0].complex(), (*this)[1].complex(), (*this)[2].complex()};
  }

 private:
  const json* j_;
  std::string path_;
};

PatchKind parse_kind(const Node& n) {
  const std::string s = n.string();
  if (s == "pec") return PatchKind::Pec;
  if (s == "dielectric") return PatchKind::Dielectric;
  if (s == "equivalent") return PatchKind::Equivalent;
  n.fail("expected one of pec, dielectric, equivalent");
}

CellInput parse_cell(const Node& n, const std::filesystem::path& base) {
  n.only({"name", "mesh", "scale", "regions", "tags", "box", "pitch"});
  CellInput c;
  c.name = n.at("name").string();
  c.spec.name = c.name;
  const Node mesh = n.at("mesh");
  c.mesh = mesh.string();
  if (c.mesh.is_relative()) c.mesh = base / c.mesh;
  if (!std::filesystem::exists(c.mesh)) mesh.fail("mesh file '" + c.mesh.string() + "' does not exist");
  if (auto s = n.opt("scale")) c.scale = s->positive();

  std::set<int> ids{kExteriorRegion};
  if (auto regions = n.opt("regions")) {
    for (std::size_t i = 0; i < regions->size(); ++i) {
      const Node r = (*regions)[i];
      r.only({"id", "eps_r"});
      Region reg;
      reg.id = r.at("id").integer();
      if (reg.id <= 0) r.at("id").fail("region ids must be positive; 0 is the exterior");
      if (!ids.insert(reg.id).second) r.at("id").fail("duplicate region id");
      reg.eps_r = r.at("eps_r").complex();
      if (reg.eps_r.real() <= 0.0 || reg.eps_r.imag() > 0.0)
        r.at("eps_r").fail("expected Re(eps_r) > 0 and Im(eps_r) <= 0");
      c.spec.regions.push_back(reg);
    }
  }
  const Node tags = n.at("tags");
  if (tags.size() == 0) tags.fail("at least one tag is required");
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Node t = tags[i];
    t.only({"tag", "kind", "plus", "minus"});
    TagSpec ts;
    ts.tag = t.at("tag").integer();
    ts.kind = parse_kind(t.at("kind"));
    ts.region_plus = t.at("plus").integer();
    ts.region_minus = t.opt("minus") ? t.at("minus").integer() : kExteriorRegion;
    if (!ids.count(ts.region_plus)) t.at("plus").fail("undefined region " + std::to_string(ts.region_plus));
    if (!ids.count(ts.region_minus)) t.at("minus").fail("undefined region " + std::to_string(ts.region_minus));
    c.spec.tags.push_back(ts);
  }
  if (auto box = n.opt("box")) {
    box->only({"lo", "hi"});
    Box b{box->at("lo").vec3(), box->at("hi").vec3()};
    if (!((b.hi - b.lo).minCoeff() > 0.0)) box->fail("hi must exceed lo on every axis");
    c.spec.box = b;
  }
  if (auto pitch = n.opt("pitch")) {
    if (pitch->size() != 2) pitch->fail("expected [pitch_x, pitch_y]");
    c.spec.pitch_x = (*pitch)[0].positive();
    c.spec.pitch_y = (*pitch)[1].positive();
  }
  return c;
}

void parse_layout(const Node& n, SceneConfig& cfg) {
  n.only({"mx", "my", "cells", "rotations", "rotation_rule", "rotation_symmetry_deg"});
  LayoutSpec& l = cfg.layout;
  l.mx = n.at("mx").integer();
  l.my = n.at("my").integer();
  if (l.mx < 1) n.at("mx").fail("expected a positive integer");
  if (l.my < 1) n.at("my").fail("expected a positive integer");
  const std::size_t count = static_cast<std::size_t>(l.mx) * static_cast<std::size_t>(l.my);
  if (auto cells = n.opt("cells")) {
    if (cells->size() != count) cells->fail("expected " + std::to_string(count) + " entries (mx * my, row-major)");
    for (std::size_t i = 0; i < count; ++i) {
      const Node c = (*cells)[i];
      int id = -1;
      if (c.is_string()) {
        const std::string name = c.string();
        for (std::size_t k = 0; k < cfg.cells.size(); ++k)
          if (cfg.cells[k].name == name) id = static_cast<int>(k);
      } else {
        id = c.integer();
      }
      if (id < 0 || id >= static_cast<int>(cfg.cells.size())) c.fail("references an undefined unique cell");
      l.cell_map.push_back(id);
    }
  }
  if (n.has("rotations") && n.has("rotation_rule")) n.fail("give either rotations or rotation_rule, not both");
  if (auto rot = n.opt("rotations")) {
    if (rot->size() != count) rot->fail("expected " + std::to_string(count) + " entries (mx * my, row-major)");
    for (std::size_t i = 0; i < count; ++i) l.rotation_map.push_back((*rot)[i].number());
  }
  if (auto rule = n.opt("rotation_rule")) {
    rule->only({"focal_length", "beam_deg", "step_deg"});
    RotationRule r;
    r.focal_length = rule->at("focal_length").positive();
    r.beam_deg = rule->at("beam_deg").number();
    if (auto s = rule->opt("step_deg")) r.step_deg = s->positive();
    cfg.rotation_rule = r;
  }
  if (auto sym = n.opt("rotation_symmetry_deg")) {
    l.rotation_symmetry_deg = sym->number();
    if (!(l.rotation_symmetry_deg > 0.0 && l.rotation_symmetry_deg <= 360.0)) sym->fail("expected a value in (0, 360]");
  }
}

void parse_excitation(const Node& n, SceneConfig& cfg) {
  IncidentSource& s = cfg.excitation;
  const std::string type = n.at("type").string();
  if (type == "dipole") {
    n.only({"type", "position", "moment"});
    s.kind = SourceKind::Dipole;
    s.position = n.at("position").vec3();
    s.moment = n.at("moment").cvec3();
    if (s.moment.norm() == 0.0) n.at("moment").fail("dipole moment must be nonzero");
  } else if (type == "plane_wave") {
    n.only({"type", "direction", "polarization", "amplitude", "phase_reference"});
    s.kind = SourceKind::PlaneWave;
    const Node d = n.at("direction");
    s.direction = d.vec3();
    if (s.direction.norm() == 0.0) d.fail("direction must be nonzero");
    s.direction.normalize();
    s.polarization = n.at("polarization").cvec3();
    if (s.polarization.norm() == 0.0) n.at("polarization").fail("polarization must be nonzero");
    if (auto a = n.opt("amplitude")) s.amplitude = a->positive();
    if (auto p = n.opt("phase_reference")) s.position = p->vec3();
  } else {
    n.at("type").fail("expected dipole or plane_wave");
  }
  s.frequency = cfg.frequency;
  try {
    s.validate();
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

void parse_solver(const Node& n, SceneConfig& cfg) {
  n.only({"tolerance", "restart", "max_iterations", "preconditioner", "force_dense", "rim_merge", "dof_limit",
          "quadrature"});
  RunOptions& o = cfg.options;
  if (auto v = n.opt("tolerance")) {
    o.gmres.tol = v->number();
    if (!(o.gmres.tol > 0.0 && o.gmres.tol < 1.0)) v->fail("expected a value in (0, 1)");
  }
  if (auto v = n.opt("restart")) {
    o.gmres.restart = v->integer();
    if (o.gmres.restart < 1) v->fail("expected a positive integer");
  }
  if (auto v = n.opt("max_iterations")) {
    o.gmres.max_iterations = v->integer();
    if (o.gmres.max_iterations < 0) v->fail("expected a non-negative integer");
  }
  if (auto v = n.opt("preconditioner")) o.preconditioner = v->boolean();
  if (auto v = n.opt("force_dense")) o.force_dense = v->boolean();
  if (auto v = n.opt("rim_merge")) o.rim_merge = v->boolean();
  if (auto v = n.opt("dof_limit")) {
    o.reference.dof_limit = v->integer();
    if (o.reference.dof_limit < 1) v->fail("expected a positive integer");
  }
  if (auto q = n.opt("quadrature")) {
    q->only({"far_points", "near_outer_points", "near_outer_levels", "near_inner_points", "near_factor"});
    static const std::set<int> rules{1, 3, 6, 7, 12};
    auto rule = [&](const char* key, int& out) {
      if (auto v = q->opt(key)) {
        out = v->integer();
        if (!rules.count(out)) v->fail("supported rules have 1, 3, 6, 7 or 12 points");
      }
    };
    rule("far_points", o.quad.far_points);
    rule("near_outer_points", o.quad.near_outer_points);
    rule("near_inner_points", o.quad.near_inner_points);
    if (auto v = q->opt("near_outer_levels")) {
      o.quad.near_outer_levels = v->integer();
      if (o.quad.near_outer_levels < 0 || o.quad.near_outer_levels > 4) v->fail("expected 0 to 4");
    }
    if (auto v = q->opt("near_factor")) o.quad.near_factor = v->positive();
  }
  o.reference.quad = o.quad;
}

void parse_output(const Node& n, SceneConfig& cfg, const std::filesystem::path& base) {
  n.only({"directory", "cuts_deg", "theta_deg", "directivity", "cp", "solutions"});
  OutputSpec& o = cfg.output;
  if (auto d = n.opt("directory")) o.directory = d->string();
  if (o.directory.is_relative()) o.directory = base / o.directory;
  if (auto c = n.opt("cuts_deg")) {
    o.cuts_deg.clear();
    if (c->size() == 0) c->fail("at least one cut is required");
    for (std::size_t i = 0; i < c->size(); ++i) o.cuts_deg.push_back((*c)[i].number());
  }
  if (auto t = n.opt("theta_deg")) {
    if (t->size() != 3) t->fail("expected [start, stop, step]");
    o.theta_start = (*t)[0].number();
    o.theta_stop = (*t)[1].number();
    o.theta_step = (*t)[2].positive();
    if (!(o.theta_stop > o.theta_start)) t->fail("stop must exceed start");
  }
  if (auto d = n.opt("directivity")) o.directivity = d->boolean();
  if (auto c = n.opt("cp")) {
    const std::string s = c->string();
    if (s == "none") o.cp = CpMode::None;
    else if (s == "single") o.cp = CpMode::Single;
    else if (s == "dual") o.cp = CpMode::Dual;
    else c->fail("expected none, single or dual");
  }
  if (auto s = n.opt("solutions")) {
    for (std::size_t i = 0; i < s->size(); ++i) {
      std::filesystem::path p = (*s)[i].string();
      o.solutions.push_back(p.is_relative() ? base / p : p);
    }
  }
}

}  // namespace

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Macromodel: return "macromodel";
    case RunMode::Oracle: return "oracle";
    case RunMode::Both: return "both";
  }
  return "?";
}

RunMode parse_mode(const std::string& text) {
  if (text == "macromodel") return RunMode::Macromodel;
  if (text == "oracle") return RunMode::Oracle;
  if (text == "both") return RunMode::Both;
  throw Error(ErrorKind::Config, "mode must be macromodel, oracle or both, got '" + text + "'");
}

std::vector<double> OutputSpec::theta_samples() const {
  std::vector<double> t;
  const int n = static_cast<int>(std::floor((theta_stop - theta_start) / theta_step + 1e-9));
  for (int i = 0; i <= n; ++i) t.push_back(theta_start + i * theta_step);
  return t;
}

SceneConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("config: invalid JSON: ") + e.what());
  }
  const Node root(j, "");
  root.only({"frequency", "mode", "cells", "layout", "excitation", "solver", "output", "mie"});
  SceneConfig cfg;
  cfg.frequency = root.at("frequency").positive();
  if (auto m = root.opt("mode")) {
    try {
      cfg.mode = parse_mode(m->string());
    } catch (const Error&) {
      m->fail("expected macromodel, oracle or both");
    }
  }
  const Node cells = root.at("cells");
  if (cells.size() == 0) cells.fail("at least one unique cell is required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cfg.cells.push_back(parse_cell(cells[i], base_dir));
    if (!names.insert(cfg.cells.back().name).second) cells[i].at("name").fail("duplicate cell name");
  }
  if (auto l = root.opt("layout")) parse_layout(*l, cfg);
  parse_excitation(root.at("excitation"), cfg);
  if (auto s = root.opt("solver")) parse_solver(*s, cfg);
  if (auto o = root.opt("output")) parse_output(*o, cfg, base_dir);
  else cfg.output.directory = base_dir / cfg.output.directory;
  if (auto m = root.opt("mie")) {
    m->only({"radius", "eps_r"});
    cfg.mie = MieCheck{m->at("radius").positive(), m->at("eps_r").complex()};
  }
  std::uint64_t h = fnv1a64(text);
  for (const auto& c : cfg.cells) h = fnv1a64(read_file(c.mesh), h);
  cfg.hash = h;
  return cfg;
}

SceneConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  SceneConfig cfg = parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  cfg.source_file = path;
  return cfg;
}

std::vector<UnitCellGeometry> load_cells(const SceneConfig& config) {
  std::vector<UnitCellGeometry> cells;
  for (const auto& c : config.cells) cells.push_back(build_cell(load_msh(c.mesh, c.scale), c.spec));
  return cells;
}

std::vector<double> rule_rotations(const RotationRule& rule, int mx, int my, double pitch_x, double pitch_y,
                                   double frequency) {
  const double k0 = free_space_wavenumber(frequency);
  std::vector<double> out;
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) {
      const double x = (i - 0.5 * (mx - 1)) * pitch_x;
      const double y = (j - 0.5 * (my - 1)) * pitch_y;
      out.push_back(round_rotation_deg(rotation_angle(x, y, rule.focal_length, rule.beam_deg * kPi / 180.0, k0),
                                       rule.step_deg));
    }
  return out;
}

LayoutSpec resolve_layout(const SceneConfig& config, const std::vector<UnitCellGeometry>& cells) {
  LayoutSpec l = config.layout;
  if (config.rotation_rule) {
    if (cells.empty() || !cells.front().has_box) throw Error(ErrorKind::Config, "config /layout/rotation_rule: cells need an equivalent surface");
    l.rotation_map = rule_rotations(*config.rotation_rule, l.mx, l.my, cells.front().pitch_x, cells.front().pitch_y,
                                    config.frequency);
  }
  return l;
}

}  // namespace emsurf
