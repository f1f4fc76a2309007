#include "postmm/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "postmm/errors.hpp"

namespace postmm::config {

namespace {

using nlohmann::json;

constexpr double mm = 1e-3;

// Walks one JSON object, recording type errors and unknown keys by path
// instead of stopping at the first one.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, std::vector<std::string>& problems)
      : obj_(obj), path_(std::move(path)), problems_(problems) {
    if (!obj_.is_object()) problems_.push_back(path_ + ": expected an object");
  }

  ~ObjectReader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) problems_.push_back(where(key) + ": unknown key");
  }

  bool has(const std::string& key) const { return obj_.is_object() && obj_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return nullptr;
    return &obj_.at(key);
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (v->is_number()) out = v->get<double>();
      else problems_.push_back(where(key) + ": expected a number");
    }
  }

  void number(const std::string& key, std::optional<double>& out) {
    if (has(key)) {
      double x = 0.0;
      number(key, x);
      out = x;
    } else {
      seen_.insert(key);
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = get(key)) {
      if (v->is_number_integer()) out = v->get<int>();
      else problems_.push_back(where(key) + ": expected an integer");
    }
  }

  void integer(const std::string& key, std::optional<int>& out) {
    if (has(key)) {
      int x = 0;
      integer(key, x);
      out = x;
    } else {
      seen_.insert(key);
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else problems_.push_back(where(key) + ": expected true or false");
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (v->is_string()) out = v->get<std::string>();
      else problems_.push_back(where(key) + ": expected a string");
    }
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

int line_of(std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

std::string fmt_mm(double v) {
  std::ostringstream os;
  os << v << " mm";
  return os.str();
}

void read_waveguide(const json& j, WaveguideSpec& wg, std::vector<std::string>& problems) {
  ObjectReader r(j, "waveguide", problems);
  r.string("preset", wg.preset);
  r.number("a", wg.a);
  r.number("b", wg.b);
  r.number("eps_r", wg.eps_r);
  r.number("mu_r", wg.mu_r);
  if (wg.preset.empty()) return;
  if (wg.preset != "WR-62") {
    problems.push_back("waveguide.preset: unknown preset '" + wg.preset + "'");
    return;
  }
  const Waveguide ref = Waveguide::wr62();
  if ((r.has("a") && wg.a != ref.a / mm) || (r.has("b") && wg.b != ref.b / mm))
    problems.push_back("waveguide: a and b contradict preset " + wg.preset);
  wg.a = ref.a / mm;
  wg.b = ref.b / mm;
}

void read_elements(const json& j, std::vector<ElementSpec>& out, std::vector<std::string>& problems) {
  if (!j.is_array()) {
    problems.push_back("elements: expected an array");
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "elements[" + std::to_string(i) + "]";
    ObjectReader r(j[i], path, problems);
    std::string type;
    r.string("type", type);
    if (type == "post") {
      PostSpec p;
      r.number("radius", p.radius);
      r.number("offset", p.offset);
      r.number("wall", p.wall);
      out.emplace_back(p);
    } else if (type == "guide") {
      GuideSpec g;
      r.number("length", g.length);
      out.emplace_back(g);
    } else {
      problems.push_back(path + ".type: expected \"post\" or \"guide\"");
      // Accept the remaining keys so they are not also reported as unknown.
      for (const char* key : {"radius", "offset", "wall", "length"}) r.get(key);
    }
  }
}

void read_sweep(const json& j, SweepSpec& s, std::vector<std::string>& problems) {
  ObjectReader r(j, "sweep", problems);
  r.number("start", s.start);
  r.number("stop", s.stop);
  r.integer("points", s.points);
}

void read_numerics(const json& j, NumericsSpec& n, std::vector<std::string>& problems) {
  ObjectReader r(j, "numerics", problems);
  r.integer("modes", n.modes);
  r.number("k_factor", n.k_factor);
  r.integer("k_min", n.k_min);
  r.integer("k_d", n.k_d);
  r.integer("k_u", n.k_u);
  r.integer("k_c", n.k_c);
  r.integer("quad_order", n.quad_order);
  r.boolean("balance_rows", n.balance_rows);
}

void read_output(const json& j, OutputSpec& o, std::vector<std::string>& problems) {
  ObjectReader r(j, "output", problems);
  r.string("csv", o.csv);
  r.string("touchstone", o.touchstone);
  if (const json* p = r.get("params")) {
    o.params.clear();
    if (!p->is_array()) {
      problems.push_back("output.params: expected an array of strings");
      return;
    }
    for (const auto& item : *p) {
      if (item.is_string()) o.params.push_back(item.get<std::string>());
      else problems.push_back("output.params: expected an array of strings");
    }
  }
}

}  // namespace

Waveguide RunConfig::waveguide_si() const {
  return {waveguide.a * mm, waveguide.b * mm, waveguide.eps_r, waveguide.mu_r};
}

Network RunConfig::network() const {
  const Waveguide wg = waveguide_si();
  Network net{wg, {}};
  for (const auto& el : elements) {
    if (const auto* p = std::get_if<PostSpec>(&el)) {
      const double h = p->offset ? 0.5 * wg.a + *p->offset * mm : p->wall.value_or(0.0) * mm;
      net.elements.emplace_back(PostJunction{wg, h, p->radius * mm});
    } else {
      net.elements.emplace_back(UniformGuide{std::get<GuideSpec>(el).length * mm});
    }
  }
  return net;
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions opt;
  opt.disc.factor = numerics.k_factor;
  opt.disc.min_per_segment = numerics.k_min;
  if (numerics.k_d && numerics.k_u && numerics.k_c)
    opt.disc.fixed = Discretization{*numerics.k_d, *numerics.k_u, *numerics.k_c};
  opt.quad_order = numerics.quad_order;
  opt.balance_rows = numerics.balance_rows;
  return opt;
}

std::vector<std::string> RunConfig::problems() const {
  std::vector<std::string> out;
  const auto& w = waveguide;
  if (!(w.a > 0.0)) out.push_back("waveguide.a must be > 0");
  if (!(w.b > 0.0)) out.push_back("waveguide.b must be > 0");
  if (!(w.eps_r >= 1.0)) out.push_back("waveguide.eps_r must be >= 1");
  if (!(w.mu_r >= 1.0)) out.push_back("waveguide.mu_r must be >= 1");

  if (elements.empty()) out.push_back("elements: at least one element is required");
  double gap = 0.0;
  std::optional<double> last_radius;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string path = "elements[" + std::to_string(i) + "]";
    if (const auto* g = std::get_if<GuideSpec>(&elements[i])) {
      if (!(g->length >= 0.0)) out.push_back(path + ".length must be >= 0");
      gap += g->length;
      continue;
    }
    const auto& p = std::get<PostSpec>(elements[i]);
    if (!(p.radius > 0.0)) out.push_back(path + ".radius must be > 0");
    if (p.offset.has_value() == p.wall.has_value()) {
      out.push_back(path + ": give exactly one of offset or wall");
    } else if (p.radius > 0.0 && w.a > 0.0) {
      const double h = p.offset ? 0.5 * w.a + *p.offset : *p.wall;
      if (!(p.radius < h && p.radius < w.a - h))
        out.push_back(path + ": post of radius " + fmt_mm(p.radius) + " centred at h = " + fmt_mm(h) +
                      " does not fit inside a guide of width " + fmt_mm(w.a));
    }
    if (last_radius && gap < *last_radius + p.radius)
      out.push_back(path + ": spacing " + fmt_mm(gap) + " to the previous post is below the sum of radii");
    last_radius = p.radius;
    gap = 0.0;
  }

  if (!(sweep.start > 0.0)) out.push_back("sweep.start must be > 0");
  if (sweep.points < 1) out.push_back("sweep.points must be >= 1");
  if (sweep.points > 1 && !(sweep.start < sweep.stop)) out.push_back("sweep.stop must exceed sweep.start");

  const auto& n = numerics;
  if (n.modes < 1) out.push_back("numerics.modes must be >= 1");
  if (!(n.k_factor > 0.0)) out.push_back("numerics.k_factor must be > 0");
  if (n.k_min < 1) out.push_back("numerics.k_min must be >= 1");
  const int given = n.k_d.has_value() + n.k_u.has_value() + n.k_c.has_value();
  if (given != 0 && given != 3) out.push_back("numerics: give all of k_d, k_u, k_c or none");
  for (const auto& [name, k] : {std::pair{"k_d", n.k_d}, {"k_u", n.k_u}, {"k_c", n.k_c}})
    if (k && *k < 1) out.push_back(std::string("numerics.") + name + " must be >= 1");
  if (n.quad_order < 1) out.push_back("numerics.quad_order must be >= 1");

  if (output.params.empty()) out.push_back("output.params must not be empty");
  std::set<std::string> seen;
  for (const auto& p : output.params) {
    if (std::find(known_params.begin(), known_params.end(), p) == known_params.end())
      out.push_back("output.params: unknown parameter '" + p + "'");
    else if (!seen.insert(p).second)
      out.push_back("output.params: duplicate parameter '" + p + "'");
  }
  return out;
}

void RunConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ValidationError(std::move(p));
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ParseError(line_of(text, e.byte), msg);
  }
  if (!doc.is_object()) throw ParseError(1, "top level must be an object");

  RunConfig cfg;
  std::vector<std::string> problems;
  {
    ObjectReader top(doc, "", problems);
    if (const json* j = top.get("waveguide")) read_waveguide(*j, cfg.waveguide, problems);
    else problems.push_back("waveguide: section is required");
    if (const json* j = top.get("elements")) read_elements(*j, cfg.elements, problems);
    if (const json* j = top.get("sweep")) read_sweep(*j, cfg.sweep, problems);
    if (const json* j = top.get("numerics")) read_numerics(*j, cfg.numerics, problems);
    if (const json* j = top.get("output")) read_output(*j, cfg.output, problems);
  }
  // Schema problems first, then the invariants that could still be checked.
  for (auto& p : cfg.problems()) problems.push_back(std::move(p));
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize(const RunConfig& cfg) {
  json doc = json::object();
  json wg = json::object();
  if (!cfg.waveguide.preset.empty()) {
    wg["preset"] = cfg.waveguide.preset;
  } else {
    wg["a"] = cfg.waveguide.a;
    wg["b"] = cfg.waveguide.b;
  }
  wg["eps_r"] = cfg.waveguide.eps_r;
  wg["mu_r"] = cfg.waveguide.mu_r;
  doc["waveguide"] = wg;

  json elements = json::array();
  for (const auto& el : cfg.elements) {
    json e = json::object();
    if (const auto* p = std::get_if<PostSpec>(&el)) {
      e["type"] = "post";
      e["radius"] = p->radius;
      if (p->offset) e["offset"] = *p->offset;
      if (p->wall) e["wall"] = *p->wall;
    } else {
      e["type"] = "guide";
      e["length"] = std::get<GuideSpec>(el).length;
    }
    elements.push_back(e);
  }
  doc["elements"] = elements;

  doc["sweep"] = {{"start", cfg.sweep.start}, {"stop", cfg.sweep.stop}, {"points", cfg.sweep.points}};

  const auto& n = cfg.numerics;
  json num = {{"modes", n.modes},
              {"k_factor", n.k_factor},
              {"k_min", n.k_min},
              {"quad_order", n.quad_order},
              {"balance_rows", n.balance_rows}};
  if (n.k_d) num["k_d"] = *n.k_d;
  if (n.k_u) num["k_u"] = *n.k_u;
  if (n.k_c) num["k_c"] = *n.k_c;
  doc["numerics"] = num;

  doc["output"] = {{"csv", cfg.output.csv}, {"touchstone", cfg.output.touchstone}, {"params", cfg.output.params}};
  return doc.dump(2) + "\n";
}

}  // namespace postmm::config
