#include "nslab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace nslab {

namespace fs = std::filesystem;

std::string tool_version() { return "0.1.0"; }

void atomic_write(const std::string& path, const void* data,
                  std::size_t size) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp);
    os.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!os) throw IoError("short write to " + tmp);
  }
  fs::rename(tmp, path);
}

void atomic_write(const std::string& path, const std::string& content) {
  atomic_write(path, content.data(), content.size());
}

// ---- snapshots -------------------------------------------------------------

namespace {

template <int C>
const char* kind_name() {
  return C == 1 ? "scalar" : C == 3 ? "vector" : "tensor";
}

Json grid_json(const GridSpec& g) {
  return Json{{"box_side", g.box_side},
              {"points_per_axis", g.points_per_axis},
              {"origin_offset",
               {g.origin_offset[0], g.origin_offset[1], g.origin_offset[2]}}};
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  g.box_side = j.at("box_side").get<double>();
  g.points_per_axis = j.at("points_per_axis").get<int>();
  auto off = j.at("origin_offset");
  for (int a = 0; a < 3; ++a) g.origin_offset[a] = off.at(a).get<double>();
  return g;
}

Json header_json(const std::string& name, int components, const GridSpec& g,
                 const TimeGrid* tg, std::size_t count) {
  Json h{{"name", name},
         {"kind", components == 1   ? "scalar"
                  : components == 3 ? "vector"
                                    : "tensor"},
         {"components", components},
         {"grid", grid_json(g)},
         {"dtype", "float64-le"},
         {"layout", "frame-major; component-major within frame; i-major nodes"},
         {"count", count}};
  if (tg)
    h["time"] = Json{{"t0", tg->t0}, {"t1", tg->t1}, {"steps", tg->steps}};
  else
    h["time"] = nullptr;
  return h;
}

std::vector<double> read_payload(const std::string& path, std::size_t count) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::vector<double> data(count);
  is.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
    throw IoError("short read from " + path);
  return data;
}

}  // namespace

template <int C>
void write_snapshot(const std::string& path_base, const Field<C>& f,
                    const std::string& name) {
  Json h = header_json(name, C, f.grid(), nullptr, f.raw().size());
  atomic_write(path_base + ".json", h.dump(2) + "\n");
  atomic_write(path_base + ".f64", f.raw().data(),
               f.raw().size() * sizeof(double));
}

template <int C>
void write_snapshot(const std::string& path_base, const SpaceTimeField<C>& f,
                    const std::string& name) {
  f.validate();
  std::size_t per = f.frames[0].raw().size();
  Json h = header_json(name, C, f.grid(), &f.time, per * f.frames.size());
  atomic_write(path_base + ".json", h.dump(2) + "\n");
  std::string buf;
  buf.reserve(per * f.frames.size() * sizeof(double));
  for (const auto& fr : f.frames)
    buf.append(reinterpret_cast<const char*>(fr.raw().data()),
               per * sizeof(double));
  atomic_write(path_base + ".f64", buf);
}

template <int C>
Field<C> read_snapshot_field(const std::string& path_base) {
  std::ifstream is(path_base + ".json");
  if (!is) throw IoError("cannot open " + path_base + ".json");
  Json h = Json::parse(is);
  if (h.at("components").get<int>() != C)
    throw IoError("snapshot component mismatch");
  Field<C> f(grid_from_json(h.at("grid")));
  f.raw() = read_payload(path_base + ".f64", f.raw().size());
  return f;
}

template <int C>
SpaceTimeField<C> read_snapshot_stack(const std::string& path_base) {
  std::ifstream is(path_base + ".json");
  if (!is) throw IoError("cannot open " + path_base + ".json");
  Json h = Json::parse(is);
  if (h.at("components").get<int>() != C)
    throw IoError("snapshot component mismatch");
  if (h.at("time").is_null()) throw IoError("snapshot has no time grid");
  TimeGrid tg;
  tg.t0 = h["time"].at("t0").get<double>();
  tg.t1 = h["time"].at("t1").get<double>();
  tg.steps = h["time"].at("steps").get<int>();
  SpaceTimeField<C> f(tg, grid_from_json(h.at("grid")));
  std::size_t per = f.frames[0].raw().size();
  auto all = read_payload(path_base + ".f64", per * f.frames.size());
  for (std::size_t m = 0; m < f.frames.size(); ++m)
    std::copy(all.begin() + m * per, all.begin() + (m + 1) * per,
              f.frames[m].raw().begin());
  return f;
}

template void write_snapshot<1>(const std::string&, const Field<1>&,
                                const std::string&);
template void write_snapshot<3>(const std::string&, const Field<3>&,
                                const std::string&);
template void write_snapshot<9>(const std::string&, const Field<9>&,
                                const std::string&);
template void write_snapshot<1>(const std::string&, const SpaceTimeField<1>&,
                                const std::string&);
template void write_snapshot<3>(const std::string&, const SpaceTimeField<3>&,
                                const std::string&);
template void write_snapshot<9>(const std::string&, const SpaceTimeField<9>&,
                                const std::string&);
template Field<1> read_snapshot_field<1>(const std::string&);
template Field<3> read_snapshot_field<3>(const std::string&);
template Field<9> read_snapshot_field<9>(const std::string&);
template SpaceTimeField<1> read_snapshot_stack<1>(const std::string&);
template SpaceTimeField<3> read_snapshot_stack<3>(const std::string&);
template SpaceTimeField<9> read_snapshot_stack<9>(const std::string&);

void write_localized_manifest(const std::string& path,
                              const std::vector<std::string>& names) {
  Json m{{"kind", "localized_state"}, {"components", names}};
  atomic_write(path, m.dump(2) + "\n");
}

// ---- reports ----------------------------------------------------------------

std::string rearrangement_csv(const RearrangementProfile& prof) {
  std::ostringstream os;
  os << "k,volume,magnitude\n";
  for (std::size_t k = 0; k < prof.magnitude.size(); ++k)
    os << (k + 1) << "," << prof.volume[k] << "," << prof.magnitude[k] << "\n";
  return os.str();
}

Json norm_report_json(const LorentzNormResult& r, const std::string& mask) {
  auto num = [](double v) {
    return v == kInf ? Json("inf") : Json(v);
  };
  return Json{{"q", num(r.q)}, {"r", num(r.r)}, {"s", nullptr},
              {"mask", mask},  {"value", r.value}};
}

Json mixed_norm_report_json(const MixedNormResult& r, const std::string& mask) {
  auto num = [](double v) {
    return v == kInf ? Json("inf") : Json(v);
  };
  return Json{{"q", num(r.q)}, {"r", num(r.r)}, {"s", num(r.s)},
              {"mask", mask},  {"value", r.value}};
}

Json decay_scan_json(const DecayScanReport& r) {
  return Json{{"l", r.l},
              {"k", r.k},
              {"C_emp", r.C_emp},
              {"n_samples", r.n_samples},
              {"stability_pct", r.stability_pct}};
}

std::string kernel_samples_csv(const std::vector<KernelSample>& samples) {
  std::ostringstream os;
  os << "x1,x2,x3,t,i,j,value,method\n";
  for (const auto& s : samples)
    os << s.x.x << "," << s.x.y << "," << s.x.z << "," << s.t << "," << s.i
       << "," << s.j << "," << s.value << ","
       << (s.method == KernelMethod::closed_form ? "closed_form"
                                                 : "quadrature_oracle")
       << "\n";
  return os.str();
}

std::string picard_trace_csv(const PicardTrace& t) {
  std::ostringstream os;
  os << "iter,norm,increment,ratio\n";
  for (std::size_t i = 0; i < t.norms.size(); ++i) {
    os << (i + 1) << "," << t.norms[i] << "," << t.increments[i] << ",";
    if (i >= 1 && i - 1 < t.ratios.size()) os << t.ratios[i - 1];
    os << "\n";
  }
  return os.str();
}

Json picard_verdict_json(const PicardTrace& t) {
  return Json{{"verdict", to_string(t.verdict)},
              {"iterations", t.iterations},
              {"residual", t.residual},
              {"final_norm", t.norms.empty() ? 0.0 : t.norms.back()}};
}

Json residual_report_json(const ResidualReport& r) {
  return Json{{"flow", r.flow},
              {"battery_id", r.battery_id},
              {"residuals", r.residuals},
              {"tol", r.tol},
              {"verdict", r.pass ? "pass" : "fail"}};
}

namespace {
Json rat_json(const ExtRational& r) { return Json(r.to_string()); }
}  // namespace

Json bootstrap_json(const BootstrapSchedule& s) {
  Json p = Json::array(), a = Json::array(), b = Json::array();
  for (const auto& v : s.p) p.push_back(rat_json(v));
  for (const auto& v : s.a) a.push_back(rat_json(v));
  for (const auto& v : s.b) b.push_back(rat_json(v));
  return Json{{"q", rat_json(s.q)},         {"s", rat_json(s.s)},
              {"margin", rat_json(s.margin)}, {"K", s.K},
              {"sigma", rat_json(s.sigma)}, {"p", p},
              {"a", a},                     {"b", b},
              {"all_a_ge_1", s.all_a_ge_1}, {"all_b_ge_1", s.all_b_ge_1},
              {"terminal_infinite", s.terminal_infinite},
              {"k_minimal", s.k_minimal}};
}

Json step1_json(const Step1Ledger& s) {
  return Json{{"q", rat_json(s.q)},
              {"s", rat_json(s.s)},
              {"m", rat_json(s.m)},
              {"delta", rat_json(s.delta)},
              {"a", rat_json(s.a)},
              {"b", rat_json(s.b)},
              {"r", rat_json(s.r)},
              {"rho", rat_json(s.rho)},
              {"b_window", s.b_window},
              {"a15", s.a15},
              {"equivalent_form", s.equivalent_form},
              {"forms_agree", s.forms_agree}};
}

Json serrin_json(const SerrinReport& s) {
  return Json{{"q", rat_json(s.q)},
              {"s", rat_json(s.s)},
              {"value", rat_json(s.value)},
              {"class", to_string(s.cls)}};
}

Json pressure_m_json(const PressureMReport& s) {
  return Json{{"q", rat_json(s.q)},
              {"m", rat_json(s.m)},
              {"threshold", rat_json(s.threshold)},
              {"holds", s.holds},
              {"implied_by_m_ge_1", s.implied_by_m_ge_1}};
}

// ---- configs ----------------------------------------------------------------

namespace {

// Minimal TOML subset: [section], key = value, #-comments, values are
// numbers, booleans, "strings", or flat arrays of numbers.
Json parse_toml_subset(const std::string& text) {
  Json root = Json::object();
  Json* section = &root;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw IoError("config: bad section header at line " +
                      std::to_string(lineno));
      std::string name = strip(line.substr(1, line.size() - 2));
      root[name] = Json::object();
      section = &root[name];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError("config: expected key = value at line " +
                    std::to_string(lineno));
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    auto parse_scalar = [&](const std::string& v) -> Json {
      if (v == "true") return true;
      if (v == "false") return false;
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
      try {
        std::size_t pos = 0;
        if (v.find_first_of(".eE") != std::string::npos) {
          double d = std::stod(v, &pos);
          if (pos == v.size()) return d;
        } else {
          long long i = std::stoll(v, &pos);
          if (pos == v.size()) return i;
        }
      } catch (...) {
      }
      throw IoError("config: cannot parse value '" + v + "' at line " +
                    std::to_string(lineno));
    };
    if (!val.empty() && val.front() == '[') {
      if (val.back() != ']')
        throw IoError("config: unterminated array at line " +
                      std::to_string(lineno));
      Json arr = Json::array();
      std::string inner = val.substr(1, val.size() - 2);
      std::istringstream items(inner);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = strip(item);
        if (!item.empty()) arr.push_back(parse_scalar(item));
      }
      (*section)[key] = arr;
    } else {
      (*section)[key] = parse_scalar(val);
    }
  }
  return root;
}

const std::map<std::string, std::vector<std::string>>& config_schema() {
  static const std::map<std::string, std::vector<std::string>> schema{
      {"grid", {"box_side", "n", "half_shift"}},
      {"time", {"t0", "t1", "steps"}},
      {"flow", {"kind", "amplitude", "landau_a", "seed"}},
      {"picard",
       {"max_iters", "rel_tolerance", "divergence_cap", "y_norm"}},
      {"scan", {"amplitudes"}},
      {"output", {"dir"}}};
  return schema;
}

}  // namespace

ExperimentConfig load_config(const std::string& text) {
  // JSON when it parses as JSON, else the TOML subset.
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error&) {
    j = parse_toml_subset(text);
  }
  if (!j.is_object()) throw IoError("config: top level must be a table");

  const auto& schema = config_schema();
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto sect = schema.find(it.key());
    if (sect == schema.end())
      throw IoError("config: unknown section '" + it.key() + "'");
    if (!it.value().is_object())
      throw IoError("config: section '" + it.key() + "' must be a table");
    for (auto kt = it.value().begin(); kt != it.value().end(); ++kt) {
      const auto& keys = sect->second;
      if (std::find(keys.begin(), keys.end(), kt.key()) == keys.end())
        throw IoError("config: unknown key '" + it.key() + "." + kt.key() +
                      "'");
    }
  }

  ExperimentConfig c;
  auto get = [&](const char* sect, const char* key, auto def) {
    using T = decltype(def);
    if (j.contains(sect) && j[sect].contains(key))
      return j[sect][key].get<T>();
    return def;
  };
  c.box_side = get("grid", "box_side", c.box_side);
  c.grid_n = get("grid", "n", c.grid_n);
  c.half_shift = get("grid", "half_shift", c.half_shift);
  c.t0 = get("time", "t0", c.t0);
  c.t1 = get("time", "t1", c.t1);
  c.time_steps = get("time", "steps", c.time_steps);
  c.flow = get("flow", "kind", c.flow);
  c.amplitude = get("flow", "amplitude", c.amplitude);
  c.landau_a = get("flow", "landau_a", c.landau_a);
  c.seed = get("flow", "seed", c.seed);
  c.max_iters = get("picard", "max_iters", c.max_iters);
  c.rel_tolerance = get("picard", "rel_tolerance", c.rel_tolerance);
  c.divergence_cap = get("picard", "divergence_cap", c.divergence_cap);
  c.y_norm = get("picard", "y_norm", c.y_norm);
  if (j.contains("scan") && j["scan"].contains("amplitudes"))
    c.scan_amplitudes = j["scan"]["amplitudes"].get<std::vector<double>>();
  c.out_dir = get("output", "dir", c.out_dir);
  if (c.flow != "serrin" && c.flow != "landau" && c.flow != "random")
    throw IoError("config: flow.kind must be serrin, landau or random");
  c.grid().validate();
  c.time().validate();
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return load_config(buf.str());
}

GridSpec ExperimentConfig::grid() const {
  GridSpec g;
  g.box_side = box_side;
  g.points_per_axis = grid_n;
  if (half_shift) g = g.half_cell_shifted();
  return g;
}

TimeGrid ExperimentConfig::time() const {
  TimeGrid tg;
  tg.t0 = t0;
  tg.t1 = t1;
  tg.steps = time_steps;
  return tg;
}

Json config_json(const ExperimentConfig& c) {
  return Json{
      {"grid",
       {{"box_side", c.box_side}, {"n", c.grid_n}, {"half_shift", c.half_shift}}},
      {"time", {{"t0", c.t0}, {"t1", c.t1}, {"steps", c.time_steps}}},
      {"flow",
       {{"kind", c.flow},
        {"amplitude", c.amplitude},
        {"landau_a", c.landau_a},
        {"seed", c.seed}}},
      {"picard",
       {{"max_iters", c.max_iters},
        {"rel_tolerance", c.rel_tolerance},
        {"divergence_cap", c.divergence_cap},
        {"y_norm", c.y_norm}}},
      {"scan", {{"amplitudes", c.scan_amplitudes}}},
      {"output", {{"dir", c.out_dir}}}};
}

std::string config_hash(const ExperimentConfig& c) {
  std::string dump = config_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Json RunReport::to_json() const {
  return Json{{"config_hash", config_hash},
              {"version", version},
              {"tasks", tasks},
              {"timings_ms", timings_ms}};
}

}  // namespace nslab
