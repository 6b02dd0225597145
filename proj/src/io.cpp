#include "sg/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sg {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ParseError("field '" + path + "': " + what);
}

const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(path, "must be finite");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) field_error(path, "expected an integer");
  return j.get<int>();
}

cplx complex_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) field_error(path, "expected [re, im]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) field_error(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

json opt_part(const std::optional<cplx>& z, bool real) {
  if (!z) return nullptr;
  return real ? z->real() : z->imag();
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + std::ptrdiff_t(upto), '\n');
    throw ParseError(source + ": parse error at line " + std::to_string(line) + ": " + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

PoleSet poles_from_json(const json& j) {
  const json& arr = member(j, "poles", "");
  if (!arr.is_array()) field_error("poles", "expected an array");
  std::vector<std::pair<cplx, cplx>> lc;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "poles[" + std::to_string(i) + "]";
    lc.emplace_back(complex_pair(member(arr[i], "lambda", path), path + ".lambda"),
                    complex_pair(member(arr[i], "c", path), path + ".c"));
  }
  try {
    return PoleSet(lc);
  } catch (const UsageError& e) {
    throw UsageError(std::string("invalid pole set: ") + e.what());
  }
}

json to_json(const PoleSet& poles) {
  json arr = json::array();
  for (const auto& p : poles.poles()) arr.push_back({{"lambda", pair(p.lambda)}, {"c", pair(p.c)}});
  return {{"poles", arr}};
}

BoundaryData boundary_from_json(const json& j) {
  BoundaryData d;
  d.x = numbers(member(j, "x", ""), "x");
  d.u0 = numbers(member(j, "u0", ""), "u0");
  d.u1 = numbers(member(j, "u1", ""), "u1");
  d.t = numbers(member(j, "t", ""), "t");
  d.g0 = numbers(member(j, "g0", ""), "g0");
  d.g1 = numbers(member(j, "g1", ""), "g1");
  d.Nx = integer(member(j, "Nx", ""), "Nx");
  d.Nt = integer(member(j, "Nt", ""), "Nt");
  if (j.contains("u0x")) d.u0x = numbers(j["u0x"], "u0x");
  if (j.contains("g0t")) d.g0t = numbers(j["g0t"], "g0t");
  return d;
}

json to_json(const BoundaryData& d) {
  json j = {{"x", d.x}, {"u0", d.u0}, {"u1", d.u1}, {"t", d.t},
            {"g0", d.g0}, {"g1", d.g1}, {"Nx", d.Nx}, {"Nt", d.Nt}};
  if (d.u0x) j["u0x"] = *d.u0x;
  if (d.g0t) j["g0t"] = *d.g0t;
  return j;
}

RadiationProfile radiation_from_json(const json& j) {
  const json& kind = member(j, "kind", "");
  if (!kind.is_string()) field_error("kind", "expected a string");
  const std::string k = kind.get<std::string>();
  RadiationProfile r;
  if (k == "zero") return r;
  if (k == "builtin") {
    if (j.contains("name") && (!j["name"].is_string() || j["name"].get<std::string>() != "default"))
      field_error("name", "the only builtin profile is \"default\"");
    const double kappa = j.contains("kappa") ? number(j["kappa"], "kappa") : 1.0;
    r = RadiationProfile::builtin_default(kappa);
  } else if (k == "sampled") {
    r = RadiationProfile::sampled(numbers(member(j, "k", ""), "k"),
                                  numbers(member(j, "re", ""), "re"),
                                  numbers(member(j, "im", ""), "im"));
  } else {
    field_error("kind", "expected \"builtin\", \"sampled\" or \"zero\"");
  }
  r.validate();
  return r;
}

json to_json(const RadiationProfile& r) {
  switch (r.kind()) {
    case RadiationProfile::Kind::Zero:
      return {{"kind", "zero"}};
    case RadiationProfile::Kind::Builtin:
      return {{"kind", "builtin"}, {"name", "default"}, {"kappa", r.kappa()}};
    case RadiationProfile::Kind::Sampled:
      return {{"kind", "sampled"}, {"k", r.sample_k()}, {"re", r.sample_re()},
              {"im", r.sample_im()}};
    case RadiationProfile::Kind::Function:
      break;
  }
  throw UsageError("function profiles have no JSON form");
}

json to_json(const SpectralTable& table) {
  auto grid = [](const std::vector<SpectralSample>& g) {
    json j;
    auto col = [&](const char* name, auto get) {
      json a = json::array();
      for (const auto& s : g) a.push_back(get(s));
      j[name] = a;
    };
    col("k_re", [](const SpectralSample& s) { return json(s.k.real()); });
    col("k_im", [](const SpectralSample& s) { return json(s.k.imag()); });
    col("a_re", [](const SpectralSample& s) { return json(s.a.real()); });
    col("a_im", [](const SpectralSample& s) { return json(s.a.imag()); });
    col("b_re", [](const SpectralSample& s) { return json(s.b.real()); });
    col("b_im", [](const SpectralSample& s) { return json(s.b.imag()); });
    using Field = std::optional<cplx> SpectralSample::*;
    const std::pair<const char*, Field> optional_fields[] = {
        {"A", &SpectralSample::A},   {"B", &SpectralSample::B},   {"A_bar", &SpectralSample::A_bar},
        {"B_bar", &SpectralSample::B_bar}, {"c", &SpectralSample::c}, {"d", &SpectralSample::d},
        {"r1", &SpectralSample::r1}, {"h", &SpectralSample::h},   {"r", &SpectralSample::r}};
    for (const auto& [name, field] : optional_fields) {
      col((std::string(name) + "_re").c_str(),
          [field](const SpectralSample& s) { return opt_part(s.*field, true); });
      col((std::string(name) + "_im").c_str(),
          [field](const SpectralSample& s) { return opt_part(s.*field, false); });
    }
    return j;
  };
  json j = {{"Nx", table.Nx}, {"Nt", table.Nt}, {"small_k_defect", table.small_k_defect},
            {"real", grid(table.real)}, {"circle", grid(table.circle)},
            {"upper", grid(table.upper)}};
  if (table.small) j["small"] = grid({*table.small});
  return j;
}

json to_json(const AsymptoticReport& rep) {
  json j = {{"x", rep.x},
            {"t", rep.t},
            {"sector", to_string(rep.sector)},
            {"u_pred", rep.u_pred},
            {"u_const", rep.terms.u_const},
            {"u_sol", rep.terms.u_sol},
            {"u_rad1", rep.terms.u_rad1},
            {"u_rad2", rep.terms.u_rad2},
            {"error_scale", rep.error_scale}};
  j["k0"] = rep.k0 ? json(*rep.k0) : json(nullptr);
  j["nu"] = rep.nu ? json(*rep.nu) : json(nullptr);
  return j;
}

json to_json(const ValidationReport& rep) {
  json metrics = json::object();
  for (const auto& [k, v] : rep.metrics) metrics[k] = v;
  json checks = json::array();
  for (const Check& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"metric", c.metric},
                      {"lo", c.lo ? json(*c.lo) : json(nullptr)},
                      {"hi", c.hi ? json(*c.hi) : json(nullptr)},
                      {"pass", c.pass}});
  }
  return {{"name", rep.name}, {"mode", rep.mode},  {"pass", rep.pass()},
          {"metrics", metrics}, {"checks", checks}};
}

}  // namespace sg
