#include "clg/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "clg/error.hpp"

namespace clg {
namespace {

using json = nlohmann::ordered_json;

VariableId lookup(const Network& net, const std::string& name, const char* where) {
  const auto id = net.find(name);
  if (!id) throw DataError("unknown variable '" + name + "' in " + where);
  return *id;
}

std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw DataError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw DataError(what + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

const json& field(const json& obj, const char* key, const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(context + " is missing '" + key + "'");
  return *it;
}

Network build(const json& doc) {
  if (!doc.is_object()) throw DataError("network file must hold a JSON object");
  Network net;
  for (const auto& v : field(doc, "variables", "network")) {
    Variable var;
    var.id = static_cast<VariableId>(net.variables.size());
    const auto& name = field(v, "name", "variable");
    if (!name.is_string()) throw DataError("variable name must be a string");
    var.name = name.get<std::string>();
    const std::string kind = field(v, "kind", "variable " + var.name).get<std::string>();
    if (kind == "discrete") {
      var.kind = VariableKind::discrete;
      for (const auto& s : field(v, "states", "discrete variable " + var.name)) {
        if (!s.is_string()) throw DataError("state labels of " + var.name + " must be strings");
        var.states.push_back(s.get<std::string>());
      }
    } else if (kind == "continuous") {
      var.kind = VariableKind::continuous;
    } else {
      throw DataError("variable " + var.name + " has unknown kind '" + kind + "'");
    }
    net.variables.push_back(std::move(var));
  }
  net.parents.resize(net.variables.size());
  if (auto it = doc.find("edges"); it != doc.end()) {
    for (const auto& e : *it) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw DataError("edges must be [parent, child] name pairs");
      const VariableId p = lookup(net, e[0].get<std::string>(), "edges");
      const VariableId c = lookup(net, e[1].get<std::string>(), "edges");
      net.parents[c].push_back(p);
    }
  }
  if (auto it = doc.find("cpts"); it != doc.end()) {
    for (const auto& [name, table] : it->items()) {
      const VariableId head = lookup(net, name, "cpts");
      net.cpts.push_back({head, net.parents[head], numbers(table, "cpt of " + name)});
    }
  }
  if (auto it = doc.find("densities"); it != doc.end()) {
    for (const auto& [name, spec] : it->items()) {
      const VariableId head = lookup(net, name, "densities");
      ClgSpec d;
      d.head = head;
      for (VariableId p : net.parents[head])
        (net.is_discrete(p) ? d.discrete_tail : d.continuous_tail).push_back(p);
      const std::string context = "density of " + name;
      d.alpha = numbers(field(spec, "alpha", context), context + " alpha");
      d.sigma2 = numbers(field(spec, "sigma2", context), context + " sigma2");
      if (auto b = spec.find("beta"); b != spec.end()) {
        if (!b->is_array()) throw DataError(context + " beta must be an array of arrays");
        for (const auto& row : *b) d.beta.push_back(numbers(row, context + " beta"));
      } else {
        d.beta.assign(d.alpha.size(), {});
      }
      net.densities.push_back(std::move(d));
    }
  }
  return net;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

}  // namespace

Network parse_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return build(doc);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad network file: ") + e.what());
  }
}

std::string format_violation(const Network& net, const Violation& v) {
  std::string out = v.code;
  if (v.variable && *v.variable < net.size()) out += " [" + net.variable(*v.variable).name + "]";
  return out + ": " + v.message;
}

Network load_network(const std::string& text) {
  Network net = parse_network(text);
  const auto report = validate_network(net);
  if (!report.empty()) {
    std::string msg = "invalid network:";
    for (const auto& v : report) msg += "\n  " + format_violation(net, v);
    throw DataError(msg);
  }
  return net;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Network load_network_file(const std::string& path) { return load_network(read_file(path)); }

std::string serialize_network(const Network& net) {
  json doc;
  json vars = json::array();
  for (const auto& v : net.variables) {
    json j;
    j["name"] = v.name;
    j["kind"] = v.is_discrete() ? "discrete" : "continuous";
    if (v.is_discrete()) j["states"] = v.states;
    vars.push_back(std::move(j));
  }
  doc["variables"] = std::move(vars);
  json edges = json::array();
  for (VariableId c = 0; c < net.size(); ++c)
    for (VariableId p : net.parents[c]) edges.push_back({net.variable(p).name, net.variable(c).name});
  doc["edges"] = std::move(edges);
  json cpts = json::object();
  for (VariableId v : net.discrete_ids())
    if (const auto* cpt = net.cpt_of(v)) cpts[net.variable(v).name] = cpt->table;
  doc["cpts"] = std::move(cpts);
  json densities = json::object();
  for (VariableId v : net.continuous_ids()) {
    const auto* d = net.density_of(v);
    if (!d) continue;
    json j;
    j["alpha"] = d->alpha;
    j["beta"] = d->beta;
    j["sigma2"] = d->sigma2;
    densities[net.variable(v).name] = std::move(j);
  }
  doc["densities"] = std::move(densities);
  return doc.dump(2) + "\n";
}

void add_evidence(const Network& net, Evidence& evidence, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) throw DataError("evidence item '" + item + "' is not NAME=VALUE");
  const std::string name = item.substr(0, eq);
  const std::string value = item.substr(eq + 1);
  const auto id = net.find(name);
  if (!id) throw DataError("evidence on unknown variable '" + name + "'");
  if (evidence.contains(*id)) throw DataError("variable " + name + " observed twice");
  const auto& var = net.variable(*id);
  if (var.is_discrete()) {
    const auto it = std::find(var.states.begin(), var.states.end(), value);
    if (it == var.states.end()) throw DataError("variable " + name + " has no state '" + value + "'");
    evidence.discrete[*id] = static_cast<std::size_t>(it - var.states.begin());
  } else {
    errno = 0;
    char* end = nullptr;
    const double y = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0' || errno == ERANGE)
      throw DataError("evidence value '" + value + "' for " + name + " is not a real number");
    evidence.continuous[*id] = y;
  }
}

Evidence parse_evidence(const Network& net, const std::vector<std::string>& items) {
  Evidence evidence;
  for (const auto& item : items) add_evidence(net, evidence, item);
  check_evidence(net, evidence);
  return evidence;
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_query_result(const Network& net, const QueryResult& result) {
  std::ostringstream out;
  out << "{\n  \"discrete\": {";
  for (std::size_t k = 0; k < result.discrete.size(); ++k) {
    const auto& [id, table] = result.discrete[k];
    const auto& var = net.variable(id);
    out << (k ? "," : "") << "\n    " << quoted(var.name) << ": {";
    for (std::size_t s = 0; s < table.size(); ++s)
      out << (s ? ", " : "") << quoted(var.states.at(s)) << ": " << format_number(table[s]);
    out << "}";
  }
  out << (result.discrete.empty() ? "" : "\n  ") << "},\n  \"continuous\": {";
  for (std::size_t k = 0; k < result.continuous.size(); ++k) {
    const auto& [id, mixture] = result.continuous[k];
    const auto canonical = mixture.collapsed();
    out << (k ? "," : "") << "\n    " << quoted(net.variable(id).name) << ": {\"mean\": "
        << format_number(canonical.mean()) << ", \"variance\": " << format_number(canonical.variance())
        << ", \"components\": [";
    for (std::size_t c = 0; c < canonical.components.size(); ++c) {
      const auto& comp = canonical.components[c];
      out << (c ? ", " : "") << "{\"weight\": " << format_number(comp.weight)
          << ", \"mean\": " << format_number(comp.mean) << ", \"variance\": " << format_number(comp.variance)
          << "}";
    }
    out << "]}";
  }
  out << (result.continuous.empty() ? "" : "\n  ") << "}\n}\n";
  return out.str();
}

}  // namespace clg
