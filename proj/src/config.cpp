#include "liek/config.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace liek {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}' ||
        c == '[' || c == ']' || c == ',' || c == '=' || c == '"' || c == '#')
      return true;
  }
  return false;
}

std::string quote_if_needed(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

struct Tokenizer {
  explicit Tokenizer(const std::string& text) {
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
      const char c = text[i];
      if (c == '#') {
        while (i < n && text[i] != '\n') ++i;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '{' || c == '}' || c == '[' || c == ']' || c == ',' ||
                 c == '=') {
        tokens.emplace_back(1, c);
        ++i;
      } else if (c == '"') {
        std::string tok;
        ++i;
        while (i < n && text[i] != '"') {
          if (text[i] == '\\' && i + 1 < n) ++i;
          tok += text[i++];
        }
        if (i >= n) throw std::invalid_argument("unterminated string literal");
        ++i;
        tokens.push_back(std::string(1, '\0') + tok);  // NUL marks quoting
      } else {
        std::string tok;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i])) &&
               std::string("{}[]=,#\"").find(text[i]) == std::string::npos)
          tok += text[i++];
        tokens.push_back(tok);
      }
    }
  }

  bool done() const { return pos >= tokens.size(); }
  const std::string& peek() const {
    if (done()) throw std::invalid_argument("unexpected end of config");
    return tokens[pos];
  }
  std::string next() {
    std::string t = peek();
    ++pos;
    if (!t.empty() && t[0] == '\0') t = t.substr(1);
    return t;
  }
  bool peek_is(const char* lit) const {
    return !done() && tokens[pos] == lit;
  }

  std::vector<std::string> tokens;
  size_t pos = 0;
};

double to_double(const std::string& tok, const std::string& key) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" +
                                tok + "'");
  }
  if (used != tok.size())
    throw std::invalid_argument("config key '" + key + "': bad number '" +
                                tok + "'");
  return v;
}

long long to_int(const std::string& tok, const std::string& key) {
  const double v = to_double(tok, key);
  const long long i = static_cast<long long>(v);
  if (static_cast<double>(i) != v)
    throw std::invalid_argument("config key '" + key + "': expected integer");
  return i;
}

bool to_bool(const std::string& tok, const std::string& key) {
  if (tok == "true") return true;
  if (tok == "false") return false;
  throw std::invalid_argument("config key '" + key + "': expected true/false");
}

std::vector<std::string> parse_list(Tokenizer& tz, const std::string& key) {
  if (tz.next() != "[")
    throw std::invalid_argument("config key '" + key + "': expected [list]");
  std::vector<std::string> out;
  if (tz.peek_is("]")) {
    tz.next();
    return out;
  }
  while (true) {
    out.push_back(tz.next());
    const std::string sep = tz.next();
    if (sep == "]") break;
    if (sep != ",")
      throw std::invalid_argument("config key '" + key +
                                  "': expected , or ] in list");
  }
  return out;
}

[[noreturn]] void unknown_key(const std::string& key) {
  throw std::invalid_argument("unknown config key: " + key);
}

void apply_scalar(RunConfig& c, const std::string& key,
                  const std::string& val) {
  if (key == "geometry.kind") {
    c.kind = model_kind_from_string(val);
  } else if (key == "geometry.n") {
    c.n = static_cast<int>(to_int(val, key));
  } else if (key == "geometry.window") {
    c.window = to_double(val, key);
  } else if (key == "geometry.scattering_c") {
    c.scattering_c = to_double(val, key);
  } else if (key == "symbol") {
    c.symbol = val;
  } else if (key == "cutoff.r") {
    c.cutoff_r = to_double(val, key);
  } else if (key == "cutoff.profile") {
    c.cutoff_profile = val;
  } else if (key == "quantize.density_correction") {
    c.density_correction = to_bool(val, key);
  } else if (key == "flow.tol") {
    c.flow_tol = to_double(val, key);
  } else if (key == "suspended.z_period") {
    c.suspended_z_period = to_double(val, key);
  } else if (key == "suspended.n_z") {
    c.suspended_n_z = static_cast<int>(to_int(val, key));
  } else if (key == "out") {
    c.out_dir = val;
  } else if (key == "seed") {
    c.seed = static_cast<uint64_t>(to_int(val, key));
  } else if (key.rfind("tolerances.", 0) == 0) {
    c.tolerances[key.substr(11)] = to_double(val, key);
  } else {
    unknown_key(key);
  }
}

void apply_list(RunConfig& c, const std::string& key,
                const std::vector<std::string>& vals) {
  if (key == "suite") {
    c.suite = vals;
  } else if (key == "semiclassical.t_ladder") {
    c.semiclassical_t_ladder.clear();
    for (const auto& v : vals)
      c.semiclassical_t_ladder.push_back(to_double(v, key));
  } else {
    unknown_key(key);
  }
}

const char* kBlockNames[] = {"geometry",  "cutoff",        "quantize",
                             "flow",      "suspended",     "semiclassical",
                             "tolerances"};

bool is_block_name(const std::string& s) {
  for (const char* b : kBlockNames)
    if (s == b) return true;
  return false;
}

void parse_entries(Tokenizer& tz, RunConfig& c, const std::string& prefix) {
  while (!tz.done() && !tz.peek_is("}")) {
    const std::string key = tz.next();
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    if (tz.peek_is("{")) {
      if (!prefix.empty() || !is_block_name(key)) unknown_key(full);
      tz.next();
      parse_entries(tz, c, key);
      if (tz.next() != "}")
        throw std::invalid_argument("unclosed block: " + key);
      continue;
    }
    if (!tz.peek_is("="))
      throw std::invalid_argument("expected '=' after key: " + full);
    tz.next();
    if (tz.peek_is("[")) {
      apply_list(c, full, parse_list(tz, full));
    } else {
      apply_scalar(c, full, tz.next());
    }
  }
}

void apply_json_value(RunConfig& c, const std::string& key, const json& v) {
  if (v.is_array()) {
    std::vector<std::string> vals;
    for (const auto& e : v) {
      if (e.is_string())
        vals.push_back(e.get<std::string>());
      else
        vals.push_back(format_double(e.get<double>()));
    }
    apply_list(c, key, vals);
    return;
  }
  std::string val;
  if (v.is_string())
    val = v.get<std::string>();
  else if (v.is_boolean())
    val = v.get<bool>() ? "true" : "false";
  else if (v.is_number_integer())
    val = std::to_string(v.get<long long>());
  else if (v.is_number())
    val = format_double(v.get<double>());
  else
    throw std::invalid_argument("config key '" + key + "': unsupported type");
  apply_scalar(c, key, val);
}

}  // namespace

GeometryPtr RunConfig::make_geometry() const {
  ModelParams p;
  p.n = n;
  p.window = window;
  p.scattering_c = scattering_c;
  return make_model(kind, p);
}

RunConfig parse_config_text(const std::string& text) {
  Tokenizer tz(text);
  RunConfig c;
  parse_entries(tz, c, "");
  if (!tz.done()) throw std::invalid_argument("unexpected '}' in config");
  return c;
}

RunConfig parse_config_json(const std::string& text) {
  json root = json::parse(text);
  if (!root.is_object())
    throw std::invalid_argument("config JSON must be an object");
  RunConfig c;
  for (const auto& [key, value] : root.items()) {
    if (value.is_object()) {
      if (!is_block_name(key)) unknown_key(key);
      for (const auto& [sub, subval] : value.items())
        apply_json_value(c, key + "." + sub, subval);
    } else {
      apply_json_value(c, key, value);
    }
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' ? parse_config_json(text) : parse_config_text(text);
  }
  throw std::invalid_argument("empty config file: " + path);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "geometry {\n";
  out << "  kind = " << to_string(c.kind) << "\n";
  out << "  n = " << c.n << "\n";
  out << "  window = " << format_double(c.window) << "\n";
  out << "  scattering_c = " << format_double(c.scattering_c) << "\n";
  out << "}\n";
  out << "symbol = " << quote_if_needed(c.symbol) << "\n";
  out << "cutoff {\n  r = " << format_double(c.cutoff_r)
      << "\n  profile = " << quote_if_needed(c.cutoff_profile) << "\n}\n";
  out << "quantize {\n  density_correction = "
      << (c.density_correction ? "true" : "false") << "\n}\n";
  out << "flow {\n  tol = " << format_double(c.flow_tol) << "\n}\n";
  out << "suspended {\n  z_period = " << format_double(c.suspended_z_period)
      << "\n  n_z = " << c.suspended_n_z << "\n}\n";
  out << "semiclassical {\n  t_ladder = [";
  for (size_t i = 0; i < c.semiclassical_t_ladder.size(); ++i)
    out << (i ? ", " : "") << format_double(c.semiclassical_t_ladder[i]);
  out << "]\n}\n";
  out << "suite = [";
  for (size_t i = 0; i < c.suite.size(); ++i)
    out << (i ? ", " : "") << quote_if_needed(c.suite[i]);
  out << "]\n";
  out << "tolerances {\n";
  for (const auto& [name, tol] : c.tolerances)
    out << "  " << quote_if_needed(name) << " = " << format_double(tol)
        << "\n";
  out << "}\n";
  out << "out = " << quote_if_needed(c.out_dir) << "\n";
  out << "seed = " << c.seed << "\n";
  return out.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.kind == b.kind && a.n == b.n && a.window == b.window &&
         a.scattering_c == b.scattering_c && a.symbol == b.symbol &&
         a.cutoff_r == b.cutoff_r && a.cutoff_profile == b.cutoff_profile &&
         a.density_correction == b.density_correction &&
         a.flow_tol == b.flow_tol &&
         a.suspended_z_period == b.suspended_z_period &&
         a.suspended_n_z == b.suspended_n_z &&
         a.semiclassical_t_ladder == b.semiclassical_t_ladder &&
         a.suite == b.suite && a.tolerances == b.tolerances &&
         a.out_dir == b.out_dir && a.seed == b.seed;
}

}  // namespace liek
