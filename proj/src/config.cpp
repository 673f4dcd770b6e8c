#include "lpcm/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "lpcm/number_format.hpp"

namespace lpcm {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

struct Value {
  std::optional<double> number;
  std::optional<std::string> text;
  int line = 0;
};

using Table = std::map<std::string, Value>;

const std::set<std::string> kTables = {"converter", "filter", "interference_mode", "sim"};
const std::map<std::string, std::set<std::string>> kKeys = {
    {"converter", {"m1", "m2", "t_off", "t_on_min", "i_max", "i_c"}},
    {"filter", {"tau"}},
    {"interference_mode", {"phase"}},
    {"sim", {"dt_max", "n_cycles", "tol", "eps"}},
    {"interference", {"amp", "omega", "phase"}},
};

class Parser {
 public:
  Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  void run() {
    std::istringstream in{std::string(text_)};
    std::string raw;
    int lineno = 0;
    Table* current = nullptr;
    std::string current_name;
    while (std::getline(in, raw)) {
      ++lineno;
      const auto line = trim(strip_comment(raw));
      if (line.empty()) continue;
      if (line.starts_with("[[")) {
        if (!line.ends_with("]]")) fail(lineno, "unterminated array-of-tables header");
        const std::string name(trim(line.substr(2, line.size() - 4)));
        if (name != "interference") fail(lineno, "unknown array of tables [[" + name + "]]");
        tones_.emplace_back();
        current = &tones_.back();
        current_name = name;
      } else if (line.starts_with("[")) {
        if (!line.ends_with("]")) fail(lineno, "unterminated table header");
        const std::string name(trim(line.substr(1, line.size() - 2)));
        if (!kTables.contains(name)) fail(lineno, "unknown table [" + name + "]");
        if (tables_.contains(name)) fail(lineno, "duplicate table [" + name + "]");
        current = &tables_[name];
        current_name = name;
      } else {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(lineno, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const auto rhs = trim(line.substr(eq + 1));
        if (current == nullptr) fail(lineno, "key '" + key + "' outside of any table");
        if (!kKeys.at(current_name).contains(key))
          fail(lineno, "unknown key '" + key + "' in [" + current_name + "]");
        if (current->contains(key)) fail(lineno, "duplicate key '" + key + "'");
        (*current)[key] = parse_value(rhs, key, lineno);
      }
    }
  }

  Config build() const {
    Config cfg;
    const Table empty;
    const Table& conv = find("converter", empty);
    cfg.converter.m1 = number(conv, "m1");
    cfg.converter.m2 = number(conv, "m2");
    cfg.converter.t_off = number(conv, "t_off");
    cfg.converter.t_on_min = number(conv, "t_on_min");
    cfg.converter.i_max = number(conv, "i_max");
    cfg.converter.i_c = conv.contains("i_c") ? number(conv, "i_c") : cfg.converter.i_max;

    cfg.filter.tau = number(find("filter", empty), "tau");

    for (std::size_t i = 0; i < tones_.size(); ++i) {
      const Table& t = tones_[i];
      Tone tone;
      tone.amp = number(t, "amp");
      tone.omega = number(t, "omega");
      tone.phase = t.contains("phase") ? number(t, "phase") : 0.0;
      cfg.interference.components.push_back(tone);
    }

    const Table& mode = find("interference_mode", empty);
    if (mode.contains("phase")) {
      const Value& v = mode.at("phase");
      if (!v.text) fail(v.line, "phase must be a string");
      if (*v.text == "locked") {
        cfg.interference.phase_mode = PhaseMode::locked;
      } else if (*v.text == "freerun") {
        cfg.interference.phase_mode = PhaseMode::freerun;
      } else {
        throw ValidationError("phase", "must be \"locked\" or \"freerun\"");
      }
    }

    const Table& sim = find("sim", empty);
    if (sim.contains("dt_max")) cfg.sim.dt_max = number(sim, "dt_max");
    if (sim.contains("tol")) cfg.sim.tol = number(sim, "tol");
    if (sim.contains("eps")) cfg.sim.eps = number(sim, "eps");
    if (sim.contains("n_cycles")) {
      const double n = number(sim, "n_cycles");
      if (n < 1 || n != std::floor(n) || n > 1e9) throw ValidationError("n_cycles", "must be a positive integer");
      cfg.sim.n_cycles = static_cast<int>(n);
    }

    validate(cfg.converter);
    validate(cfg.filter);
    validate(cfg.interference);
    if (!(cfg.sim.dt_max >= 0.0) || std::isinf(cfg.sim.dt_max)) throw ValidationError("dt_max", "must be finite and >= 0");
    if (!(cfg.sim.tol >= 0.0) || std::isinf(cfg.sim.tol)) throw ValidationError("tol", "must be finite and >= 0");
    if (!(cfg.sim.eps > 0.0) || std::isinf(cfg.sim.eps)) throw ValidationError("eps", "must be positive");
    return cfg;
  }

 private:
  [[noreturn]] void fail(int line, const std::string& what) const { throw ConfigError(source_, line, what); }

  Value parse_value(std::string_view rhs, const std::string& key, int line) const {
    Value v;
    v.line = line;
    if (rhs.starts_with('"')) {
      if (rhs.size() < 2 || !rhs.ends_with('"')) fail(line, "unterminated string for '" + key + "'");
      v.text = std::string(rhs.substr(1, rhs.size() - 2));
      return v;
    }
    double x = 0.0;
    if (!parse_number(rhs, x)) fail(line, "value of '" + key + "' is not a number");
    v.number = x;
    return v;
  }

  const Table& find(const std::string& name, const Table& fallback) const {
    const auto it = tables_.find(name);
    return it == tables_.end() ? fallback : it->second;
  }

  double number(const Table& t, const std::string& key) const {
    const auto it = t.find(key);
    if (it == t.end()) throw ValidationError(key, "missing required key");
    if (!it->second.number) fail(it->second.line, "value of '" + key + "' must be numeric");
    return *it->second.number;
  }

  std::string_view text_;
  std::string source_;
  std::map<std::string, Table> tables_;
  std::vector<Table> tones_;
};

}  // namespace

Config parse_config(std::string_view text, const std::string& source) {
  Parser p(text, source);
  p.run();
  return p.build();
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string to_canonical(const Config& cfg) {
  std::ostringstream out;
  const auto kv = [&](const char* key, double v) { out << key << " = " << format_number(v) << '\n'; };
  out << "[converter]\n";
  kv("m1", cfg.converter.m1);
  kv("m2", cfg.converter.m2);
  kv("t_off", cfg.converter.t_off);
  kv("t_on_min", cfg.converter.t_on_min);
  kv("i_max", cfg.converter.i_max);
  kv("i_c", cfg.converter.i_c);
  out << "\n[filter]\n";
  kv("tau", cfg.filter.tau);
  for (const auto& c : cfg.interference.components) {
    out << "\n[[interference]]\n";
    kv("amp", c.amp);
    kv("omega", c.omega);
    kv("phase", c.phase);
  }
  out << "\n[interference_mode]\nphase = \"" << to_string(cfg.interference.phase_mode) << "\"\n";
  out << "\n[sim]\n";
  kv("dt_max", cfg.sim.dt_max);
  out << "n_cycles = " << cfg.sim.n_cycles << '\n';
  kv("tol", cfg.sim.tol);
  kv("eps", cfg.sim.eps);
  return out.str();
}

}  // namespace lpcm
