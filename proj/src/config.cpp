#include "ffcorr/config.hpp"

#include <charconv>
#include <chrono>
#include <thread>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "ffcorr/error.hpp"
#include "ffcorr/report_table.hpp"

namespace ffcorr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

unsigned parse_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ValidationError("'" + std::string(key) + "' expects a number, got '" + s + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ValidationError("'" + std::string(key) + "' expects true or false");
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    out.emplace_back(trim(text.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

NRange parse_n_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) throw ValidationError("n_range expects lo:hi or lo:hi:step");
  NRange r{parse_unsigned("n_range", parts[0]), parse_unsigned("n_range", parts[1]), 1};
  if (parts.size() == 3) r.step = parse_unsigned("n_range", parts[2]);
  if (r.lo < 1 || r.lo > r.hi || r.step == 0) throw ValidationError("n_range needs 1 <= lo <= hi and step >= 1");
  return r;
}

std::vector<double> parse_t_grid(std::string_view text) {
  text = trim(text);
  if (text.empty()) return {};
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError("t_grid expects lo:hi:step or a comma list");
    const double lo = parse_real("t_grid", parts[0]), hi = parse_real("t_grid", parts[1]);
    const double step = parse_real("t_grid", parts[2]);
    if (!(step > 0.0) || hi < lo) throw ValidationError("t_grid needs lo <= hi and step > 0");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>((hi - lo) / step + 1e-9);
    for (std::size_t i = 0; i <= count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
  }
  std::vector<double> grid;
  for (const auto& part : split(text, ',')) grid.push_back(parse_real("t_grid", part));
  return grid;
}

void set_config_value(ExperimentConfig& c, std::string_view raw_key, std::string_view raw_value) {
  const std::string key(trim(raw_key));
  const std::string_view value = trim(raw_value);
  if (key == "p") {
    c.p = parse_unsigned(key, value);
    FieldSpec check(c.p);
  } else if (key == "n") {
    c.n = parse_unsigned(key, value);
    if (*c.n < 1) throw ValidationError("n must be at least 1");
  } else if (key == "n_range") {
    c.n_range = parse_n_range(value);
  } else if (key == "domain") {
    if (value != "monic" && value != "prime") throw ValidationError("domain must be monic or prime");
    c.domain = std::string(value);
  } else if (key == "functions") {
    c.functions = split(value, ';');
  } else if (key == "shifts") {
    c.shifts = split(value, ';');
  } else if (key == "gamma") {
    c.gamma = parse_unsigned(key, value);
  } else if (key == "depth") {
    c.depth = parse_unsigned(key, value);
  } else if (key == "cutoff") {
    c.cutoff = parse_unsigned(key, value);
  } else if (key == "t_grid") {
    c.t_grid = parse_t_grid(value);
  } else if (key == "output") {
    c.output = std::string(value);
  } else if (key == "cache_dir") {
    c.cache_dir = std::string(value);
  } else if (key == "partitions") {
    c.partitions = parse_unsigned(key, value);
    if (c.partitions < 1) throw ValidationError("partitions must be at least 1");
  } else if (key == "max_deg") {
    c.max_deg = parse_unsigned(key, value);
  } else if (key == "poly") {
    c.poly = std::string(value);
  } else if (key == "y") {
    c.y = parse_unsigned(key, value);
  } else if (key == "bound_constant") {
    c.bound_constant = parse_real(key, value);
  } else if (key == "bv_t") {
    c.bv_t = parse_real(key, value);
  } else if (key == "timing") {
    c.timing = parse_bool(key, value);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  auto opt = [&](const char* key, const std::optional<unsigned>& v) {
    if (v) os << key << '=' << *v << '\n';
  };
  os << "p=" << c.p << '\n';
  opt("n", c.n);
  if (c.n_range) os << "n_range=" << c.n_range->lo << ':' << c.n_range->hi << ':' << c.n_range->step << '\n';
  os << "domain=" << c.domain << '\n';
  if (!c.functions.empty()) os << "functions=" << join(c.functions, ';') << '\n';
  if (!c.shifts.empty()) os << "shifts=" << join(c.shifts, ';') << '\n';
  opt("gamma", c.gamma);
  opt("depth", c.depth);
  opt("cutoff", c.cutoff);
  if (!c.t_grid.empty()) {
    os << "t_grid=";
    for (std::size_t i = 0; i < c.t_grid.size(); ++i) os << (i ? "," : "") << format_double(c.t_grid[i]);
    os << '\n';
  }
  if (!c.output.empty()) os << "output=" << c.output << '\n';
  if (!c.cache_dir.empty()) os << "cache_dir=" << c.cache_dir << '\n';
  os << "partitions=" << c.partitions << '\n';
  opt("max_deg", c.max_deg);
  if (!c.poly.empty()) os << "poly=" << c.poly << '\n';
  opt("y", c.y);
  os << "bound_constant=" << format_double(c.bound_constant) << '\n';
  os << "bv_t=" << format_double(c.bv_t) << '\n';
  os << "timing=" << (c.timing ? "true" : "false") << '\n';
  return os.str();
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    set_config_value(c, body.substr(0, eq), body.substr(eq + 1));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::filesystem::path cache_directory(const ExperimentConfig& config) {
  if (!config.cache_dir.empty()) return config.cache_dir;
  if (const char* env = std::getenv("FFCORR_CACHE_DIR"); env && *env) return env;
  return ".ffcorr-cache";
}

IrreducibleTable cached_table(const ExperimentConfig& config, unsigned min_deg, std::ostream* log) {
  const FieldSpec field(config.p);
  min_deg = std::max(min_deg, 1u);
  const std::filesystem::path dir = cache_directory(config);
  const std::regex pattern("irr_p" + std::to_string(config.p) + "_d([0-9]+)\\.bin");

  std::optional<std::pair<unsigned, std::filesystem::path>> best;
  std::error_code ec;
  if (std::filesystem::is_directory(dir, ec)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
      std::smatch m;
      const std::string name = entry.path().filename().string();
      if (!std::regex_match(name, m, pattern)) continue;
      const unsigned d = static_cast<unsigned>(std::stoul(m[1].str()));
      if (d >= min_deg && (!best || d < best->first)) best = {d, entry.path()};
    }
  }
  if (best) {
    try {
      return IrreducibleTable::load(best->second);
    } catch (const std::exception& e) {
      if (log) *log << "ignoring unusable cache " << best->second.string() << ": " << e.what() << '\n';
    }
  }
  IrreducibleTable table = IrreducibleTable::build(field, min_deg);
  try {
    store_table(config, table);
  } catch (const std::exception& e) {
    if (log) *log << "could not write table cache: " << e.what() << '\n';
  }
  return table;
}

std::filesystem::path store_table(const ExperimentConfig& config, const IrreducibleTable& table) {
  const std::filesystem::path dir = cache_directory(config);
  std::filesystem::create_directories(dir);
  const auto final_path = dir / ("irr_p" + std::to_string(table.field().p()) + "_d" +
                                 std::to_string(table.max_deg()) + ".bin");
  // Unique temporary name so concurrent runs never read a partial file.
  auto tmp = final_path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) ^
                                 static_cast<std::size_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
  table.save(tmp);
  std::filesystem::rename(tmp, final_path);
  return final_path;
}

}  // namespace ffcorr
