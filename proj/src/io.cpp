#include "isingdual/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace isingdual::io {

ParseError::ParseError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string model_to_json(const IsingModel& model) {
  std::ostringstream out;
  out << "{\n  \"schema_version\": \"" << kSchemaVersion << "\",\n";
  out << "  \"domain\": \"" << to_string(model.domain()) << "\",\n";
  out << "  \"p\": " << model.p() << ",\n";
  out << "  \"alpha\": [";
  for (int i = 0; i < model.p(); ++i) out << (i ? ", " : "") << format_real(model.alpha(i));
  out << "],\n  \"beta_upper\": [";
  bool first = true;
  for (int i = 0; i < model.p(); ++i) {
    for (int j = i + 1; j < model.p(); ++j) {
      if (model.beta(i, j) == 0.0) continue;
      out << (first ? "\n" : ",\n") << "    {\"i\": " << i << ", \"j\": " << j
          << ", \"value\": " << format_real(model.beta(i, j)) << "}";
      first = false;
    }
  }
  out << (first ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

IsingModel model_from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed model JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("model file must be a JSON object");
    for (const char* key : {"schema_version", "domain", "p", "alpha", "beta_upper"})
      if (!doc.contains(key)) throw ParseError(std::string("model file lacks \"") + key + "\"");
    const auto version = doc.at("schema_version").get<std::string>();
    if (version != kSchemaVersion) throw ParseError("unsupported schema_version " + version);

    Domain domain;
    try {
      domain = parse_domain(doc.at("domain").get<std::string>());
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
    const int p = doc.at("p").get<int>();
    if (p < 1) throw ParseError("p must be positive");
    const auto& alpha_json = doc.at("alpha");
    if (!alpha_json.is_array() || static_cast<int>(alpha_json.size()) != p)
      throw ParseError("alpha must be an array of length p");
    Eigen::VectorXd alpha(p);
    for (int i = 0; i < p; ++i) alpha(i) = alpha_json[i].get<double>();

    Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(p, p);
    std::set<std::pair<int, int>> seen;
    for (const auto& entry : doc.at("beta_upper")) {
      const int i = entry.at("i").get<int>();
      const int j = entry.at("j").get<int>();
      if (!(0 <= i && i < j && j < p))
        throw ParseError("beta_upper entry (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") violates 0 <= i < j < p");
      if (!seen.emplace(i, j).second)
        throw ParseError("duplicate beta_upper entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      beta(i, j) = beta(j, i) = entry.at("value").get<double>();
    }
    return IsingModel(domain, std::move(alpha), std::move(beta));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad model field: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

IsingModel read_model(const std::filesystem::path& path) { return model_from_json(read_text(path)); }

void write_model(const std::filesystem::path& path, const IsingModel& model) {
  write_text(path, model_to_json(model));
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

long long parse_integer(const std::string& cell, int line) {
  if (cell.empty()) throw ParseError("empty cell", line);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(cell.c_str(), &end, 10);
  if (*end != '\0' || errno != 0) throw ParseError("'" + cell + "' is not an integer", line);
  return v;
}

}  // namespace

Dataset parse_data_csv(std::string_view text, Domain domain) {
  std::vector<std::string> header;
  int header_line = 0;
  std::vector<std::pair<std::vector<int>, std::int64_t>> entries;
  bool counts_format = false;
  int p = 0;
  int zero_line = 0, minus_one_line = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    if (trim(raw).empty()) continue;
    auto cells = split_row(raw);
    if (header.empty()) {
      header = std::move(cells);
      header_line = line;
      counts_format = header.back() == "count";
      p = static_cast<int>(header.size()) - (counts_format ? 1 : 0);
      if (p < 1) throw ParseError("header names no variables", line);
      continue;
    }
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " columns, found " +
                       std::to_string(cells.size()), line);
    }
    std::vector<int> values(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) {
      const long long v = parse_integer(cells[k], line);
      if (v != 1 && v != 0 && v != -1) {
        throw ParseError("value " + cells[k] + " in column '" + header[k] + "' is not a binary label", line);
      }
      // The file may use either coding; its low label maps onto the requested domain's low value.
      if (v != 1) {
        int& seen = v == 0 ? zero_line : minus_one_line;
        const int other_seen = v == 0 ? minus_one_line : zero_line;
        if (other_seen) {
          throw ParseError("file mixes 0 and -1 labels (the other first appears on line " +
                               std::to_string(other_seen) + ")", line);
        }
        if (!seen) seen = line;
      }
      values[k] = v == 1 ? 1 : low_value(domain);
    }
    std::int64_t count = 1;
    if (counts_format) {
      count = parse_integer(cells.back(), line);
      if (count < 1) throw ParseError("counts must be positive integers", line);
    }
    entries.emplace_back(std::move(values), count);
  }
  if (header.empty()) throw ParseError("no observations");
  if (entries.empty()) throw ParseError("no observations", header_line);
  return Dataset::from_counts(domain, p, entries);
}

Dataset read_data(const std::filesystem::path& path, Domain domain) {
  return parse_data_csv(read_text(path), domain);
}

namespace {
std::string header_row(int p, bool with_count) {
  std::string h;
  for (int i = 0; i < p; ++i) h += (i ? ",V" : "V") + std::to_string(i + 1);
  if (with_count) h += ",count";
  return h + "\n";
}
}  // namespace

std::string data_to_counts_csv(const Dataset& data) {
  std::string out = header_row(data.p(), true);
  for (const auto& [s, c] : data.counts()) {
    for (int v : s.values()) out += std::to_string(v) + ",";
    out += std::to_string(c) + "\n";
  }
  return out;
}

std::string data_to_matrix_csv(const Dataset& data) {
  std::string out = header_row(data.p(), false);
  for (const auto& row : data.rows()) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + std::to_string(row[k]);
    out += "\n";
  }
  return out;
}

std::string histogram_csv(const TrajectoryStats& stats) {
  std::string out = "count,frequency\n";
  for (std::size_t k = 0; k < stats.histogram.size(); ++k)
    out += std::to_string(k) + "," + format_real(stats.histogram[k]) + "\n";
  return out;
}

}  // namespace isingdual::io
