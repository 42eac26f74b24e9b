#include "mixprof/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mixprof::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) fields.push_back(field);
  return fields;
}

// "# key=value key=value" header comments used by the CSV writers.
void parse_header_pairs(const std::string& line,
                        std::map<std::string, std::string>& meta) {
  std::istringstream stream(line.substr(1));
  std::string token;
  while (stream >> token) {
    const auto eq = token.find('=');
    if (eq != std::string::npos) meta[token.substr(0, eq)] = token.substr(eq + 1);
  }
}

json int_matrix_columns(const IntMatrix& m) {
  json cols = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    json col = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    cols.push_back(std::move(col));
  }
  return cols;
}

IntMatrix int_matrix_from_columns(const json& cols, const std::filesystem::path& path) {
  if (!cols.is_array() || cols.empty()) fail(path, "expected non-empty column array");
  const auto n_cols = static_cast<Eigen::Index>(cols.size());
  const auto n_rows = static_cast<Eigen::Index>(cols[0].size());
  IntMatrix m(n_rows, n_cols);
  for (Eigen::Index c = 0; c < n_cols; ++c) {
    const auto& col = cols[static_cast<std::size_t>(c)];
    if (static_cast<Eigen::Index>(col.size()) != n_rows)
      fail(path, "ragged column array");
    for (Eigen::Index r = 0; r < n_rows; ++r)
      m(r, c) = col[static_cast<std::size_t>(r)].get<int>();
  }
  return m;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::optional<Format> format_from_string(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  return std::nullopt;
}

void save_trace(const std::filesystem::path& path, const MixConfig& config,
                const ObservationPair& obs, Format format) {
  auto out = open_out(path);
  if (format == Format::Json) {
    json doc;
    doc["format"] = "mixprof-trace";
    doc["version"] = 1;
    doc["n_users"] = config.n_users;
    doc["threshold"] = config.threshold;
    doc["rounds"] = config.rounds;
    doc["seed"] = config.seed;
    doc["x"] = int_matrix_columns(obs.x);
    doc["y"] = int_matrix_columns(obs.y);
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# mixprof-trace v1\n";
  out << "# n_users=" << config.n_users << " threshold=" << config.threshold
      << " rounds=" << config.rounds << " seed=" << config.seed << "\n";
  for (Eigen::Index r = 0; r < obs.x.rows(); ++r) {
    for (Eigen::Index c = 0; c < obs.x.cols(); ++c) {
      if (c) out << ',';
      out << obs.x(r, c);
    }
    for (Eigen::Index c = 0; c < obs.y.cols(); ++c) out << ',' << obs.y(r, c);
    out << '\n';
  }
}

std::pair<MixConfig, ObservationPair> load_trace(const std::filesystem::path& path,
                                                 Format format) {
  auto in = open_in(path);
  MixConfig config;
  ObservationPair obs;

  if (format == Format::Json) {
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      fail(path, e.what());
    }
    if (doc.value("format", "") != "mixprof-trace")
      fail(path, "not a mixprof trace file");
    config.n_users = doc.at("n_users").get<int>();
    config.threshold = doc.at("threshold").get<int>();
    config.rounds = doc.at("rounds").get<std::int64_t>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    obs.x = int_matrix_from_columns(doc.at("x"), path);
    obs.y = int_matrix_from_columns(doc.at("y"), path);
    return {config, obs};
  }

  std::map<std::string, std::string> meta;
  std::vector<std::vector<int>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      parse_header_pairs(line, meta);
      continue;
    }
    std::vector<int> row;
    for (const auto& field : split(line, ',')) {
      try {
        row.push_back(std::stoi(field));
      } catch (const std::exception&) {
        fail(path, "line " + std::to_string(line_no) + ": bad count '" + field + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  for (const char* key : {"n_users", "threshold", "rounds", "seed"})
    if (!meta.count(key)) fail(path, std::string("missing header field ") + key);
  config.n_users = std::stoi(meta["n_users"]);
  config.threshold = std::stoi(meta["threshold"]);
  config.rounds = std::stoll(meta["rounds"]);
  config.seed = std::stoull(meta["seed"]);

  const auto n = static_cast<Eigen::Index>(config.n_users);
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  obs.x.resize(n_rows, n);
  obs.y.resize(n_rows, n);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != 2 * n)
      fail(path, "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                     " fields, expected " + std::to_string(2 * n));
    for (Eigen::Index c = 0; c < n; ++c) {
      obs.x(r, c) = row[static_cast<std::size_t>(c)];
      obs.y(r, c) = row[static_cast<std::size_t>(n + c)];
    }
  }
  return {config, obs};
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    for (const auto& field : split(line, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        fail(path, "line " + std::to_string(line_no) + ": bad value '" + field + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(path, "line " + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(path, "empty matrix");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

void save_estimates(const std::filesystem::path& path, const EstimatedProfiles& est,
                    std::uint64_t seed, Format format) {
  auto out = open_out(path);
  if (format == Format::Json) {
    json doc;
    doc["format"] = "mixprof-estimates";
    doc["version"] = 1;
    doc["attack"] = est.attack_name;
    doc["seed"] = seed;
    doc["n_users"] = est.est.cols();
    doc["undefined_users"] = est.undefined_users;
    if (est.condition_number) doc["condition_number"] = *est.condition_number;
    json rows = json::array();
    for (Eigen::Index j = 0; j < est.est.rows(); ++j) {
      json row = json::array();
      for (Eigen::Index i = 0; i < est.est.cols(); ++i) row.push_back(est.est(j, i));
      rows.push_back(std::move(row));
    }
    doc["estimates"] = std::move(rows);  // NaN columns serialize as null
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# mixprof-estimates v1\n";
  out << "# attack=" << est.attack_name << " seed=" << seed
      << " n_users=" << est.est.cols() << "\n";
  if (!est.undefined_users.empty()) {
    out << "# undefined_users=";
    bool first = true;
    for (int u : est.undefined_users) {
      if (!first) out << ',';
      out << u;
      first = false;
    }
    out << "\n";
  }
  if (est.condition_number)
    out << "# condition_number=" << format_double(*est.condition_number) << "\n";
  for (Eigen::Index j = 0; j < est.est.rows(); ++j) {
    for (Eigen::Index i = 0; i < est.est.cols(); ++i) {
      if (i) out << ',';
      out << format_double(est.est(j, i));
    }
    out << '\n';
  }
}

void save_theory_report(const std::filesystem::path& path, const TheoryReport& report,
                        Format format) {
  auto out = open_out(path);
  const auto n = report.uniformities.size();
  if (format == Format::Json) {
    json doc;
    doc["format"] = "mixprof-theory";
    doc["version"] = 1;
    doc["avg_uniformity_lsda"] = report.avg_uniformity_lsda;
    auto to_array = [](const Vector& v) {
      json arr = json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
      return arr;
    };
    doc["per_user_mse_lsda"] = to_array(report.per_user_mse_lsda);
    doc["per_user_mse_sda2"] = to_array(report.per_user_mse_sda2);
    doc["avg_uniformity_sda2_per_user"] = to_array(report.avg_uniformity_sda2_per_user);
    doc["uniformities"] = to_array(report.uniformities);
    doc["background_uniformities"] = to_array(report.background_uniformities);
    doc["avg_mse_lsda"] = report.per_user_mse_lsda.mean();
    doc["avg_mse_sda2"] = report.per_user_mse_sda2.mean();
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# mixprof-theory v1\n";
  out << "# avg_uniformity_lsda=" << format_double(report.avg_uniformity_lsda) << "\n";
  out << "user,mse_lsda,mse_sda2,uniformity,background_uniformity,avg_uniformity_sda2\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    out << i << ',' << format_double(report.per_user_mse_lsda(i)) << ','
        << format_double(report.per_user_mse_sda2(i)) << ','
        << format_double(report.uniformities(i)) << ','
        << format_double(report.background_uniformities(i)) << ','
        << format_double(report.avg_uniformity_sda2_per_user(i)) << '\n';
  }
}

}  // namespace mixprof::io
