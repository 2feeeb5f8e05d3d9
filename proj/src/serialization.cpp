#include "entlab/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "entlab/error.hpp"

namespace entlab {

std::string format_decimal(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_decimal(const Json& v) {
  if (v.is_number()) {
    return v.get<double>();
  }
  if (!v.is_string()) {
    throw ConfigError("expected a number or decimal string");
  }
  const auto& s = v.get_ref<const std::string&>();
  double out = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("malformed decimal: " + s);
  }
  return out;
}

Json to_json(const Pmf& p) {
  Json probs = Json::array();
  for (double v : p.probs()) {
    probs.push_back(format_decimal(v));
  }
  return Json{{"support", p.support_size()}, {"probs", std::move(probs)}};
}

Pmf pmf_from_json(const Json& j) {
  try {
    std::vector<double> probs;
    for (const auto& v : j.at("probs")) {
      probs.push_back(parse_decimal(v));
    }
    if (j.contains("support") && j.at("support").get<std::size_t>() != probs.size()) {
      throw ConfigError("Pmf JSON: support does not match probs length");
    }
    return Pmf(std::move(probs));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("Pmf JSON: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Json to_json(const JointPmf& j) {
  Json table = Json::array();
  for (const auto& row : j.table()) {
    table.push_back(Json::array({format_decimal(row[0]), format_decimal(row[1])}));
  }
  return Json{{"table", std::move(table)}};
}

JointPmf joint_from_json(const Json& j) {
  try {
    std::vector<JointPmf::Row> table;
    for (const auto& row : j.at("table")) {
      if (row.size() != 2) {
        throw ConfigError("JointPmf JSON: each row needs [p(x,0), p(x,1)]");
      }
      table.push_back({parse_decimal(row[0]), parse_decimal(row[1])});
    }
    return JointPmf(std::move(table));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("JointPmf JSON: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Json to_json(const HteldSpec& spec) {
  return Json{{"gamma", spec.gamma},
              {"eps", spec.eps},
              {"log2_alpha", spec.log2_alpha},
              {"log2_m", spec.log2_m},
              {"achieved_entropy", spec.achieved_entropy}};
}

Json to_json(const Hypothesis& h) {
  Json exceptions = Json::object();
  h.for_each_entry([&](Symbol x, Label label) {
    if (label != h.default_label()) {
      exceptions[std::to_string(x)] = label;
    }
  });
  return Json{{"exceptions", std::move(exceptions)}, {"default", h.default_label()}};
}

Hypothesis hypothesis_from_json(const Json& j) {
  try {
    const auto def = j.at("default").get<int>();
    if (def != 0 && def != 1) {
      throw ConfigError("Hypothesis JSON: default must be 0 or 1");
    }
    std::map<Symbol, Label> entries;
    for (const auto& [key, value] : j.at("exceptions").items()) {
      const auto label = value.get<int>();
      if (label != 0 && label != 1) {
        throw ConfigError("Hypothesis JSON: labels must be 0 or 1");
      }
      entries[std::stoull(key)] = static_cast<Label>(label);
    }
    return Hypothesis::from_entries(entries, static_cast<Label>(def));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("Hypothesis JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("Hypothesis JSON: ") + e.what());
  }
}

Json to_json(const Encoder& enc) {
  Json rows = Json::object();
  for (std::size_t x = 0; x < enc.x_count(); ++x) {
    Json row = Json::array();
    for (double v : enc.row(x)) {
      row.push_back(format_decimal(v));
    }
    rows[std::to_string(x)] = std::move(row);
  }
  return Json{{"k", enc.k()}, {"rows", std::move(rows)}, {"default_cell", enc.default_cell()}};
}

Encoder encoder_from_json(const Json& j) {
  try {
    const auto k = j.at("k").get<std::size_t>();
    const auto default_cell = j.value("default_cell", std::size_t{0});
    std::map<std::size_t, std::vector<double>> rows;
    for (const auto& [key, value] : j.at("rows").items()) {
      std::vector<double> row;
      for (const auto& v : value) {
        row.push_back(parse_decimal(v));
      }
      if (row.size() != k) {
        throw ConfigError("Encoder JSON: row length differs from k");
      }
      rows[std::stoull(key)] = std::move(row);
    }
    const std::size_t x_count = rows.empty() ? 0 : rows.rbegin()->first + 1;
    std::vector<double> cond(x_count * k, 0.0);
    for (std::size_t x = 0; x < x_count; ++x) {
      const auto it = rows.find(x);
      if (it == rows.end()) {
        if (default_cell >= k) {
          throw ConfigError("Encoder JSON: default cell outside 0..k-1");
        }
        cond[x * k + default_cell] = 1.0;
      } else {
        std::copy(it->second.begin(), it->second.end(), cond.begin() + static_cast<std::ptrdiff_t>(x * k));
      }
    }
    return Encoder(k, x_count, std::move(cond), default_cell);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("Encoder JSON: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("Encoder JSON: ") + e.what());
  }
}

Json to_json(const EncoderStats& stats) {
  return Json{{"i_xxhat", stats.i_x_xhat}, {"i_yxhat", stats.i_y_xhat}, {"h_xhat", stats.h_xhat}};
}

void write_dataset_csv(const Dataset& s, std::ostream& out) {
  out << "x,y\n";
  for (const auto& [x, y] : s.pairs) {
    out << x << ',' << static_cast<int>(y) << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,y") {
    throw ConfigError("dataset CSV: expected header x,y");
  }
  Dataset s;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto comma = line.find(',');
    Symbol x = 0;
    unsigned y = 0;
    const char* end = line.data() + line.size();
    const auto rx = std::from_chars(line.data(), line.data() + comma, x);
    const auto ry = comma == std::string::npos ? rx : std::from_chars(line.data() + comma + 1, end, y);
    if (comma == std::string::npos || rx.ec != std::errc() || rx.ptr != line.data() + comma ||
        ry.ec != std::errc() || ry.ptr != end || y > 1) {
      throw ConfigError("dataset CSV: malformed line " + std::to_string(line_no));
    }
    s.pairs.push_back({x, static_cast<Label>(y)});
  }
  return s;
}

Json dataset_sidecar(const Dataset& s) { return Json{{"seed", s.seed}, {"source_id", s.source_id}}; }

void save_dataset(const Dataset& s, const std::string& path) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) {
    throw Error("cannot write " + path);
  }
  write_dataset_csv(s, csv);
  std::ofstream side(path + ".json", std::ios::binary);
  if (!side) {
    throw Error("cannot write " + path + ".json");
  }
  side << dataset_sidecar(s).dump(2) << '\n';
}

Dataset load_dataset(const std::string& path) {
  std::ifstream csv(path, std::ios::binary);
  if (!csv) {
    throw ConfigError("cannot read " + path);
  }
  Dataset s = read_dataset_csv(csv);
  const Json side = read_json_file(path + ".json");
  try {
    s.seed = side.at("seed").get<std::uint64_t>();
    s.source_id = side.at("source_id").get<std::string>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("dataset sidecar: ") + e.what());
  }
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read " + path);
  }
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace entlab
