#include "netfrac/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "netfrac/number_format.hpp"

namespace netfrac {

namespace {

using nlohmann::json;

void append_row(std::string& out, const std::vector<double>& row) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (k > 0) out += ',';
    out += format_double(row[k]);
  }
  out += '\n';
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Eigen::Index state_size(const Trajectory& traj) {
  return traj.states.empty() ? 0 : traj.states.front().size();
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ContractError("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::string trajectory_csv(const Trajectory& traj) {
  const Eigen::Index n = state_size(traj);
  const bool heat = traj.model == Model::heat;
  std::string out = "t";
  for (Eigen::Index i = 1; i <= n; ++i) {
    out += heat ? ",p_" + std::to_string(i)
                : ",re_" + std::to_string(i) + ",im_" + std::to_string(i);
  }
  if (!heat) {
    for (Eigen::Index i = 1; i <= n; ++i) out += ",prob_" + std::to_string(i);
  }
  out += '\n';

  std::vector<double> row;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    row.assign(1, traj.times[k]);
    const auto& s = traj.states[k];
    for (Eigen::Index i = 0; i < n; ++i) {
      row.push_back(s(i).real());
      if (!heat) row.push_back(s(i).imag());
    }
    if (!heat) {
      const Eigen::VectorXd prob = traj.probabilities(k);
      row.insert(row.end(), prob.data(), prob.data() + prob.size());
    }
    append_row(out, row);
  }
  return out;
}

std::string trajectory_json(const Trajectory& traj) {
  const Eigen::Index n = state_size(traj);
  const bool heat = traj.model == Model::heat;
  json doc;
  doc["model"] = heat ? "heat" : "schrodinger";
  doc["t"] = traj.times;
  json re = json::array(), im = json::array(), prob = json::array();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<double> r(n), i(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      r[j] = traj.states[k](j).real();
      i[j] = traj.states[k](j).imag();
    }
    re.push_back(r);
    if (!heat) {
      im.push_back(i);
      const Eigen::VectorXd p = traj.probabilities(k);
      prob.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    }
  }
  if (heat) {
    doc["p"] = re;
  } else {
    doc["re"] = re;
    doc["im"] = im;
    doc["prob"] = prob;
  }
  return doc.dump() + '\n';
}

Trajectory parse_trajectory_csv(std::string_view text) {
  Trajectory traj;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  Eigen::Index n = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (line_no == 1) {
      if (fields.empty() || fields[0] != "t") throw ParseError("header must start with 't'", 1);
      columns = fields.size();
      const bool heat = columns < 2 || fields[1].starts_with("p_");
      traj.model = heat ? Model::heat : Model::schrodinger;
      if (heat) {
        n = static_cast<Eigen::Index>(columns - 1);
      } else {
        if ((columns - 1) % 3 != 0) throw ParseError("bad schrodinger header", 1);
        n = static_cast<Eigen::Index>((columns - 1) / 3);
      }
      continue;
    }
    if (fields.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::vector<double> values(fields.size());
    try {
      for (std::size_t k = 0; k < fields.size(); ++k) values[k] = parse_double(fields[k]);
    } catch (const ContractError& e) {
      throw ParseError(e.what(), line_no);
    }
    traj.times.push_back(values[0]);
    Eigen::VectorXcd state(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      state(i) = traj.model == Model::heat
                     ? std::complex<double>(values[1 + i], 0.0)
                     : std::complex<double>(values[1 + 2 * i], values[2 + 2 * i]);
    }
    traj.states.push_back(std::move(state));
  }
  if (line_no == 0) throw ParseError("empty trajectory file", 0);
  return traj;
}

Trajectory parse_trajectory_json(std::string_view text) {
  Trajectory traj;
  try {
    const json doc = json::parse(text);
    const std::string model = doc.at("model").get<std::string>();
    if (model != "heat" && model != "schrodinger") throw ParseError("unknown model " + model, 0);
    traj.model = model == "heat" ? Model::heat : Model::schrodinger;
    traj.times = doc.at("t").get<std::vector<double>>();
    const auto re = doc.at(traj.model == Model::heat ? "p" : "re")
                        .get<std::vector<std::vector<double>>>();
    std::vector<std::vector<double>> im;
    if (traj.model == Model::schrodinger) im = doc.at("im").get<std::vector<std::vector<double>>>();
    if (re.size() != traj.times.size() ||
        (traj.model == Model::schrodinger && im.size() != re.size())) {
      throw ParseError("sample arrays do not match the time axis", 0);
    }
    for (std::size_t k = 0; k < re.size(); ++k) {
      const auto n = static_cast<Eigen::Index>(re[k].size());
      Eigen::VectorXcd state(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        state(i) = {re[k][i], im.empty() ? 0.0 : im[k].at(i)};
      }
      traj.states.push_back(std::move(state));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed trajectory JSON: ") + e.what(), 0);
  }
  return traj;
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                      OutputFormat format) {
  write_text(path, format == OutputFormat::csv ? trajectory_csv(traj) : trajectory_json(traj));
}

Trajectory read_trajectory(const std::filesystem::path& path, OutputFormat format) {
  const std::string text = read_text(path);
  return format == OutputFormat::csv ? parse_trajectory_csv(text) : parse_trajectory_json(text);
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  std::vector<double> row;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    append_row(out, row);
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buffer.str();
}

}  // namespace netfrac
