#include "firmdyn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace firmdyn {

std::string format_number(double value) {
  if (value == 0.0) {
    return "0";  // also folds -0
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("CsvTable: row has " + std::to_string(cells.size()) + " cells, header has " +
                                std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) {
    line(r);
  }
  return out.str();
}

OutputBatch::OutputBatch(std::filesystem::path dir) : dir_(std::move(dir)) {}

void OutputBatch::add(const std::string& name, std::string content) {
  files_.emplace_back(name, std::move(content));
}

std::vector<std::filesystem::path> OutputBatch::commit() {
  namespace fs = std::filesystem;
  fs::create_directories(dir_);
  std::vector<fs::path> temps;
  std::vector<fs::path> finals;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) {
      fs::remove(t, ec);
    }
  };
  try {
    for (const auto& [name, content] : files_) {
      const fs::path target = dir_ / name;
      const fs::path temp = dir_ / ("." + name + ".tmp");
      temps.push_back(temp);
      std::ofstream out(temp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) {
        throw std::runtime_error("cannot write " + temp.string());
      }
      finals.push_back(target);
    }
    for (std::size_t i = 0; i < finals.size(); ++i) {
      fs::rename(temps[i], finals[i]);
    }
  } catch (...) {
    cleanup();
    throw;
  }
  files_.clear();
  return finals;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace firmdyn
