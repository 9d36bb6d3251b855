#include "wrelm/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wrelm {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ValidationError(where + ": malformed number '" + s + "'");
  return v;
}

long parse_long(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ValidationError(where + ": malformed integer '" + s + "'");
  return v;
}

}  // namespace

void SeriesDataset::append(SeriesRecord rec) {
  if (rec.features.size() != z_)
    throw ValidationError("record feature count " + std::to_string(rec.features.size()) +
                          " does not match dataset z " + std::to_string(z_));
  if (!records_.empty() && rec.step <= records_.back().step)
    throw ValidationError("step indices must be strictly increasing");
  records_.push_back(std::move(rec));
}

Index SeriesDataset::count_valid() const {
  Index n = 0;
  for (const auto& r : records_) n += r.valid ? 1 : 0;
  return n;
}

Matrix SeriesDataset::valid_features() const {
  Matrix out(count_valid(), z_);
  Index i = 0;
  for (const auto& r : records_)
    if (r.valid) out.row(i++) = r.features.transpose();
  return out;
}

Vector SeriesDataset::valid_targets() const {
  Vector out(count_valid());
  Index i = 0;
  for (const auto& r : records_)
    if (r.valid) out[i++] = r.target;
  return out;
}

void SeriesDataset::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "step,set_point";
  for (Index c = 0; c < z_; ++c) out << ",feat_" << c;
  out << ",target,valid\n";
  for (const auto& r : records_) {
    out << r.step << ',' << r.set_point;
    for (Index c = 0; c < z_; ++c) out << ',' << format_double(r.features[c]);
    out << ',' << format_double(r.target) << ',' << (r.valid ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

SeriesDataset SeriesDataset::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ":1: missing header row");
  const auto header = split_fields(line);
  if (header.size() < 4 || header[0] != "step" || header[1] != "set_point" ||
      header[header.size() - 2] != "target" || header.back() != "valid")
    throw ValidationError(path + ":1: unexpected header '" + line + "'");
  const Index z = static_cast<Index>(header.size()) - 4;
  for (Index c = 0; c < z; ++c)
    if (header[static_cast<size_t>(c) + 2] != "feat_" + std::to_string(c))
      throw ValidationError(path + ":1: unexpected feature column '" +
                            header[static_cast<size_t>(c) + 2] + "'");

  SeriesDataset ds(z);
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto fields = split_fields(line);
    if (static_cast<Index>(fields.size()) != z + 4)
      throw ValidationError(where + ": expected " + std::to_string(z + 4) +
                            " fields, got " + std::to_string(fields.size()));
    SeriesRecord rec;
    rec.step = parse_long(fields[0], where);
    rec.set_point = static_cast<int>(parse_long(fields[1], where));
    rec.features.resize(z);
    for (Index c = 0; c < z; ++c)
      rec.features[c] = parse_double(fields[static_cast<size_t>(c) + 2], where);
    rec.target = parse_double(fields[static_cast<size_t>(z) + 2], where);
    const long valid = parse_long(fields.back(), where);
    if (valid != 0 && valid != 1)
      throw ValidationError(where + ": valid flag must be 0 or 1");
    rec.valid = valid == 1;
    try {
      ds.append(std::move(rec));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return ds;
}

}  // namespace wrelm
