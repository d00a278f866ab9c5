#include "acil/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "acil/error.hpp"
#include "acil/rng.hpp"
#include "byte_io.hpp"

namespace acil {

namespace {

constexpr std::string_view kFeatureMagic = "ACILFEAT";
constexpr std::string_view kLabelMagic = "ACILLABL";
constexpr std::uint32_t kFileVersion = 1;

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool starts_with(const std::vector<std::uint8_t>& data, std::string_view magic) {
  return data.size() >= magic.size() &&
         std::equal(magic.begin(), magic.end(), data.begin(),
                    [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; });
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> lines_of(const std::vector<std::uint8_t>& data) {
  std::string_view text(reinterpret_cast<const char*>(data.data()), data.size());
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(start, end - start));
    if (!line.empty()) out.push_back(line);
    start = end + 1;
  }
  return out;
}

Matrix parse_feature_binary(const std::vector<std::uint8_t>& data, const std::string& name) {
  detail::ByteReader r(data, name);
  r.bytes(kFeatureMagic.size());
  const auto version = r.get<std::uint32_t>();
  if (version != kFileVersion) {
    throw FormatError(name + ": malformed header (unsupported version " + std::to_string(version) + ")");
  }
  const auto rows = r.get<std::uint64_t>();
  const auto cols = r.get<std::uint32_t>();
  const auto dtype = r.get<std::uint8_t>();
  std::size_t width = 0;
  if (dtype == static_cast<std::uint8_t>(FeatureDtype::Float32)) {
    width = 4;
  } else if (dtype == static_cast<std::uint8_t>(FeatureDtype::Float64)) {
    width = 8;
  } else {
    throw FormatError(name + ": unknown dtype code " + std::to_string(dtype));
  }
  if (cols == 0) throw FormatError(name + ": malformed header (zero columns)");
  if (rows > r.remaining() / (width * cols) || r.remaining() != rows * cols * width) {
    throw FormatError(name + ": malformed header (payload size does not match " + std::to_string(rows) +
                      " x " + std::to_string(cols) + ")");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = width == 4 ? static_cast<double>(r.get<float>()) : r.get<double>();
    }
  }
  return m;
}

Matrix parse_feature_csv(const std::vector<std::uint8_t>& data, const std::string& name) {
  std::vector<std::vector<double>> rows;
  for (auto line : lines_of(data)) {
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      auto end = line.find(',', pos);
      if (end == std::string_view::npos) end = line.size();
      auto cell = trim(line.substr(pos, end - pos));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ValidationError(name + ": malformed CSV value '" + std::string(cell) + "' on row " +
                              std::to_string(rows.size()));
      }
      row.push_back(v);
      pos = end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError(name + ": ragged CSV row " + std::to_string(rows.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(name + ": no feature rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

ClassId parse_label(std::string_view s, const std::string& name, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0 ||
      v > std::numeric_limits<ClassId>::max()) {
    throw ValidationError(name + ": invalid class id '" + std::string(s) + "' on line " +
                          std::to_string(line));
  }
  return static_cast<ClassId>(v);
}

}  // namespace

SampleSet make_sample_set(Matrix features, std::vector<ClassId> labels) {
  if (features.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw ValidationError("row-count mismatch: " + std::to_string(features.rows()) +
                          " feature rows vs " + std::to_string(labels.size()) + " labels");
  }
  if (features.cols() < 1) throw ValidationError("feature dimension must be at least 1");
  if (!features.allFinite()) throw ValidationError("features contain non-finite values");
  std::set<ClassId> universe(labels.begin(), labels.end());
  return SampleSet{std::move(features), std::move(labels), ClassList(universe.begin(), universe.end())};
}

Matrix read_feature_file(const std::filesystem::path& path) {
  const auto data = slurp(path);
  const auto name = path.string();
  if (starts_with(data, kFeatureMagic)) return parse_feature_binary(data, name);
  if (starts_with(data, "ACIL")) throw FormatError(name + ": malformed header (unknown magic)");
  return parse_feature_csv(data, name);
}

std::vector<ClassId> read_label_file(const std::filesystem::path& path) {
  const auto data = slurp(path);
  const auto name = path.string();
  std::vector<ClassId> labels;
  if (starts_with(data, kLabelMagic)) {
    detail::ByteReader r(data, name);
    r.bytes(kLabelMagic.size());
    if (r.get<std::uint32_t>() != kFileVersion) throw FormatError(name + ": malformed header (version)");
    const auto n = r.get<std::uint64_t>();
    if (r.remaining() != n * sizeof(std::uint32_t)) {
      throw FormatError(name + ": malformed header (label count does not match payload)");
    }
    labels.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) labels.push_back(r.get<std::uint32_t>());
    return labels;
  }
  std::size_t line_no = 0;
  for (auto line : lines_of(data)) labels.push_back(parse_label(line, name, line_no++));
  return labels;
}

SampleSet load_sample_set(const std::filesystem::path& feature_path,
                          const std::filesystem::path& label_path) {
  return make_sample_set(read_feature_file(feature_path), read_label_file(label_path));
}

void write_feature_file(const std::filesystem::path& path, const Matrix& features, FeatureDtype dtype) {
  detail::ByteWriter w;
  w.bytes(kFeatureMagic);
  w.put<std::uint32_t>(kFileVersion);
  w.put<std::uint64_t>(static_cast<std::uint64_t>(features.rows()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(features.cols()));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(dtype));
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      if (dtype == FeatureDtype::Float32) {
        w.put<float>(static_cast<float>(features(i, j)));
      } else {
        w.put<double>(features(i, j));
      }
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(w.buffer().data()), static_cast<std::streamsize>(w.buffer().size()));
}

void write_label_file(const std::filesystem::path& path, std::span<const ClassId> labels, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  if (!binary) {
    for (auto id : labels) out << id << '\n';
    return;
  }
  detail::ByteWriter w;
  w.bytes(kLabelMagic);
  w.put<std::uint32_t>(kFileVersion);
  w.put<std::uint64_t>(labels.size());
  for (auto id : labels) w.put<std::uint32_t>(id);
  out.write(reinterpret_cast<const char*>(w.buffer().data()), static_cast<std::streamsize>(w.buffer().size()));
}

Matrix one_hot(std::span<const ClassId> labels, std::span<const ClassId> class_ids) {
  std::map<ClassId, Eigen::Index> column;
  for (std::size_t j = 0; j < class_ids.size(); ++j) column.emplace(class_ids[j], static_cast<Eigen::Index>(j));
  Matrix y = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(class_ids.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = column.find(labels[i]);
    if (it == column.end()) {
      throw ValidationError("label " + std::to_string(labels[i]) + " is not among the phase's class ids");
    }
    y(static_cast<Eigen::Index>(i), it->second) = 1.0;
  }
  return y;
}

std::vector<ClassList> plan_class_groups(const ClassList& class_universe, const SplitPlan& plan) {
  const std::size_t n = class_universe.size();
  const std::size_t k = plan.phases;
  if (n < k + 1) {
    throw ValidationError("too few classes: " + std::to_string(n) + " classes cannot fill a base phase and " +
                          std::to_string(k) + " incremental phases");
  }
  if (plan.base_fraction.den == 0 || plan.base_fraction.num > plan.base_fraction.den) {
    throw ValidationError("base fraction must lie in [0, 1]");
  }

  ClassList order = class_universe;
  rng::shuffle(std::span<ClassId>(order), plan.seed);

  const std::size_t base = k == 0 ? n : n * plan.base_fraction.num / plan.base_fraction.den;
  if (base < 1) throw ValidationError("base phase would receive no classes");
  const std::size_t rest = n - base;
  if (k > 0 && rest < k) {
    throw ValidationError("too few classes: " + std::to_string(rest) + " remaining classes for " +
                          std::to_string(k) + " incremental phases");
  }
  if (k > 0 && plan.strict_even && rest % k != 0) {
    throw ValidationError(std::to_string(rest) + " remaining classes do not divide evenly into " +
                          std::to_string(k) + " phases");
  }

  std::vector<ClassList> groups;
  groups.emplace_back(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(base));
  std::size_t cursor = base;
  for (std::size_t p = 0; p < k; ++p) {
    const std::size_t size = rest / k + (p < rest % k ? 1 : 0);
    groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                        order.begin() + static_cast<std::ptrdiff_t>(cursor + size));
    cursor += size;
  }
  return groups;
}

std::vector<PhaseDataset> assemble_phases(const SampleSet& data, const std::vector<ClassList>& groups) {
  std::map<ClassId, std::size_t> owner;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto c : groups[g]) {
      if (!owner.emplace(c, g).second) {
        throw ValidationError("class " + std::to_string(c) + " assigned to more than one phase");
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> rows(groups.size());
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    auto it = owner.find(data.labels[i]);
    if (it != owner.end()) rows[it->second].push_back(static_cast<Eigen::Index>(i));
  }

  std::vector<PhaseDataset> phases;
  phases.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    PhaseDataset p;
    p.phase_index = g;
    p.class_ids = groups[g];
    p.features.resize(static_cast<Eigen::Index>(rows[g].size()), data.dim());
    for (std::size_t r = 0; r < rows[g].size(); ++r) {
      p.features.row(static_cast<Eigen::Index>(r)) = data.features.row(rows[g][r]);
      p.labels.push_back(data.labels[static_cast<std::size_t>(rows[g][r])]);
    }
    p.onehot = one_hot(p.labels, p.class_ids);
    phases.push_back(std::move(p));
  }
  return phases;
}

std::vector<PhaseDataset> split_phases(const SampleSet& data, const SplitPlan& plan) {
  std::set<ClassId> present(data.labels.begin(), data.labels.end());
  for (auto c : data.class_universe) {
    if (!present.contains(c)) throw ValidationError("class " + std::to_string(c) + " has no samples");
  }
  return assemble_phases(data, plan_class_groups(data.class_universe, plan));
}

void validate_disjoint(std::span<const PhaseDataset> phases) {
  std::map<ClassId, std::size_t> seen;
  for (const auto& p : phases) {
    for (auto c : p.class_ids) {
      auto [it, fresh] = seen.emplace(c, p.phase_index);
      if (!fresh) {
        throw ValidationError("class " + std::to_string(c) + " appears in both phase " +
                              std::to_string(it->second) + " and phase " + std::to_string(p.phase_index));
      }
    }
  }
}

std::pair<SampleSet, SampleSet> stratified_holdout(const SampleSet& data, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw ValidationError("holdout fraction must lie in [0, 1)");
  std::map<ClassId, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.labels.size(); ++i) by_class[data.labels[i]].push_back(i);

  std::vector<bool> is_test(data.labels.size(), false);
  for (auto& [cls, idx] : by_class) {
    rng::shuffle(std::span<std::size_t>(idx), rng::splitmix64(seed) ^ cls);
    auto n_test = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
    n_test = std::min(n_test, idx.size() - 1);
    for (std::size_t t = 0; t < n_test; ++t) is_test[idx[t]] = true;
  }

  auto take = [&](bool want_test) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < is_test.size(); ++i) {
      if (is_test[i] == want_test) rows.push_back(static_cast<Eigen::Index>(i));
    }
    Matrix f(static_cast<Eigen::Index>(rows.size()), data.dim());
    std::vector<ClassId> l;
    l.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      f.row(static_cast<Eigen::Index>(r)) = data.features.row(rows[r]);
      l.push_back(data.labels[static_cast<std::size_t>(rows[r])]);
    }
    return SampleSet{std::move(f), std::move(l), data.class_universe};
  };
  return {take(false), take(true)};
}

}  // namespace acil
