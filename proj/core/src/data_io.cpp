#include "boostray/data_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "boostray/errors.hpp"

namespace boostray {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

template <typename Fn>
void for_each_cell(std::string_view line, Fn&& fn) {
  std::size_t col = 0;
  while (true) {
    auto comma = line.find(',');
    fn(col++, trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
}

std::size_t count_cells(std::string_view line) {
  std::size_t n = 1;
  for (char c : line) n += (c == ',');
  return n;
}

std::string format_float(float v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void check_name_writable(const std::string& name, bool csv) {
  if (name.empty() || name.find('\n') != std::string::npos ||
      name.find('\r') != std::string::npos ||
      (csv && (name.find(',') != std::string::npos || trim(name) != name))) {
    throw FormatError("class name '" + name + "' cannot be stored");
  }
}

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFFu));
  }
}

template <typename T>
T get_le(std::string_view bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw FormatError("'" + path.string() + "' is empty");

  const std::size_t width = count_cells(lines[0]);
  std::string_view first;
  for_each_cell(lines[0], [&](std::size_t col, std::string_view cell) {
    if (col == 0) first = cell;
  });
  if (first != "label") {
    throw FormatError("line 1: header must start with 'label'");
  }
  if (width < 2) throw FormatError("line 1: header has no feature columns");
  if (lines.size() < 2) throw FormatError("'" + path.string() + "' has no data rows");

  const std::size_t n_cols = width - 1;
  const std::size_t n_rows = lines.size() - 1;
  std::vector<float> values;
  values.reserve(n_rows * n_cols);
  std::vector<std::uint32_t> labels;
  labels.reserve(n_rows);
  std::vector<std::string> class_names;
  std::unordered_map<std::string, std::uint32_t> class_index;

  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto line = lines[r + 1];
    const std::size_t line_no = r + 2;
    if (count_cells(line) != width) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(width) + " columns, found " +
                        std::to_string(count_cells(line)));
    }
    for_each_cell(line, [&](std::size_t col, std::string_view cell) {
      if (col == 0) {
        if (cell.empty()) {
          throw ValueError("row " + std::to_string(r) + " (line " +
                           std::to_string(line_no) + "): empty label");
        }
        std::string name(cell);
        auto [it, inserted] =
            class_index.try_emplace(name, static_cast<std::uint32_t>(class_names.size()));
        if (inserted) class_names.push_back(std::move(name));
        labels.push_back(it->second);
        return;
      }
      std::string_view digits = cell;
      if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
      float v = 0.0f;
      auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size() ||
          !std::isfinite(v)) {
        throw ValueError("row " + std::to_string(r) + ", col " + std::to_string(col - 1) +
                         " (line " + std::to_string(line_no) + "): invalid feature value '" +
                         std::string(cell) + "'");
      }
      values.push_back(v);
    });
  }
  return Dataset(FeatureMatrix(n_rows, n_cols, std::move(values)), std::move(labels),
                 std::move(class_names));
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::string out = "label";
  for (std::size_t c = 0; c < dataset.n_cols(); ++c) out += ",f" + std::to_string(c);
  out += '\n';
  for (const auto& name : dataset.class_names()) check_name_writable(name, true);
  const auto& features = dataset.features();
  for (std::size_t r = 0; r < dataset.n_rows(); ++r) {
    out += dataset.class_names()[dataset.labels()[r]];
    for (float v : features.row(r)) {
      out += ',';
      out += format_float(v);
    }
    out += '\n';
  }
  write_file(path, out);
}

std::filesystem::path classes_path_for(const std::filesystem::path& fmx_path) {
  auto p = fmx_path;
  p.replace_extension(".classes");
  return p;
}

std::vector<std::uint8_t> encode_fmx(const Dataset& dataset) {
  std::string out;
  out.reserve(kFmxHeaderBytes + 4 * dataset.n_rows() * (1 + dataset.n_cols()));
  out += "FMX1";
  put_le<std::uint32_t>(out, kFmxVersion);
  put_le<std::uint64_t>(out, dataset.n_rows());
  put_le<std::uint64_t>(out, dataset.n_cols());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.n_classes()));
  for (auto label : dataset.labels()) put_le<std::uint32_t>(out, label);
  for (float v : dataset.features().values()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  return {out.begin(), out.end()};
}

void write_fmx(const Dataset& dataset, const std::filesystem::path& path) {
  std::string classes;
  for (const auto& name : dataset.class_names()) {
    check_name_writable(name, false);
    classes += name;
    classes += '\n';
  }
  const auto bytes = encode_fmx(dataset);
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  write_file(classes_path_for(path), classes);
}

Dataset load_fmx(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const std::string where = "'" + path.string() + "'";
  if (bytes.size() < 4) throw LengthError(where + ": truncated before magic");
  if (bytes.compare(0, 4, "FMX1") != 0) throw FormatError(where + ": bad magic, expected FMX1");
  if (bytes.size() < kFmxHeaderBytes) throw LengthError(where + ": truncated header");

  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kFmxVersion) {
    throw FormatError(where + ": unsupported version " + std::to_string(version));
  }
  const auto n_rows = get_le<std::uint64_t>(bytes, 8);
  const auto n_cols = get_le<std::uint64_t>(bytes, 16);
  const auto n_classes = get_le<std::uint32_t>(bytes, 24);
  if (n_rows == 0 || n_cols == 0) throw FormatError(where + ": empty matrix");

  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (n_cols >= kMax / 4 || n_rows > (kMax - kFmxHeaderBytes) / 4 / (n_cols + 1)) {
    throw FormatError(where + ": dimensions overflow");
  }
  const std::uint64_t expected = kFmxHeaderBytes + 4 * n_rows * (n_cols + 1);
  if (bytes.size() < expected) {
    throw LengthError(where + ": payload has " + std::to_string(bytes.size()) +
                      " bytes, expected " + std::to_string(expected));
  }
  if (bytes.size() > expected) throw FormatError(where + ": trailing bytes after payload");

  std::vector<std::uint32_t> labels(n_rows);
  std::size_t offset = kFmxHeaderBytes;
  for (auto& label : labels) {
    label = get_le<std::uint32_t>(bytes, offset);
    offset += 4;
  }
  std::vector<float> values(n_rows * n_cols);
  for (auto& v : values) {
    v = std::bit_cast<float>(get_le<std::uint32_t>(bytes, offset));
    offset += 4;
  }

  const auto classes_path = classes_path_for(path);
  const std::string classes_text = read_file(classes_path);
  std::vector<std::string> class_names;
  for (auto line : split_lines(classes_text)) class_names.emplace_back(line);
  if (class_names.size() != n_classes) {
    throw ConsistencyError("'" + classes_path.string() + "' lists " +
                           std::to_string(class_names.size()) + " classes, header says " +
                           std::to_string(n_classes));
  }
  return Dataset(FeatureMatrix(n_rows, n_cols, std::move(values)), std::move(labels),
                 std::move(class_names));
}

Dataset load_dataset(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return load_csv(path);
  return load_fmx(path);
}

}  // namespace boostray
