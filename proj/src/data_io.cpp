#include "acker/data_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "acker/error.hpp"
#include "acker/report.hpp"
#include "acker/rng.hpp"
#include "csv_util.hpp"

namespace acker {

// ------------------------------------------------------------------ CSV

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Resolves a column selector against the header (or as a bare position
// when there is none). Header names win over numeric interpretation.
size_t resolve_column(const std::string& selector,
                      const std::vector<std::string>* header,
                      const char* role) {
  if (header) {
    for (size_t i = 0; i < header->size(); ++i)
      if ((*header)[i] == selector) return i;
  }
  size_t pos = 0;
  const auto [ptr, ec] =
      std::from_chars(selector.data(), selector.data() + selector.size(), pos);
  if (ec == std::errc{} && ptr == selector.data() + selector.size()) {
    if (header && pos >= header->size())
      throw DataError(std::string(role) + " column position " + selector +
                      " exceeds the header width " +
                      std::to_string(header->size()));
    return pos;
  }
  if (header)
    throw DataError(std::string(role) + " column '" + selector +
                    "' not found in the header");
  throw DataError(std::string(role) + " column '" + selector +
                  "' must be a 0-based position when the file has no header");
}

double parse_coordinate(const std::string& field, size_t row, const char* role) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw DataError("row " + std::to_string(row) + ": malformed number '" +
                    field + "' in the " + role + " column");
  return v;
}

struct ParsedCsv {
  std::optional<std::vector<std::string>> header;
  std::vector<std::vector<std::string>> rows;  // data rows only
};

ParsedCsv parse_csv(const std::string& path, const CsvSchema& schema) {
  const auto lines = read_lines(path);
  ParsedCsv out;
  size_t start = 0;
  if (schema.has_header) {
    if (lines.empty()) throw DataError("'" + path + "' is empty");
    std::vector<std::string> header;
    if (!csv::split_row(lines[0], schema.delimiter, header))
      throw DataError("header row has unbalanced quotes");
    out.header = std::move(header);
    start = 1;
  }
  for (size_t i = start; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;  // trailing newline
    std::vector<std::string> fields;
    if (!csv::split_row(lines[i], schema.delimiter, fields))
      throw DataError("row " + std::to_string(i - start + 1) +
                      ": unbalanced quotes");
    out.rows.push_back(std::move(fields));
  }
  if (out.rows.empty())
    throw DataError("'" + path + "' contains no data rows");
  return out;
}

void check_row_width(const std::vector<std::string>& fields, size_t row,
                     size_t needed) {
  if (fields.size() <= needed)
    throw DataError("row " + std::to_string(row) + ": expected at least " +
                    std::to_string(needed + 1) + " fields, got " +
                    std::to_string(fields.size()));
}

GeoPoint parse_point(const std::vector<std::string>& fields, size_t row,
                     size_t lon_col, size_t lat_col) {
  check_row_width(fields, row, std::max(lon_col, lat_col));
  GeoPoint p;
  p.lon = parse_coordinate(fields[lon_col], row, "lon");
  p.lat = parse_coordinate(fields[lat_col], row, "lat");
  if (!std::isfinite(p.lon) || p.lon < kLonMin || p.lon > kLonMax)
    throw DataError("row " + std::to_string(row) + ": longitude " +
                    fields[lon_col] + " out of range [-180, 180]");
  if (!std::isfinite(p.lat) || p.lat < kLatMin || p.lat > kLatMax)
    throw DataError("row " + std::to_string(row) + ": latitude " +
                    fields[lat_col] + " out of range [-90, 90]");
  return p;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema,
                 std::string dataset_name) {
  const ParsedCsv csv = parse_csv(path, schema);
  const auto* header = csv.header ? &*csv.header : nullptr;
  const size_t lon_col = resolve_column(schema.lon_column, header, "lon");
  const size_t lat_col = resolve_column(schema.lat_column, header, "lat");
  const size_t label_col = resolve_column(schema.label_column, header, "label");

  Dataset ds(dataset_name.empty() ? path : std::move(dataset_name));
  for (size_t i = 0; i < csv.rows.size(); ++i) {
    const size_t row = i + 1;
    const auto& fields = csv.rows[i];
    const GeoPoint p = parse_point(fields, row, lon_col, lat_col);
    check_row_width(fields, row, label_col);
    if (fields[label_col].empty())
      throw DataError("row " + std::to_string(row) + ": empty label");
    ds.add(p, fields[label_col]);
  }
  return ds;
}

std::vector<GeoPoint> load_points_csv(const std::string& path,
                                      const CsvSchema& schema) {
  const ParsedCsv csv = parse_csv(path, schema);
  const auto* header = csv.header ? &*csv.header : nullptr;
  const size_t lon_col = resolve_column(schema.lon_column, header, "lon");
  const size_t lat_col = resolve_column(schema.lat_column, header, "lat");

  std::vector<GeoPoint> points;
  points.reserve(csv.rows.size());
  for (size_t i = 0; i < csv.rows.size(); ++i)
    points.push_back(parse_point(csv.rows[i], i + 1, lon_col, lat_col));
  return points;
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "lon,lat,label\n";
  for (const LabeledPoint& lp : dataset.points()) {
    out << format_double(lp.point.lon) << ',' << format_double(lp.point.lat)
        << ',' << csv::escape(dataset.labels().name(lp.label), ',') << '\n';
  }
  if (!out) throw DataError("write to '" + path + "' failed");
}

// ------------------------------------------------------------ generators

std::string_view generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::SeparableHalves: return "separable_halves";
    case GeneratorKind::NoisyDensePlusSparseCheckerboard:
      return "noisy_dense_plus_sparse_checkerboard";
    case GeneratorKind::UniformRandomLabels: return "uniform_random_labels";
  }
  throw ConfigError("unknown generator kind");
}

std::optional<GeneratorKind> generator_from_name(std::string_view name) {
  if (name == "separable_halves") return GeneratorKind::SeparableHalves;
  if (name == "noisy_dense_plus_sparse_checkerboard")
    return GeneratorKind::NoisyDensePlusSparseCheckerboard;
  if (name == "uniform_random_labels") return GeneratorKind::UniformRandomLabels;
  return std::nullopt;
}

namespace {

void check_spec(const SyntheticSpec& spec) {
  if (spec.count < 1) throw ConfigError("count must be >= 1");
  if (spec.classes < 2) throw ConfigError("class count must be >= 2");
  if (spec.noise_rate < 0.0 || spec.noise_rate >= 1.0)
    throw ConfigError("noise rate must lie in [0, 1)");
  if (spec.kind != GeneratorKind::UniformRandomLabels && spec.classes != 2)
    throw ConfigError(std::string(generator_name(spec.kind)) +
                      " generates exactly 2 classes");
}

std::vector<std::string> class_names(uint32_t classes) {
  std::vector<std::string> names;
  names.reserve(classes);
  for (uint32_t c = 0; c < classes; ++c) names.push_back("c" + std::to_string(c));
  return names;
}

Dataset make_dataset(const SyntheticSpec& spec) {
  Dataset ds(std::string(generator_name(spec.kind)));
  return ds;
}

ClassId flip_label(ClassId label, uint32_t classes, Rng& rng) {
  // uniform over the other classes
  const uint64_t shift = 1 + rng.below(classes - 1);
  return static_cast<ClassId>((label + shift) % classes);
}

Dataset generate_halves(const SyntheticSpec& spec) {
  Dataset ds = make_dataset(spec);
  const auto names = class_names(2);
  Rng rng(spec.seed);
  for (uint64_t i = 0; i < spec.count; ++i) {
    const uint32_t side = static_cast<uint32_t>(rng.below(2));
    GeoPoint p;
    // The 40-degree gap between the halves dwarfs within-half neighbor
    // distances, so nearest neighbors never cross the boundary.
    p.lon = side == 0 ? rng.uniform(-30.0, -20.0) : rng.uniform(20.0, 30.0);
    p.lat = rng.uniform(-10.0, 10.0);
    ClassId label = side;
    if (spec.noise_rate > 0.0 && rng.uniform01() < spec.noise_rate)
      label = flip_label(label, 2, rng);
    ds.add(p, names[label]);
  }
  return ds;
}

Dataset generate_checkerboard_combo(const SyntheticSpec& spec) {
  Dataset ds = make_dataset(spec);
  const auto names = class_names(2);
  Rng rng(spec.seed);

  // Half dense blob, half sparse checkerboard: the adaptive advantage
  // lives in the sparse half, so the regions carry equal weight.
  const uint64_t dense_count = spec.count / 2;
  const uint64_t cells =
      static_cast<uint64_t>(spec.sparse_grid) * spec.sparse_grid;
  const uint64_t per_cell =
      std::max<uint64_t>(1, (spec.count - dense_count + cells / 2) / cells);

  // Dense blob at the origin. The true class alternates between wide
  // latitude stripes; observed labels flip with probability noise_rate.
  // Stripes are wide against the blob's neighbor radius, so a large-k
  // majority vote recovers the stripe class while 1-NN echoes the noise.
  const double clamp_extent = 20.0;
  for (uint64_t i = 0; i < dense_count; ++i) {
    GeoPoint p;
    p.lon = std::clamp(rng.gaussian() * spec.dense_sigma, -clamp_extent,
                       clamp_extent);
    p.lat = std::clamp(rng.gaussian() * spec.dense_sigma, -clamp_extent,
                       clamp_extent);
    const int64_t stripe =
        static_cast<int64_t>(std::floor(p.lat / spec.dense_stripe_width));
    ClassId label = static_cast<ClassId>(stripe & 1);
    if (spec.noise_rate > 0.0 && rng.uniform01() < spec.noise_rate)
      label = flip_label(label, 2, rng);
    ds.add(p, names[label]);
  }

  // Sparse noise-free checkerboard far east of the blob: one tight
  // cluster per cell, centered in it, with adjacent clusters of opposite
  // class. The first neighbors always come from the own cluster, so k=1
  // is perfect, while any k beyond the cluster size drags in opposite
  // votes from the four nearest clusters.
  const double cell = spec.sparse_cell_size;
  const double half_width = 0.15 * cell;  // cluster radius << cell spacing
  const double half_span = spec.sparse_grid * cell / 2.0;
  for (uint32_t cy = 0; cy < spec.sparse_grid; ++cy) {
    for (uint32_t cx = 0; cx < spec.sparse_grid; ++cx) {
      const ClassId label = static_cast<ClassId>((cx + cy) & 1);
      const double center_lon = spec.sparse_offset_lon + (cx + 0.5) * cell;
      const double center_lat = -half_span + (cy + 0.5) * cell;
      for (uint64_t j = 0; j < per_cell; ++j) {
        GeoPoint p;
        p.lon = center_lon + rng.uniform(-half_width, half_width);
        p.lat = center_lat + rng.uniform(-half_width, half_width);
        ds.add(p, names[label]);
      }
    }
  }
  return ds;
}

Dataset generate_uniform(const SyntheticSpec& spec) {
  Dataset ds = make_dataset(spec);
  const auto names = class_names(spec.classes);
  Rng rng(spec.seed);
  for (uint64_t i = 0; i < spec.count; ++i) {
    GeoPoint p;
    p.lon = rng.uniform(-50.0, 50.0);
    p.lat = rng.uniform(-50.0, 50.0);
    const ClassId label = static_cast<ClassId>(rng.below(spec.classes));
    ds.add(p, names[label]);
  }
  return ds;
}

}  // namespace

Dataset generate(const SyntheticSpec& spec) {
  check_spec(spec);
  switch (spec.kind) {
    case GeneratorKind::SeparableHalves: return generate_halves(spec);
    case GeneratorKind::NoisyDensePlusSparseCheckerboard:
      return generate_checkerboard_combo(spec);
    case GeneratorKind::UniformRandomLabels: return generate_uniform(spec);
  }
  throw ConfigError("unknown generator kind");
}

}  // namespace acker
