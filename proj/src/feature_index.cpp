#include "acker/feature_index.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>

#include "acker/error.hpp"
#include "acker/parallel.hpp"

namespace acker {

// ---------------------------------------------------------------- KRange

namespace {

uint32_t parse_u32(std::string_view text) {
  uint32_t v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("invalid integer '" + std::string(text) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

KRange::KRange(std::vector<uint32_t> values) : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("candidate range is empty");
  uint32_t prev = 0;
  for (uint32_t v : values_) {
    if (v < 1) throw ConfigError("candidate range values must be >= 1");
    if (v <= prev)
      throw ConfigError("candidate range must be strictly increasing");
    prev = v;
  }
}

KRange KRange::contiguous(uint32_t k_max) {
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  std::vector<uint32_t> v(k_max);
  for (uint32_t i = 0; i < k_max; ++i) v[i] = i + 1;
  return KRange(std::move(v));
}

KRange KRange::parse(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) throw ConfigError("empty range expression");
  const size_t dots = body.find("..");
  if (dots != std::string_view::npos) {
    const uint32_t lo = parse_u32(trim(body.substr(0, dots)));
    const uint32_t hi = parse_u32(trim(body.substr(dots + 2)));
    if (lo > hi)
      throw ConfigError("range '" + std::string(body) + "' is descending");
    std::vector<uint32_t> v;
    v.reserve(hi - lo + 1);
    for (uint32_t k = lo; k <= hi; ++k) v.push_back(k);
    return KRange(std::move(v));
  }
  std::vector<uint32_t> v;
  size_t pos = 0;
  while (pos <= body.size()) {
    const size_t comma = body.find(',', pos);
    const size_t end = comma == std::string_view::npos ? body.size() : comma;
    v.push_back(parse_u32(trim(body.substr(pos, end - pos))));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return KRange(std::move(v));
}

uint32_t KRange::max() const {
  if (values_.empty()) throw ConfigError("candidate range is empty");
  return values_.back();
}

std::optional<size_t> KRange::position_of(uint32_t k) const {
  const auto it = std::lower_bound(values_.begin(), values_.end(), k);
  if (it == values_.end() || *it != k) return std::nullopt;
  return static_cast<size_t>(it - values_.begin());
}

std::string KRange::to_string() const {
  if (values_.empty()) return "";
  const bool contiguous =
      values_.back() - values_.front() + 1 == values_.size();
  if (contiguous && values_.size() > 1)
    return std::to_string(values_.front()) + ".." + std::to_string(values_.back());
  std::string out;
  for (size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values_[i]);
  }
  return out;
}

// -------------------------------------------------------- FeatureIndexSet

FeatureIndexSet FeatureIndexSet::build(const TrainingSet& train,
                                       FeatureKind kind, KRange range,
                                       unsigned threads) {
  const Dataset& ds = train.dataset();
  const size_t n = ds.size();
  if (range.empty()) throw ConfigError("candidate range is empty");
  if (n < 2) throw ConfigError("feature index requires at least 2 points");
  if (range.max() > n - 1)
    throw ConfigError("range max " + std::to_string(range.max()) +
                      " exceeds training size - 1 = " + std::to_string(n - 1));

  FeatureIndexSet out;
  out.kind_ = kind;
  out.range_ = std::move(range);
  out.points_ = n;
  out.table_ = CorrectnessTable(n, out.range_.size());

  const bool k_dep = feature_k_dependent(kind);
  const int dim = feature_dimensionality(kind);
  const size_t slot_count = k_dep ? out.range_.size() : 1;
  out.slots_.resize(slot_count);
  for (Slot& s : out.slots_) {
    s.comp0.resize(n);
    if (dim == 2) s.comp1.resize(n);
  }

  const auto& values = out.range_.values();
  const uint32_t k_max = out.range_.max();
  const size_t class_count = ds.labels().size();

  // Rows are independent: one neighbor pass of k_max per training point
  // yields the feature value and the leave-one-out vote for every k.
  parallel_for(n, threads, [&](size_t begin, size_t end) {
    VoteAccumulator votes(class_count);
    for (size_t i = begin; i < end; ++i) {
      const uint32_t self = static_cast<uint32_t>(i);
      const NeighborList neighbors =
          train.spatial().k_nearest(ds[i].point, k_max, self);
      if (!k_dep) {
        out.slots_[0].comp0[i] = ds[i].point.lat;
        out.slots_[0].comp1[i] = ds[i].point.lon;
      }
      votes.reset();
      double sum = 0.0;
      size_t pos = 0;
      for (uint32_t k = 1; k <= k_max; ++k) {
        const Neighbor& nb = neighbors[k - 1];
        sum += nb.distance;
        votes.add(ds[nb.index].label);
        if (pos < values.size() && values[pos] == k) {
          if (k_dep) {
            Slot& slot = out.slots_[pos];
            switch (kind) {
              case FeatureKind::AvgDist:
                slot.comp0[i] = sum / static_cast<double>(k);
                break;
              case FeatureKind::MaxDist:
                slot.comp0[i] = nb.distance;
                break;
              case FeatureKind::MaxAvgComb:
                slot.comp0[i] = nb.distance;
                slot.comp1[i] = sum / static_cast<double>(k);
                break;
              case FeatureKind::LatLon:
                break;
            }
          }
          out.table_.set(i, pos, votes.winner() == ds[i].label);
          ++pos;
        }
      }
    }
  });

  out.build_slot_structures(threads);
  return out;
}

void FeatureIndexSet::build_slot_structures(unsigned threads) {
  const int dim = feature_dimensionality(kind_);
  parallel_for(slots_.size(), threads, [&](size_t begin, size_t end) {
    for (size_t s = begin; s < end; ++s) {
      Slot& slot = slots_[s];
      if (dim == 1) {
        slot.sorted.resize(points_);
        for (uint32_t i = 0; i < points_; ++i) slot.sorted[i] = i;
        std::sort(slot.sorted.begin(), slot.sorted.end(),
                  [&](uint32_t a, uint32_t b) {
                    if (slot.comp0[a] != slot.comp0[b])
                      return slot.comp0[a] < slot.comp0[b];
                    return a < b;
                  });
      } else {
        std::vector<std::array<double, 2>> pts(points_);
        for (size_t i = 0; i < points_; ++i)
          pts[i] = {slot.comp0[i], slot.comp1[i]};
        slot.tree = KdTree2(std::move(pts));
      }
    }
  });
}

size_t FeatureIndexSet::range_position(uint32_t k) const {
  const auto pos = range_.position_of(k);
  if (!pos)
    throw ConfigError("k=" + std::to_string(k) +
                      " is not in the candidate range " + range_.to_string());
  return *pos;
}

size_t FeatureIndexSet::value_slot(uint32_t k) const {
  const size_t pos = range_position(k);
  return feature_k_dependent(kind_) ? pos : 0;
}

FeatureValue FeatureIndexSet::value_of(uint32_t point, uint32_t k) const {
  if (point >= points_) throw ConfigError("point index out of range");
  const Slot& slot = slots_[value_slot(k)];
  FeatureValue v;
  v.dim = feature_dimensionality(kind_);
  v.components[0] = slot.comp0[point];
  if (v.dim == 2) v.components[1] = slot.comp1[point];
  return v;
}

namespace {

// Outward walk over the sorted values. Whole runs of equal values are
// collected so that the final (key, index) sort reproduces the global
// tie order of an exhaustive scan; candidates keep arriving while their
// key still equals the worst collected key.
std::vector<uint32_t> most_similar_sorted(const std::vector<double>& val,
                                          const std::vector<uint32_t>& sorted,
                                          double q, size_t l) {
  const size_t n = sorted.size();
  size_t left = static_cast<size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), q,
                       [&](uint32_t id, double x) { return val[id] < x; }) -
      sorted.begin());
  size_t right = left;  // left side is [0, left), right side is [right, n)

  std::vector<std::pair<double, uint32_t>> picked;
  picked.reserve(l + 8);
  double max_key = 0.0;

  const auto take_run_left = [&](double key) {
    const double v = val[sorted[left - 1]];
    size_t b = left;
    while (b > 0 && val[sorted[b - 1]] == v) --b;
    for (size_t i = b; i < left; ++i) picked.emplace_back(key, sorted[i]);
    left = b;
  };
  const auto take_run_right = [&](double key) {
    const double v = val[sorted[right]];
    size_t e = right;
    while (e < n && val[sorted[e]] == v) ++e;
    for (size_t i = right; i < e; ++i) picked.emplace_back(key, sorted[i]);
    right = e;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  while (left > 0 || right < n) {
    double lk = kInf, rk = kInf;
    if (left > 0) {
      const double d = q - val[sorted[left - 1]];
      lk = d * d;
    }
    if (right < n) {
      const double d = q - val[sorted[right]];
      rk = d * d;
    }
    const double next = std::min(lk, rk);
    if (picked.size() >= l && next > max_key) break;
    if (lk <= rk)
      take_run_left(lk);
    else
      take_run_right(rk);
    max_key = next;
  }

  std::sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  picked.resize(l);
  std::vector<uint32_t> out(l);
  for (size_t i = 0; i < l; ++i) out[i] = picked[i].second;
  return out;
}

}  // namespace

std::vector<uint32_t> FeatureIndexSet::most_similar(uint32_t k,
                                                    const FeatureValue& query,
                                                    size_t l) const {
  if (l < 1 || l > points_)
    throw ConfigError("most_similar: l=" + std::to_string(l) +
                      " outside [1, " + std::to_string(points_) + "]");
  if (query.dim != feature_dimensionality(kind_))
    throw ConfigError("most_similar: query feature dimension mismatch");
  const Slot& slot = slots_[value_slot(k)];

  if (query.dim == 1)
    return most_similar_sorted(slot.comp0, slot.sorted, query.components[0], l);

  const auto hits = slot.tree.nearest(query.components, l);
  std::vector<uint32_t> out(hits.size());
  for (size_t i = 0; i < hits.size(); ++i) out[i] = hits[i].index;
  return out;
}

// ----------------------------------------------------------- snapshot IO

namespace {

constexpr char kMagic[4] = {'A', 'F', 'I', 'X'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataError("snapshot truncated");
}

template <typename T>
void write_vec(std::ostream& out, const std::vector<T>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
void read_vec(std::istream& in, std::vector<T>& v, size_t count) {
  v.resize(count);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(count * sizeof(T)));
  if (!in) throw DataError("snapshot truncated");
}

}  // namespace

void FeatureIndexSet::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kVersion);
  write_pod(out, static_cast<uint32_t>(kind_));
  write_pod(out, static_cast<uint32_t>(range_.size()));
  write_vec(out, range_.values());
  write_pod(out, static_cast<uint64_t>(points_));
  write_vec(out, table_.raw());
  const int dim = feature_dimensionality(kind_);
  for (const Slot& slot : slots_) {
    write_vec(out, slot.comp0);
    if (dim == 2) write_vec(out, slot.comp1);
  }
  if (!out) throw DataError("snapshot write failed");
}

FeatureIndexSet FeatureIndexSet::load(std::istream& in) {
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("not a feature index snapshot");
  uint32_t version = 0;
  read_pod(in, version);
  if (version != kVersion)
    throw DataError("unsupported snapshot version " + std::to_string(version));

  uint32_t kind_raw = 0;
  read_pod(in, kind_raw);
  if (kind_raw > static_cast<uint32_t>(FeatureKind::LatLon))
    throw DataError("snapshot carries an unknown feature kind");

  FeatureIndexSet out;
  out.kind_ = static_cast<FeatureKind>(kind_raw);

  uint32_t range_len = 0;
  read_pod(in, range_len);
  std::vector<uint32_t> values;
  read_vec(in, values, range_len);
  try {
    out.range_ = KRange(std::move(values));
  } catch (const ConfigError& e) {
    throw DataError(std::string("snapshot range invalid: ") + e.what());
  }

  uint64_t points = 0;
  read_pod(in, points);
  out.points_ = static_cast<size_t>(points);

  std::vector<uint8_t> bits;
  read_vec(in, bits, out.points_ * out.range_.size());
  out.table_ = CorrectnessTable(out.points_, out.range_.size());
  for (size_t p = 0; p < out.points_; ++p)
    for (size_t s = 0; s < out.range_.size(); ++s)
      out.table_.set(p, s, bits[p * out.range_.size() + s] != 0);

  const bool k_dep = feature_k_dependent(out.kind_);
  const int dim = feature_dimensionality(out.kind_);
  out.slots_.resize(k_dep ? out.range_.size() : 1);
  for (Slot& slot : out.slots_) {
    read_vec(in, slot.comp0, out.points_);
    if (dim == 2) read_vec(in, slot.comp1, out.points_);
  }

  out.build_slot_structures(1);
  return out;
}

void FeatureIndexSet::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  save(out);
}

FeatureIndexSet FeatureIndexSet::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load(in);
}

}  // namespace acker
