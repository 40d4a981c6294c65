// Copyright 2026 The gaitbo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gaitbo/store/feature_store.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "gaitbo/errors.h"
#include "gaitbo/opt/sobol.h"
#include "gaitbo/sim/terrain.h"

namespace gaitbo::store {

static_assert(std::endian::native == std::endian::little, "store I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'G', 'B', 'F', 'S'};
constexpr std::uint32_t kVersion = 1;

class Fnv1a {
 public:
  void update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

void to_json(nlohmann::json& j, const StoreMetadata& m) {
  j = {{"seed", m.seed},     {"count", m.count},       {"config_hash", m.config_hash},
       {"created", m.created}, {"faults", m.faults}, {"duration", m.duration},
       {"extra", m.extra}};
}

void from_json(const nlohmann::json& j, StoreMetadata& m) {
  m = StoreMetadata{};
  m.seed = j.value("seed", m.seed);
  m.count = j.value("count", m.count);
  m.config_hash = j.value("config_hash", m.config_hash);
  m.created = j.value("created", m.created);
  m.faults = j.value("faults", m.faults);
  m.duration = j.value("duration", m.duration);
  if (j.contains("extra")) m.extra = j["extra"];
}

std::uint64_t hash_row(const double* data, int dim) {
  Fnv1a h;
  for (int i = 0; i < dim; ++i) {
    // +0.0 and -0.0 compare equal, so hash them alike.
    const double v = data[i] == 0.0 ? 0.0 : data[i];
    h.update(&v, sizeof v);
  }
  return h.value();
}

FeatureStore::FeatureStore(Eigen::MatrixXd params, Eigen::VectorXd phi, StoreMetadata meta)
    : params_(std::move(params)), phi_(std::move(phi)), meta_(std::move(meta)) {
  if (params_.rows() != phi_.size()) throw ParameterError("store row count differs from phi length");
  meta_.count = static_cast<std::uint64_t>(phi_.size());
  rebuild_index();
}

void FeatureStore::rebuild_index() {
  index_.clear();
  index_.reserve(size());
  // Row-major copy so each row hashes from contiguous memory.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = params_;
  for (std::size_t i = 0; i < size(); ++i) {
    index_.emplace(hash_row(rows.data() + i * dim(), dim()), i);
  }
}

std::optional<std::size_t> FeatureStore::find(const Eigen::VectorXd& x) const {
  if (x.size() != params_.cols()) return std::nullopt;
  const Eigen::VectorXd copy = x;
  const auto [lo, hi] = index_.equal_range(hash_row(copy.data(), dim()));
  std::optional<std::size_t> best;
  for (auto it = lo; it != hi; ++it) {
    if (params_.row(static_cast<Eigen::Index>(it->second)).transpose() == x) {
      if (!best || it->second < *best) best = it->second;
    }
  }
  return best;
}

std::size_t FeatureStore::index_of(const Eigen::VectorXd& x) const {
  const auto i = find(x);
  if (!i) throw LookupError("parameter vector is not a feature-store row");
  return *i;
}

double FeatureStore::lookup_phi(const Eigen::VectorXd& x) const { return phi_[static_cast<Eigen::Index>(index_of(x))]; }

void FeatureStore::set_phi(std::size_t i, double phi) {
  if (i >= size()) throw LookupError("store row out of range");
  phi_[static_cast<Eigen::Index>(i)] = phi;
}

std::vector<std::size_t> FeatureStore::top_k(std::size_t k) const {
  std::vector<std::size_t> idx(size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double pa = phi_[static_cast<Eigen::Index>(a)];
                      const double pb = phi_[static_cast<Eigen::Index>(b)];
                      return pa > pb || (pa == pb && a < b);
                    });
  idx.resize(k);
  return idx;
}

double FeatureStore::phi_mean() const { return size() == 0 ? 0.0 : phi_.mean(); }

double FeatureStore::phi_stddev() const {
  if (size() == 0) return 0.0;
  const double m = phi_mean();
  return std::sqrt((phi_.array() - m).square().mean());
}

double compute_phi(const control::PolicyParams& p, const PrecomputeConfig& cfg, bool* fault) {
  if (fault) *fault = false;
  try {
    const sim::Trajectory traj =
        sim::rollout(p, cfg.model, sim::flat_ground(), cfg.duration, cfg.sim);
    if (traj.termination == sim::Termination::kFault) {
      if (fault) *fault = true;
      return 0.0;
    }
    return metrics::dog_score(traj, cfg.dog).phi;
  } catch (const std::exception&) {
    if (fault) *fault = true;
    return 0.0;
  }
}

FeatureStore precompute(const PrecomputeConfig& cfg) {
  if (cfg.n < 1) throw ParameterError("store size must be at least 1");
  cfg.bounds.validate();
  const int dim = static_cast<int>(control::kParamCount);
  const Eigen::MatrixXd unit = opt::sobol_points(static_cast<int>(cfg.n), dim, cfg.scramble_seed);
  Eigen::MatrixXd params(unit.rows(), dim);
  for (Eigen::Index i = 0; i < unit.rows(); ++i) {
    const Eigen::VectorXd u = unit.row(i).transpose();
    const control::PolicyParams p = cfg.bounds.from_unit(std::span<const double>(u.data(), dim));
    for (int c = 0; c < dim; ++c) params(i, c) = p.values[c];
  }

  Eigen::VectorXd phi(unit.rows());
  std::vector<unsigned char> faults(cfg.n, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.n; i = next++) {
      control::PolicyParams p;
      for (int c = 0; c < dim; ++c) p.values[c] = params(static_cast<Eigen::Index>(i), c);
      bool fault = false;
      phi[static_cast<Eigen::Index>(i)] = compute_phi(p, cfg, &fault);
      faults[i] = fault ? 1 : 0;
    }
  };
  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  StoreMetadata meta;
  meta.seed = cfg.scramble_seed;
  meta.count = cfg.n;
  meta.config_hash = sim::sim_config_hash(cfg.model, cfg.sim);
  meta.created = cfg.created;
  meta.faults = static_cast<std::uint64_t>(std::count(faults.begin(), faults.end(), 1));
  meta.duration = cfg.duration;
  meta.extra = {{"bounds", cfg.bounds}, {"dog", cfg.dog}};
  return FeatureStore(std::move(params), std::move(phi), std::move(meta));
}

void save(const FeatureStore& s, std::ostream& out) {
  std::string buf;
  auto put = [&](const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); };
  put(kMagic, 4);
  put(&kVersion, 4);
  const std::uint64_t n = s.size();
  const std::uint32_t dim = static_cast<std::uint32_t>(s.dim());
  put(&n, 8);
  put(&dim, 4);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = s.params();
  put(rows.data(), sizeof(double) * n * dim);
  put(s.phi().data(), sizeof(double) * n);
  const std::string meta = nlohmann::json(s.metadata()).dump();
  const std::uint64_t meta_len = meta.size();
  put(&meta_len, 8);
  put(meta.data(), meta.size());
  Fnv1a h;
  h.update(buf.data(), buf.size());
  const std::uint64_t sum = h.value();
  put(&sum, 8);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError("failed to write feature store");
}

void save(const FeatureStore& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  save(s, out);
}

FeatureStore load(std::istream& in) {
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  auto take = [&](void* dst, std::size_t n) {
    if (buf.size() - pos < n) throw FormatError("feature store truncated");
    std::memcpy(dst, buf.data() + pos, n);
    pos += n;
  };
  char magic[4];
  take(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not a feature store file");
  std::uint32_t version = 0;
  take(&version, 4);
  if (version != kVersion) throw FormatError("unsupported feature store version");
  std::uint64_t n = 0;
  std::uint32_t dim = 0;
  take(&n, 8);
  take(&dim, 4);
  if (dim == 0 || n > (buf.size() / 8) || n * dim > buf.size() / 8) {
    throw FormatError("feature store truncated");
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(n, dim);
  take(rows.data(), sizeof(double) * n * dim);
  Eigen::VectorXd phi(static_cast<Eigen::Index>(n));
  take(phi.data(), sizeof(double) * n);
  std::uint64_t meta_len = 0;
  take(&meta_len, 8);
  if (meta_len > buf.size() - pos) throw FormatError("feature store truncated");
  std::string meta(buf.data() + pos, meta_len);
  pos += meta_len;
  Fnv1a h;
  h.update(buf.data(), pos);
  std::uint64_t sum = 0;
  take(&sum, 8);
  if (sum != h.value()) throw FormatError("feature store checksum mismatch");
  if (pos != buf.size()) throw FormatError("trailing bytes after feature store");
  StoreMetadata m;
  try {
    m = nlohmann::json::parse(meta).get<StoreMetadata>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad feature store metadata: ") + e.what());
  }
  return FeatureStore(Eigen::MatrixXd(rows), std::move(phi), std::move(m));
}

FeatureStore load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return load(in);
}

bool check_staleness(const FeatureStore& s, std::uint64_t expected_hash, StalenessPolicy policy) {
  if (s.metadata().config_hash == expected_hash) return true;
  std::ostringstream msg;
  msg << "feature store is stale: config hash " << std::hex << s.metadata().config_hash
      << " differs from current " << expected_hash;
  if (policy == StalenessPolicy::kFail) throw StateError(msg.str());
  if (policy == StalenessPolicy::kWarn) std::cerr << "warning: " << msg.str() << '\n';
  return false;
}

void write_csv(const FeatureStore& s, std::ostream& out) {
  out.precision(17);
  for (int c = 0; c < s.dim(); ++c) {
    out << (s.dim() == static_cast<int>(control::kParamCount)
                ? std::string(control::param_name(static_cast<control::ParamId>(c)))
                : "x" + std::to_string(c))
        << ',';
  }
  out << "phi\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int c = 0; c < s.dim(); ++c) out << s.params()(static_cast<Eigen::Index>(i), c) << ',';
    out << s.phi()[static_cast<Eigen::Index>(i)] << '\n';
  }
}

}  // namespace gaitbo::store
