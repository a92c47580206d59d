#include "kronfit/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace kronfit {

static_assert(std::endian::native == std::endian::little,
              "TNDATA01 I/O assumes a little-endian host");

namespace {

using RowMajorMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>;
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

void require_mode(const DimVector& dims, int a, const char* where) {
  if (a < 0 || a >= dims.k()) {
    throw InvalidInput(std::string(where) + ": mode index out of range");
  }
}

// Block geometry of mode a: within each sample the data decomposes into
// `prefix` contiguous blocks of shape d_a x `suffix` (row-major), whose
// rows are indexed by i_a.
struct ModeBlocks {
  std::int64_t prefix;
  std::int64_t suffix;
};

ModeBlocks mode_blocks(const DimVector& dims, int a) {
  std::int64_t prefix = 1, suffix = 1;
  for (int m = 0; m < a; ++m) prefix *= dims[m];
  for (int m = a + 1; m < dims.k(); ++m) suffix *= dims[m];
  return {prefix, suffix};
}

constexpr char kMagic[8] = {'T', 'N', 'D', 'A', 'T', 'A', '0', '1'};
constexpr std::uint32_t kMaxHeaderBytes = 1u << 20;

}  // namespace

Dataset::Dataset(DimVector dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  const std::int64_t d = dims_.total();
  if (data_.empty() || data_.size() % static_cast<size_t>(d) != 0) {
    throw InvalidInput("Dataset: data length must be a positive multiple of D");
  }
  n_ = static_cast<int>(data_.size() / static_cast<size_t>(d));
  squared_norm_ = 0.0;
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw InvalidInput("Dataset: entries must be finite");
    }
    squared_norm_ += v * v;
  }
}

Dataset Dataset::sample_model(const KronPoint& theta, int n, Seed seed) {
  if (n < 1) {
    throw InvalidInput("sample_model: need n >= 1");
  }
  const DimVector& dims = theta.dims();
  const std::int64_t d = dims.total();
  CounterRng rng(seed, rng_domain::kSample);
  std::vector<double> data(static_cast<size_t>(n) * static_cast<size_t>(d));
  for (double& v : data) v = rng.next_gaussian();
  Dataset z(dims, std::move(data));
  for (int a = 0; a < dims.k(); ++a) {
    z = mode_multiply(z, a, theta.factor(a).fn(SpectralFn::kInvSqrt));
  }
  return z;
}

double trace_rho(const Dataset& x) {
  return x.squared_norm() /
         (static_cast<double>(x.n()) * static_cast<double>(x.total_dim()));
}

SymMat partial_trace_one(const Dataset& x, int a) {
  require_mode(x.dims(), a, "partial_trace_one");
  const int da = x.dims()[a];
  const ModeBlocks mb = mode_blocks(x.dims(), a);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(da, da);
  for (int i = 0; i < x.n(); ++i) {
    const double* base = x.row(i);
    for (std::int64_t p = 0; p < mb.prefix; ++p) {
      ConstRowMajorMap block(base + p * da * mb.suffix, da, mb.suffix);
      gram.noalias() += block * block.transpose();
    }
  }
  gram /= static_cast<double>(x.n()) * static_cast<double>(x.total_dim());
  return SymMat(gram);
}

SymMat partial_trace_two(const Dataset& x, int a, int b) {
  const DimVector& dims = x.dims();
  require_mode(dims, a, "partial_trace_two");
  require_mode(dims, b, "partial_trace_two");
  if (a == b) {
    throw InvalidInput("partial_trace_two: modes must differ");
  }
  const std::int64_t da = dims[a], db = dims[b];
  if (da * db > kMaxMaterializeDim) {
    throw TooLarge("partial_trace_two: d_a*d_b exceeds dense limit");
  }
  const int u = std::min(a, b), v = std::max(a, b);
  const std::int64_t du = dims[u], dv = dims[v];
  std::int64_t pre = 1, mid = 1, suf = 1;
  for (int m = 0; m < u; ++m) pre *= dims[m];
  for (int m = u + 1; m < v; ++m) mid *= dims[m];
  for (int m = v + 1; m < dims.k(); ++m) suf *= dims[m];

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(da * db, da * db);
  Eigen::VectorXd slice(da * db);
  for (int i = 0; i < x.n(); ++i) {
    const double* base = x.row(i);
    for (std::int64_t p = 0; p < pre; ++p) {
      for (std::int64_t q = 0; q < mid; ++q) {
        for (std::int64_t s = 0; s < suf; ++s) {
          // Gather the (i_u, i_v) slice; output rows are (i_a, i_b)
          // row-major, so transpose the roles when a is the later mode.
          for (std::int64_t iu = 0; iu < du; ++iu) {
            for (std::int64_t iv = 0; iv < dv; ++iv) {
              const double value =
                  base[(((p * du + iu) * mid + q) * dv + iv) * suf + s];
              const std::int64_t row =
                  (a == u) ? iu * db + iv : iv * db + iu;
              slice(row) = value;
            }
          }
          gram.selfadjointView<Eigen::Lower>().rankUpdate(slice);
        }
      }
    }
  }
  gram.triangularView<Eigen::StrictlyUpper>() =
      gram.transpose().triangularView<Eigen::StrictlyUpper>();
  gram /= static_cast<double>(x.n()) * static_cast<double>(x.total_dim());
  return SymMat(gram);
}

Dataset mode_multiply(const Dataset& x, int a, const SymMat& m) {
  require_mode(x.dims(), a, "mode_multiply");
  const int da = x.dims()[a];
  if (m.dim() != da) {
    throw InvalidInput("mode_multiply: matrix dimension mismatch");
  }
  const ModeBlocks mb = mode_blocks(x.dims(), a);
  std::vector<double> out(x.data());
  for (int i = 0; i < x.n(); ++i) {
    double* base = out.data() + static_cast<std::int64_t>(i) * x.total_dim();
    for (std::int64_t p = 0; p < mb.prefix; ++p) {
      RowMajorMap block(base + p * da * mb.suffix, da, mb.suffix);
      block = m.mat() * block;
    }
  }
  return Dataset(x.dims(), std::move(out));
}

Dataset whiten(const Dataset& x, const KronPoint& theta) {
  if (x.dims() != theta.dims()) {
    throw InvalidInput("whiten: dimension mismatch");
  }
  Dataset out = x;
  for (int a = 0; a < theta.k(); ++a) {
    out = mode_multiply(out, a, theta.factor(a).fn(SpectralFn::kSqrt));
  }
  return out;
}

void save(const Dataset& x, const std::string& path) {
  nlohmann::json header;
  header["k"] = x.dims().k();
  header["dims"] = x.dims().dims();
  header["n"] = x.n();
  header["dtype"] = "f64";
  header["order"] = "row-major, last-fastest";
  header["endianness"] = "little";
  const std::string header_text = header.dump();
  if (header_text.size() > kMaxHeaderBytes) {
    throw Error("save: header unexpectedly large");
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("save: cannot open '" + path + "' for writing");
  }
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t len = static_cast<std::uint32_t>(header_text.size());
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header_text.data(), static_cast<std::streamsize>(len));
  out.write(reinterpret_cast<const char*>(x.data().data()),
            static_cast<std::streamsize>(x.data().size() * sizeof(double)));
  if (!out) {
    throw Error("save: write failure on '" + path + "'");
  }
}

Dataset load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("load: cannot open '" + path + "'");
  }
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("load: bad magic bytes (not a TNDATA01 file)");
  }
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len == 0 || len > kMaxHeaderBytes) {
    throw FormatError("load: implausible header length");
  }
  std::string header_text(len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(len));
  if (!in) {
    throw FormatError("load: truncated header");
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception&) {
    throw FormatError("load: header is not valid JSON");
  }
  DimVector dims({1});
  std::int64_t n = 0;
  try {
    if (header.at("dtype").get<std::string>() != "f64" ||
        header.at("order").get<std::string>() != "row-major, last-fastest" ||
        header.at("endianness").get<std::string>() != "little") {
      throw FormatError("load: unsupported dtype/order/endianness");
    }
    const auto dim_list = header.at("dims").get<std::vector<int>>();
    if (header.at("k").get<int>() != static_cast<int>(dim_list.size())) {
      throw FormatError("load: k does not match dims length");
    }
    dims = DimVector(dim_list);
    n = header.at("n").get<std::int64_t>();
  } catch (const FormatError&) {
    throw;
  } catch (const nlohmann::json::exception&) {
    throw FormatError("load: missing or mistyped header field");
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("load: invalid dims in header: ") + e.what());
  }
  if (n < 1 || n > (std::int64_t{1} << 31)) {
    throw FormatError("load: invalid sample count");
  }

  const std::int64_t count = n * dims.total();
  std::vector<double> data(static_cast<size_t>(count));
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in || in.gcount() !=
                 static_cast<std::streamsize>(count * sizeof(double))) {
    throw FormatError("load: payload shorter than header promises");
  }
  in.peek();
  if (!in.eof()) {
    throw FormatError("load: trailing bytes after payload");
  }
  try {
    return Dataset(dims, std::move(data));
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("load: invalid payload: ") + e.what());
  }
}

}  // namespace kronfit
