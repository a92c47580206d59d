#include "kronfit/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "kronfit/errors.hpp"

namespace kronfit {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string to_json(const KronPoint& theta) {
  nlohmann::json doc;
  doc["dims"] = theta.dims().dims();
  nlohmann::json factors = nlohmann::json::array();
  for (int a = 0; a < theta.k(); ++a) {
    const Eigen::MatrixXd& m = theta.factor(a).mat();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
    }
    factors.push_back(flat);
  }
  doc["factors"] = std::move(factors);
  return doc.dump();
}

KronPoint kron_point_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw FormatError("kron point: not valid JSON");
  }
  try {
    const std::vector<int> raw_dims =
        doc.at("dims").get<std::vector<int>>();
    const auto& factor_docs = doc.at("factors");
    if (!factor_docs.is_array() || factor_docs.size() != raw_dims.size()) {
      throw FormatError("kron point: factors do not match dims");
    }
    const DimVector dims(raw_dims);
    std::vector<PDMat> factors;
    factors.reserve(dims.k());
    for (int a = 0; a < dims.k(); ++a) {
      const std::vector<double> flat =
          factor_docs.at(a).get<std::vector<double>>();
      const int d = dims[a];
      if (flat.size() != static_cast<std::size_t>(d) * d) {
        throw FormatError("kron point: factor entry count mismatch");
      }
      Eigen::MatrixXd m(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = flat[i * d + j];
      }
      factors.push_back(PDMat(SymMat(m)));
    }
    return KronPoint::from_factors(std::move(factors));
  } catch (const FormatError&) {
    throw;
  } catch (const nlohmann::json::exception&) {
    throw FormatError("kron point: missing or mistyped field");
  } catch (const Error& e) {
    throw FormatError(std::string("kron point: invalid content: ") + e.what());
  }
}

void save_kron_point(const KronPoint& theta, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw Error("save_kron_point: cannot open '" + path + "' for writing");
  }
  out << to_json(theta) << "\n";
  if (!out.good()) {
    throw Error("save_kron_point: write failure on '" + path + "'");
  }
}

KronPoint load_kron_point(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("load_kron_point: cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return kron_point_from_json(buffer.str());
}

}  // namespace kronfit
