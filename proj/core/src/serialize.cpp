#include "ptomo/serialize.hpp"

namespace ptomo::io {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, "malformed JSON: " + what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing '") + key + "'");
  return j.at(key);
}

json vec3_to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) bad("3-vector expected");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json rmatrix_to_json(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(row);
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("matrix expected");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto m = static_cast<Eigen::Index>(j[0].size());
  CMatrix out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != m) bad("ragged matrix");
    for (Eigen::Index c = 0; c < m; ++c) {
      const json& e = j[r][c];
      if (e.is_number()) {
        out(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        out(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        bad("matrix entry must be a number or [re, im]");
      }
    }
  }
  return out;
}

json vector_to_json(const RVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

RVector vector_from_json(const json& j) {
  if (!j.is_array()) bad("vector expected");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json channel_to_json(const ChannelSpec& ch) {
  json dirs = json::array();
  for (const auto& b : ch.mub.bases) {
    json basis = json::array();
    for (Eigen::Index k = 0; k < b.cols(); ++k) {
      json vec = json::array();
      for (Eigen::Index r = 0; r < b.rows(); ++r) {
        vec.push_back(json::array({b(r, k).real(), b(r, k).imag()}));
      }
      basis.push_back(vec);
    }
    dirs.push_back(basis);
  }
  return json{{"dim", ch.mub.dim}, {"lambda", vector_to_json(ch.lambda)}, {"directions", dirs}};
}

ChannelSpec channel_from_json(const json& j) {
  const int d = field(j, "dim").get<int>();
  ChannelSpec ch;
  ch.lambda = vector_from_json(field(j, "lambda"));
  if (j.contains("directions")) {
    Mub mub;
    mub.dim = d;
    for (const auto& basis : j.at("directions")) {
      CMatrix b(d, static_cast<Eigen::Index>(basis.size()));
      if (static_cast<int>(basis.size()) != d) bad("each basis needs dim vectors");
      for (int k = 0; k < d; ++k) {
        if (static_cast<int>(basis[k].size()) != d) bad("basis vector has the wrong length");
        for (int r = 0; r < d; ++r) {
          b(r, k) = cplx(basis[k][r][0].get<double>(), basis[k][r][1].get<double>());
        }
      }
      mub.bases.push_back(b);
    }
    if (mub_residual(mub) > 1e-9) {
      throw Error(ErrorKind::kInvalidChannel, "channel directions are not mutually unbiased");
    }
    ch.mub = std::move(mub);
  } else if (j.contains("axes")) {
    if (d != 2) bad("axes are only meaningful for qubits");
    const json& a = j.at("axes");
    if (!a.is_array() || a.size() != 3) bad("three axes expected");
    ch.mub = mub_from_bloch_axes({vec3_from_json(a[0]), vec3_from_json(a[1]),
                                  vec3_from_json(a[2])});
  } else {
    ch.mub = standard_mub(d);
  }
  ch.channel();
  return ch;
}

json config_to_json(const TomographyConfiguration& c) {
  json j;
  if (c.input.dim() == 2) {
    j["input_bloch"] = vec3_to_json(density_to_bloch(c.input).vec());
    json elems = json::array();
    const auto& p = linalg::pauli();
    for (const auto& e : c.povm.elements()) {
      elems.push_back(json::array({linalg::trace_product(p[0], e),
                                   linalg::trace_product(p[1], e),
                                   linalg::trace_product(p[2], e),
                                   linalg::trace_product(p[3], e)}));
    }
    j["povm_blochs"] = elems;
  } else {
    j["input_matrix"] = matrix_to_json(c.input.matrix());
    json elems = json::array();
    for (const auto& e : c.povm.elements()) elems.push_back(matrix_to_json(e));
    j["povm_matrices"] = elems;
  }
  if (!c.povm.labels().empty()) j["labels"] = c.povm.labels();
  j["shots"] = c.shots;
  return j;
}

TomographyConfiguration config_from_json(const json& j) {
  DensityMatrix input = DensityMatrix::maximally_mixed(2);
  if (j.contains("input_bloch")) {
    input = bloch_to_density(BlochVector(vec3_from_json(j.at("input_bloch"))));
  } else {
    input = DensityMatrix::from_matrix(matrix_from_json(field(j, "input_matrix")));
  }
  std::vector<CMatrix> elems;
  if (j.contains("povm_blochs")) {
    const auto& p = linalg::pauli();
    for (const auto& e : j.at("povm_blochs")) {
      if (!e.is_array() || e.size() != 4) bad("POVM Bloch entries are [w, x, y, z]");
      CMatrix m = e[0].get<double>() * p[0];
      for (int i = 1; i < 4; ++i) m += e[i].get<double>() * p[i];
      elems.push_back(0.5 * m);
    }
  } else {
    for (const auto& e : field(j, "povm_matrices")) elems.push_back(matrix_from_json(e));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  TomographyConfiguration c{input, Povm::from_elements(std::move(elems), std::move(labels)),
                            j.value("shots", std::int64_t{1})};
  c.validate();
  return c;
}

json configs_to_json(std::span<const TomographyConfiguration> configs) {
  json a = json::array();
  for (const auto& c : configs) a.push_back(config_to_json(c));
  return a;
}

std::vector<TomographyConfiguration> configs_from_json(const json& j) {
  if (!j.is_array()) bad("configuration list expected");
  std::vector<TomographyConfiguration> out;
  for (const auto& c : j) out.push_back(config_from_json(c));
  return out;
}

json record_to_json(std::span<const TomographyConfiguration> configs,
                    const MeasurementRecord& record) {
  json counts = json::array();
  for (const auto& e : record.entries) counts.push_back(e.counts);
  return json{{"configs", configs_to_json(configs)}, {"counts", counts}};
}

std::pair<std::vector<TomographyConfiguration>, MeasurementRecord> record_from_json(
    const json& j) {
  auto configs = configs_from_json(field(j, "configs"));
  const json& counts = field(j, "counts");
  if (!counts.is_array() || counts.size() != configs.size()) {
    bad("one count vector per configuration expected");
  }
  MeasurementRecord rec;
  for (std::size_t g = 0; g < configs.size(); ++g) {
    OutcomeCounts oc;
    oc.counts = counts[g].get<std::vector<std::int64_t>>();
    if (static_cast<int>(oc.counts.size()) != configs[g].povm.size()) {
      bad("count vector length differs from the POVM size");
    }
    oc.shots = 0;
    for (auto c : oc.counts) oc.shots += c;
    configs[g].shots = oc.shots;
    rec.entries.push_back(std::move(oc));
  }
  rec.validate();
  return {std::move(configs), std::move(rec)};
}

json estimation_to_json(const EstimationResult& r) {
  return json{{"lambda", vector_to_json(r.lambda)},
              {"choi", matrix_to_json(r.choi.entries)},
              {"residual", r.residual},
              {"iterations", r.iterations}};
}

json design_to_json(std::span<const TomographyConfiguration> configs, double objective,
                    const RMatrix& fisher) {
  return json{{"configs", configs_to_json(configs)},
              {"objective", objective},
              {"fisher_matrix", rmatrix_to_json(fisher)}};
}

json case_study_spec_to_json(const CaseStudySpec& spec) {
  return json{{"channel", channel_to_json(spec.channel)},
              {"strategy", std::string(to_string(spec.strategy))},
              {"shot_grid", spec.shot_grid},
              {"trials", spec.trials},
              {"seed", spec.seed},
              {"exact", spec.exact}};
}

CaseStudySpec case_study_spec_from_json(const json& j) {
  const Strategy s = strategy_from_string(field(j, "strategy").get<std::string>());
  CaseStudySpec spec = default_case_study(s);
  if (j.contains("channel")) spec.channel = channel_from_json(j.at("channel"));
  if (j.contains("shot_grid")) spec.shot_grid = j.at("shot_grid").get<std::vector<std::int64_t>>();
  spec.trials = j.value("trials", spec.trials);
  spec.seed = j.value("seed", spec.seed);
  spec.exact = j.value("exact", spec.exact);
  spec.validate();
  return spec;
}

json metrics_to_json(std::span<const MetricsRow> rows) {
  json a = json::array();
  for (const auto& r : rows) {
    json row{{"n_shots", r.n_shots},
             {"trial_count", r.trial_count},
             {"failures", r.failures},
             {"lambda_mean", vector_to_json(r.lambda_mean)},
             {"lambda_var", vector_to_json(r.lambda_var)},
             {"hs_error", r.hs_error}};
    if (r.closed_form_mean) row["closed_form_mean"] = vector_to_json(*r.closed_form_mean);
    a.push_back(row);
  }
  return a;
}

json direction_estimate_to_json(const DirectionEstimate& est) {
  json dirs = json::array();
  for (const auto& v : est.directions) dirs.push_back(vec3_to_json(v));
  json searches = json::array();
  for (std::size_t s = 0; s < est.iterates.size(); ++s) {
    json its = json::array();
    for (const auto& v : est.iterates[s]) its.push_back(vec3_to_json(v));
    searches.push_back(json{{"iterates", its},
                            {"lambda_first_pass", est.lambda_first_pass[s]},
                            {"restarts", est.restarts[s]}});
  }
  return json{{"directions", dirs}, {"searches", searches}};
}

}  // namespace ptomo::io
