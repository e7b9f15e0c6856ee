#pragma once

#include <nlohmann/json.hpp>
#include <span>
#include <utility>
#include <vector>

#include "ptomo/channel.hpp"
#include "ptomo/design.hpp"
#include "ptomo/estimate.hpp"
#include "ptomo/harness.hpp"

namespace ptomo::io {

using nlohmann::json;

/// Complex matrices are nested row arrays of [re, im] pairs.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);
json vector_to_json(const RVector& v);
RVector vector_from_json(const json& j);

/// {dim, lambda, directions}: directions[i][k] is |phi_{i,k}> as [re, im]
/// pairs. Reading also accepts "axes" (three orthonormal Bloch vectors,
/// qubit only) or no directions at all (standard MUB).
json channel_to_json(const ChannelSpec& ch);
ChannelSpec channel_from_json(const json& j);

/// Qubit states and POVM elements are written in Bloch form: input_bloch
/// [x, y, z] and povm_blochs [w, x, y, z] for (w I + x.sigma) / 2. Other
/// dimensions use input_matrix and povm_matrices.
json config_to_json(const TomographyConfiguration& c);
TomographyConfiguration config_from_json(const json& j);
json configs_to_json(std::span<const TomographyConfiguration> configs);
std::vector<TomographyConfiguration> configs_from_json(const json& j);

/// {configs, counts}.
json record_to_json(std::span<const TomographyConfiguration> configs,
                    const MeasurementRecord& record);
std::pair<std::vector<TomographyConfiguration>, MeasurementRecord> record_from_json(
    const json& j);

/// {lambda, choi, residual, iterations}.
json estimation_to_json(const EstimationResult& r);

/// {configs, objective, fisher_matrix}.
json design_to_json(std::span<const TomographyConfiguration> configs, double objective,
                    const RMatrix& fisher);

json case_study_spec_to_json(const CaseStudySpec& spec);
CaseStudySpec case_study_spec_from_json(const json& j);

json metrics_to_json(std::span<const MetricsRow> rows);

json direction_estimate_to_json(const DirectionEstimate& est);

}  // namespace ptomo::io
