#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tskan/kan_model.hpp"
#include "tskan/selection_pipeline.hpp"
#include "tskan/timeseries_data.hpp"

namespace tskan {

/// One activation sampled for display. `xs` are in original feature units
/// divided by `display_scale`; `ys` are raw contributions to the predicted MOS.
struct ActivationCurve {
  std::string feature_name;
  std::vector<double> scaled_xs;  ///< model-space inputs that were evaluated
  std::vector<double> xs;
  std::vector<double> ys;
  double display_scale = 1.0;
};

enum class RangePolicy {
  Data,  ///< 1st-99th percentile of the training data (needs a CurveRange)
  Grid,  ///< the activation's spline grid
};

struct CurveOptions {
  std::size_t n_points = 200;
  RangePolicy range = RangePolicy::Data;
  /// Series length T; DC features `M_<var>(0)` are displayed divided by it.
  std::size_t series_length = 1;
};

/// T for DC features, 1 for everything else.
double display_scale_for(std::string_view feature, std::size_t series_length);

/// Samples psi at n_points evenly spaced scaled inputs over the chosen range,
/// maps them through the inverse scaler and divides by the display scale.
/// Throws DataError for an unknown feature and ConfigError when the data
/// range is requested but not supplied, or n_points < 2.
ActivationCurve sample_activation_curve(const KanModel& model, const ScalerParams& scaler, std::string_view feature,
                                        const CurveOptions& options, std::optional<CurveRange> data_range = {});

/// `x,y` CSV with LF endings and 9 significant digits.
std::string curve_to_csv(const ActivationCurve& curve);
/// Self-contained SVG 1.1 line plot on a 640x480 viewBox.
std::string curve_to_svg(const ActivationCurve& curve);
/// `name,alpha,rank` CSV.
std::string importance_to_csv(const ImportanceReport& report);
/// Additive-architecture summary: one line per input into a sum node, line
/// opacity max(0.15, alpha / max alpha).
std::string importance_to_svg(const ImportanceReport& report);

/// File-system safe form of a feature name: `M_qp(1)` -> `M_qp_1`.
std::string feature_file_stem(std::string_view feature);

/// Writes curve_<stem>.csv/.svg for each selected feature, importance.csv and
/// importance.svg for the final model, importance_stage1.csv, and
/// manifest.json listing those files. Returns the manifest (relative paths,
/// manifest.json excluded). Throws IoError with the offending path.
std::vector<std::string> export_explanation_report(const PipelineResult& result, const std::filesystem::path& out_dir,
                                                   const CurveOptions& options);

struct PhaseCurve {
  double phase = 0.0;
  std::vector<double> values;  ///< cos(2 pi t / T + phase), t = 0..T-1
};

/// Cosine shapes of the first harmonic for each phase; T must be >= 4.
std::vector<PhaseCurve> phase_illustration(std::size_t length, const std::vector<double>& phases);
std::string phase_illustration_csv(const std::vector<PhaseCurve>& curves);

}  // namespace tskan
