#include "tskan/explain_export.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tskan/error.hpp"
#include "tskan/format.hpp"
#include "tskan/spectral_features.hpp"

namespace tskan {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 610.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 420.0;

std::string num(double v) { return format_number(v, 6); }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_open() {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n"
         "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
}

}  // namespace

double display_scale_for(std::string_view feature, std::size_t series_length) {
  const auto parsed = parse_feature_name(feature);
  if (parsed && parsed->kind == FeatureKind::Magnitude && parsed->frequency == 0 && series_length > 0)
    return static_cast<double>(series_length);
  return 1.0;
}

ActivationCurve sample_activation_curve(const KanModel& model, const ScalerParams& scaler, std::string_view feature,
                                        const CurveOptions& options, std::optional<CurveRange> data_range) {
  if (options.n_points < 2) throw ConfigError("a curve needs at least 2 points");
  const auto it = std::find_if(model.activations.begin(), model.activations.end(),
                               [&](const SplineActivation& a) { return a.input_name == feature; });
  if (it == model.activations.end()) throw DataError("model has no input feature '" + std::string(feature) + "'");
  const ScalerParams column = scaler.subset({std::string(feature)});

  double lo = it->grid.front();
  double hi = it->grid.back();
  if (options.range == RangePolicy::Data) {
    if (!data_range) throw ConfigError("data range requested for '" + std::string(feature) + "' but none recorded");
    lo = data_range->lo;
    hi = data_range->hi;
    if (!(hi > lo)) {  // constant training column
      lo -= 0.5;
      hi += 0.5;
    }
  }

  ActivationCurve curve;
  curve.feature_name = std::string(feature);
  curve.display_scale = display_scale_for(feature, options.series_length);
  const std::size_t n = options.n_points;
  Matrix scaled(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    scaled(i, 0) = x;
    curve.scaled_xs.push_back(x);
    curve.ys.push_back(eval_activation(*it, x));
  }
  const Matrix original = invert_scaler(column, scaled);
  for (std::size_t i = 0; i < n; ++i) curve.xs.push_back(original(i, 0) / curve.display_scale);
  return curve;
}

std::string curve_to_csv(const ActivationCurve& curve) {
  std::string out = "x,y\n";
  for (std::size_t i = 0; i < curve.xs.size(); ++i) {
    out += format_number(curve.xs[i], 9);
    out += ',';
    out += format_number(curve.ys[i], 9);
    out += '\n';
  }
  return out;
}

std::string curve_to_svg(const ActivationCurve& curve) {
  const auto [xmin_it, xmax_it] = std::minmax_element(curve.xs.begin(), curve.xs.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(curve.ys.begin(), curve.ys.end());
  const double xmin = *xmin_it;
  const double xmax = *xmax_it > xmin ? *xmax_it : xmin + 1.0;
  double ymin = *ymin_it;
  double ymax = *ymax_it;
  if (!(ymax - ymin > 1e-12)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
  const auto py = [&](double y) { return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop); };

  std::string label = curve.feature_name;
  if (curve.display_scale != 1.0) label += "/" + num(curve.display_scale);

  std::string s = svg_open();
  s += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kBottom) + "\" x2=\"" + num(kRight) + "\" y2=\"" + num(kBottom) + "\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(kBottom) + "\"/>\n";
  s += "</g>\n<path fill=\"none\" stroke=\"#1f4e9e\" stroke-width=\"2\" d=\"";
  for (std::size_t i = 0; i < curve.xs.size(); ++i) {
    s += (i == 0 ? "M" : " L") + num(px(curve.xs[i])) + " " + num(py(curve.ys[i]));
  }
  s += "\"/>\n";
  s += "<g font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\">" + xml_escape(label) + "</text>\n";
  s += "<text x=\"" + num(kLeft) + "\" y=\"440\" text-anchor=\"middle\">" + num(xmin) + "</text>\n";
  s += "<text x=\"" + num(kRight) + "\" y=\"440\" text-anchor=\"middle\">" + num(xmax) + "</text>\n";
  s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kBottom) + "\" text-anchor=\"end\">" + num(ymin) + "</text>\n";
  s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + 5) + "\" text-anchor=\"end\">" + num(ymax) + "</text>\n";
  s += "<text x=\"320\" y=\"468\" text-anchor=\"middle\">" + xml_escape(label) + "</text>\n";
  s += "</g>\n</svg>\n";
  return s;
}

std::string importance_to_csv(const ImportanceReport& report) {
  std::string out = "name,alpha,rank\n";
  for (const auto& e : report.entries) out += e.name + "," + format_number(e.alpha, 9) + "," + std::to_string(e.rank) + "\n";
  return out;
}

std::string importance_to_svg(const ImportanceReport& report) {
  double max_alpha = 0.0;
  for (const auto& e : report.entries) max_alpha = std::max(max_alpha, e.alpha);
  const std::size_t n = report.entries.size();
  const double sum_x = 540.0;
  const double sum_y = kHeight / 2.0;

  std::string s = svg_open();
  s += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = report.entries[i];
    const double y = n == 1 ? sum_y : kTop + (kBottom - kTop) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double opacity = std::max(0.15, max_alpha > 0.0 ? e.alpha / max_alpha : 0.0);
    s += "<line x1=\"190\" y1=\"" + num(y) + "\" x2=\"" + num(sum_x) + "\" y2=\"" + num(sum_y) +
         "\" stroke=\"#1f4e9e\" stroke-width=\"3\" stroke-opacity=\"" + num(opacity) + "\"/>\n";
    s += "<text x=\"180\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + xml_escape(e.name) + " (" +
         format_number(e.alpha, 3) + ")</text>\n";
  }
  s += "<circle cx=\"" + num(sum_x) + "\" cy=\"" + num(sum_y) + "\" r=\"16\" fill=\"white\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(sum_x) + "\" y=\"" + num(sum_y + 5) + "\" text-anchor=\"middle\">+</text>\n";
  s += "<text x=\"" + num(sum_x + 24) + "\" y=\"" + num(sum_y + 4) + "\">MOS</text>\n";
  s += "</g>\n</svg>\n";
  return s;
}

std::string feature_file_stem(std::string_view feature) {
  std::string out;
  for (const char c : feature) {
    if (c == '(') {
      out += '_';
    } else if (c == ')') {
      continue;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
      out += c;
    } else {
      out += '_';
    }
  }
  return out;
}

std::vector<std::string> export_explanation_report(const PipelineResult& result, const std::filesystem::path& out_dir,
                                                   const CurveOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir.string() + "': " + ec.message());

  std::vector<std::string> manifest;
  const auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file((out_dir / name).string(), content);
    manifest.push_back(name);
  };

  for (const auto& feature : result.selected_features) {
    std::optional<CurveRange> range;
    if (const auto it = result.data_ranges.find(feature); it != result.data_ranges.end()) range = it->second;
    const ActivationCurve curve = sample_activation_curve(result.final_model, result.scaler, feature, options, range);
    const std::string stem = "curve_" + feature_file_stem(feature);
    emit(stem + ".csv", curve_to_csv(curve));
    emit(stem + ".svg", curve_to_svg(curve));
  }
  emit("importance.csv", importance_to_csv(result.final_importance));
  emit("importance.svg", importance_to_svg(result.final_importance));
  emit("importance_stage1.csv", importance_to_csv(result.stage1_importance));

  nlohmann::json j = manifest;
  write_text_file((out_dir / "manifest.json").string(), j.dump(2) + "\n");
  return manifest;
}

std::vector<PhaseCurve> phase_illustration(std::size_t length, const std::vector<double>& phases) {
  if (length < 4) throw ConfigError("phase illustration needs T >= 4");
  std::vector<PhaseCurve> out;
  for (const double phase : phases) {
    PhaseCurve c{phase, {}};
    for (std::size_t t = 0; t < length; ++t) {
      c.values.push_back(
          std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(length) + phase));
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string phase_illustration_csv(const std::vector<PhaseCurve>& curves) {
  std::string out = "t";
  for (const auto& c : curves) out += ",phase=" + format_number(c.phase, 9);
  out += "\n";
  const std::size_t T = curves.empty() ? 0 : curves.front().values.size();
  for (std::size_t t = 0; t < T; ++t) {
    out += std::to_string(t);
    for (const auto& c : curves) out += "," + format_number(c.values[t], 9);
    out += "\n";
  }
  return out;
}

}  // namespace tskan
