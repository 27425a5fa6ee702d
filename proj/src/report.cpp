#include "hsiproj/eval.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hsiproj {

namespace {

using nlohmann::ordered_json;

// Reports are compared byte for byte, so every real is rounded to a fixed
// number of decimals before serialization.
double fixed(double v, double scale = 1e9) { return std::round(v * scale) / scale; }

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ordered_json to_json(const AccuracyReport& r, bool include_timing) {
  const PipelineSpec& p = r.config.pipeline;
  ordered_json j;
  j["pipeline"] = describe(p);
  ordered_json params;
  params["method"] = std::string(to_string(p.method));
  params["classifier"] = std::string(to_string(p.classifier));
  params["r"] = p.r;
  params["sigma"] = p.sigma ? ordered_json(fixed(*p.sigma)) : ordered_json("auto");
  params["window"] = p.window;
  params["sparsity"] = p.sparsity;
  params["ridge"] = p.ridge;
  params["normalize"] = p.normalize;
  params["unit_atoms"] = p.unit_atoms;
  j["parameters"] = params;
  j["n_train"] = r.config.n_train;
  j["n_test"] = r.config.n_test;
  j["seed"] = r.config.seed;
  j["num_classes"] = r.num_classes;
  j["overall_accuracy"] = fixed(r.overall_accuracy);
  ordered_json classes = ordered_json::array();
  for (double a : r.class_accuracy) classes.push_back(fixed(a));
  j["class_accuracy"] = classes;
  ordered_json trials = ordered_json::array();
  for (const TrialResult& t : r.trials) {
    ordered_json tj;
    tj["split_seed"] = t.split_seed;
    tj["sigma"] = fixed(t.sigma);
    tj["accuracy"] = fixed(t.accuracy);
    tj["confusion"] = t.confusion;
    if (include_timing) tj["seconds"] = fixed(t.seconds, 1e6);
    trials.push_back(tj);
  }
  j["trials"] = trials;
  return j;
}

}  // namespace

std::string report_json(const AccuracyReport& report, bool include_timing) {
  return to_json(report, include_timing).dump(2) + "\n";
}

std::string reports_json(const std::vector<AccuracyReport>& reports, bool include_timing) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r, include_timing));
  return arr.dump(2) + "\n";
}

std::string accuracy_table(const std::vector<AccuracyReport>& reports,
                           const std::vector<std::string>& class_names) {
  int c = 0;
  for (const auto& r : reports) c = std::max(c, r.num_classes);
  std::vector<std::string> rows;
  for (int k = 0; k < c; ++k)
    rows.push_back(static_cast<std::size_t>(k) < class_names.size() ? class_names[static_cast<std::size_t>(k)]
                                                                   : "Class " + std::to_string(k + 1));
  rows.emplace_back("Overall Accuracy");

  std::size_t first = std::string("Class Name / Algorithm").size();
  for (const auto& name : rows) first = std::max(first, name.size());
  std::vector<std::size_t> widths;
  for (const auto& r : reports) widths.push_back(std::max<std::size_t>(describe(r.config.pipeline).size(), 6));

  std::ostringstream out;
  auto cell = [&](const std::string& s, std::size_t w, bool left) {
    if (left) out << s << std::string(w - std::min(w, s.size()), ' ');
    else out << std::string(w - std::min(w, s.size()), ' ') << s;
  };
  cell("Class Name / Algorithm", first, true);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out << "  ";
    cell(describe(reports[i].config.pipeline), widths[i], false);
  }
  out << '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    cell(rows[k], first, true);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      out << "  ";
      const auto& r = reports[i];
      std::string v = "-";
      if (k + 1 == rows.size()) v = percent(r.overall_accuracy);
      else if (k < r.class_accuracy.size()) v = percent(r.class_accuracy[k]);
      cell(v, widths[i], false);
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<AccuracyReport>& reports) {
  std::string s = "pipeline,r,sigma,sparsity,window,overall_accuracy\n";
  for (const auto& r : reports) {
    const PipelineSpec& p = r.config.pipeline;
    s += describe(p) + ',' + std::to_string(p.r) + ',' + (p.sigma ? fmt(*p.sigma) : "auto") + ',' +
         std::to_string(p.sparsity) + ',' + std::to_string(p.window) + ',' +
         fmt(fixed(100.0 * r.overall_accuracy)) + '\n';
  }
  return s;
}

std::string sphere_csv(const std::vector<SphereRow>& rows) {
  std::string s = "source,sample,label,u1,u2,u3\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", r.sample, r.label, r.u1, r.u2, r.u3);
    s += r.source + ',' + buf;
  }
  return s;
}

}  // namespace hsiproj
