#include "vibench/report/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vibench/core/error.hpp"
#include "vibench/report/aggregate.hpp"

namespace vibench::report {
namespace {

using metrics::Metric;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

std::string coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

class Writer {
 public:
  explicit Writer(std::filesystem::path root) : root_(std::move(root)) {}

  void write(const std::string& name, const std::string& content) {
    const auto path = root_ / name;
    std::filesystem::create_directories(path.parent_path());
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw Error("cannot write " + tmp.string());
      out << content;
      if (!out.flush()) throw Error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
    written_.push_back(name);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::filesystem::path root_;
  std::vector<std::string> written_;
};

struct Series {
  std::string name;
  std::vector<std::optional<double>> values;
  std::vector<std::optional<double>> errors;
};

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                          "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

/// Grouped bar chart with optional symmetric error bars.
std::string bar_chart(const std::string& title, const std::string& y_label, const std::vector<std::string>& categories,
                      const std::vector<Series>& series) {
  double lo = 0.0, hi = 0.0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (!s.values[i]) continue;
      const double e = s.errors.size() > i && s.errors[i] ? *s.errors[i] : 0.0;
      lo = std::min(lo, *s.values[i] - e);
      hi = std::max(hi, *s.values[i] + e);
    }
  }
  if (hi - lo <= 0.0) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  hi += pad;
  if (lo < 0.0) lo -= pad;

  const double left = 80, right = 20, top = 40, bottom = 110, legend = series.size() > 1 ? 20.0 * series.size() : 0;
  const double group_w = std::max(60.0, 24.0 * series.size() + 20);
  const double plot_w = group_w * std::max<std::size_t>(categories.size(), 1);
  const double plot_h = 280;
  const double width = left + plot_w + right + (legend > 0 ? 160 : 0);
  const double height = top + plot_h + bottom;
  auto y_of = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(width) << "\" height=\"" << coord(height)
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << coord(left) << "\" y=\"20\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    char label[32];
    std::snprintf(label, sizeof label, "%.4g", v);
    o << "<line x1=\"" << coord(left) << "\" x2=\"" << coord(left + plot_w) << "\" y1=\"" << coord(y_of(v))
      << "\" y2=\"" << coord(y_of(v)) << "\" stroke=\"#dddddd\"/>\n";
    o << "<text x=\"" << coord(left - 6) << "\" y=\"" << coord(y_of(v) + 4) << "\" text-anchor=\"end\">" << label
      << "</text>\n";
  }
  o << "<text transform=\"translate(16," << coord(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(y_label) << "</text>\n";
  o << "<line x1=\"" << coord(left) << "\" x2=\"" << coord(left + plot_w) << "\" y1=\"" << coord(y_of(0)) << "\" y2=\""
    << coord(y_of(0)) << "\" stroke=\"black\"/>\n";
  const double bar_w = (group_w - 20) / std::max<std::size_t>(series.size(), 1);
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = left + group_w * c + 10;
    for (std::size_t s = 0; s < series.size(); ++s) {
      if (c >= series[s].values.size() || !series[s].values[c]) continue;
      const double v = *series[s].values[c];
      const double x = gx + bar_w * s;
      const double y0 = y_of(std::max(v, 0.0)), y1 = y_of(std::min(v, 0.0));
      o << "<rect x=\"" << coord(x) << "\" y=\"" << coord(y0) << "\" width=\"" << coord(bar_w - 2) << "\" height=\""
        << coord(y1 - y0) << "\" fill=\"" << kPalette[s % 10] << "\"><title>" << xml_escape(series[s].name) << " "
        << xml_escape(categories[c]) << ": " << num(v) << "</title></rect>\n";
      if (c < series[s].errors.size() && series[s].errors[c]) {
        const double e = *series[s].errors[c];
        const double cx = x + (bar_w - 2) / 2;
        o << "<line x1=\"" << coord(cx) << "\" x2=\"" << coord(cx) << "\" y1=\"" << coord(y_of(v - e)) << "\" y2=\""
          << coord(y_of(v + e)) << "\" stroke=\"black\"/>\n";
        for (double ev : {v - e, v + e}) {
          o << "<line x1=\"" << coord(cx - 4) << "\" x2=\"" << coord(cx + 4) << "\" y1=\"" << coord(y_of(ev))
            << "\" y2=\"" << coord(y_of(ev)) << "\" stroke=\"black\"/>\n";
        }
      }
    }
    const double lx = left + group_w * c + group_w / 2;
    const double ly = top + plot_h + 12;
    o << "<text transform=\"translate(" << coord(lx) << "," << coord(ly) << ") rotate(35)\">"
      << xml_escape(categories[c]) << "</text>\n";
  }
  if (legend > 0) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double ly = top + 20.0 * s;
      o << "<rect x=\"" << coord(left + plot_w + 20) << "\" y=\"" << coord(ly) << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[s % 10] << "\"/>\n";
      o << "<text x=\"" << coord(left + plot_w + 38) << "\" y=\"" << coord(ly + 10) << "\">"
        << xml_escape(series[s].name) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::string table_csv(const SliceTable& t) {
  std::ostringstream o;
  o << "slice,metric,direction";
  for (const auto& m : t.methods) o << ',' << harness::csv_field(m);
  o << ",best\n";
  for (std::size_t s = 0; s < t.slices.size(); ++s) {
    for (std::size_t k = 0; k < t.metrics.size(); ++k) {
      o << harness::csv_field(t.slices[s]) << ',' << metrics::to_string(t.metrics[k]) << ','
        << metrics::to_string(metrics::direction_of(t.metrics[k]));
      std::string best;
      for (std::size_t m = 0; m < t.methods.size(); ++m) {
        const auto& c = t.cell(m, s, k);
        o << ',' << num(c.value);
        if (c.best) best += (best.empty() ? "" : ";") + t.methods[m];
      }
      o << ',' << harness::csv_field(best) << '\n';
    }
  }
  return o.str();
}

std::string table_markdown(const SliceTable& t) {
  std::ostringstream o;
  o << "| slice | metric |";
  for (const auto& m : t.methods) o << ' ' << m << " |";
  o << "\n|---|---|";
  for (std::size_t m = 0; m < t.methods.size(); ++m) o << "---|";
  o << '\n';
  for (std::size_t s = 0; s < t.slices.size(); ++s) {
    for (std::size_t k = 0; k < t.metrics.size(); ++k) {
      const Metric metric = t.metrics[k];
      o << "| " << t.slices[s] << " | " << metrics::to_string(metric)
        << (metrics::direction_of(metric) == metrics::Direction::kLowerBetter ? " (lower)" : " (higher)") << " |";
      for (std::size_t m = 0; m < t.methods.size(); ++m) {
        const auto& c = t.cell(m, s, k);
        o << ' ' << (c.best ? "**" + num(c.value) + "**" : num(c.value)) << " |";
      }
      o << '\n';
    }
  }
  return o.str();
}

std::string stats_csv(const std::string& group_name, const std::vector<GroupStat>& stats) {
  std::ostringstream o;
  o << group_name << ",metric,mean,standard_error,n\n";
  for (const auto& g : stats) {
    o << harness::csv_field(g.group) << ',' << metrics::to_string(g.metric) << ',' << num(g.stat.mean) << ','
      << num(g.stat.standard_error) << ',' << g.stat.n << '\n';
  }
  return o.str();
}

Series stat_series(const std::string& name, const std::vector<GroupStat>& stats) {
  Series s{name, {}, {}};
  for (const auto& g : stats) {
    s.values.push_back(g.stat.mean);
    s.errors.push_back(g.stat.standard_error);
  }
  return s;
}

std::vector<std::string> groups_of(const std::vector<GroupStat>& stats) {
  std::vector<std::string> out;
  for (const auto& g : stats) out.push_back(g.group);
  return out;
}

}  // namespace

std::vector<std::string> emit_report(const std::vector<harness::EvaluationRecord>& records,
                                     const std::filesystem::path& out_dir, const std::vector<Metric>& selected) {
  const std::vector<Metric> wanted = selected.empty() ? metrics::all_metrics() : selected;
  std::vector<harness::EvaluationRecord> kept;
  for (const auto& r : records) {
    if (std::find(wanted.begin(), wanted.end(), metrics::parse_metric(r.metric)) != wanted.end()) kept.push_back(r);
  }
  const auto scores = slice_scores(kept);
  const SliceTable table = slice_table(scores);
  std::filesystem::create_directories(out_dir);
  Writer w(out_dir);
  w.write("slice_table.csv", table_csv(table));
  w.write("slice_table.md", table_markdown(table));

  const auto means = mean_across_slices(scores);
  w.write("method_means.csv", stats_csv("method", means));

  std::vector<GroupStat> difficulty;
  for (Metric m : table.metrics) {
    const auto d = slice_difficulty(scores, m);
    difficulty.insert(difficulty.end(), d.begin(), d.end());
  }
  w.write("slice_difficulty.csv", stats_csv("slice", difficulty));

  std::ostringstream ri_csv;
  ri_csv << "method,attribute,metric,value,note\n";
  std::vector<Attribute> attributes;
  for (const auto& l : all_labels()) {
    if (std::find(attributes.begin(), attributes.end(), l.attribute) == attributes.end()) {
      attributes.push_back(l.attribute);
    }
  }
  std::map<Metric, std::vector<Series>> ri_series;
  for (Metric m : table.metrics) {
    for (const auto& method : table.methods) {
      Series s{method, {}, {}};
      for (Attribute a : attributes) {
        const auto ri = relative_improvement(scores, method, a, m);
        ri_csv << harness::csv_field(method) << ',' << to_string(a) << ',' << metrics::to_string(m) << ','
               << num(ri.value) << ',' << ri.note << '\n';
        s.values.push_back(ri.value);
      }
      ri_series[m].push_back(std::move(s));
    }
  }
  w.write("relative_improvement.csv", ri_csv.str());

  std::vector<std::string> attribute_names;
  for (Attribute a : attributes) attribute_names.push_back(to_string(a));
  for (Metric m : table.metrics) {
    const std::string name = metrics::to_string(m);
    const std::string unit = metrics::units_of(m).empty() ? "" : " (" + metrics::units_of(m) + ")";
    std::vector<GroupStat> per_method;
    for (const auto& g : means) {
      if (g.metric == m) per_method.push_back(g);
    }
    if (!per_method.empty()) {
      w.write("plots/method_means-" + name + ".svg",
              bar_chart(name + ": mean over slices +/- standard error", name + unit, groups_of(per_method),
                        {stat_series("mean", per_method)}));
    }
    std::vector<GroupStat> per_slice;
    for (const auto& g : difficulty) {
      if (g.metric == m) per_slice.push_back(g);
    }
    if (!per_slice.empty()) {
      w.write("plots/slice_difficulty-" + name + ".svg",
              bar_chart(name + ": mean over methods +/- standard error", name + unit, groups_of(per_slice),
                        {stat_series("mean", per_slice)}));
    }
    w.write("plots/relative_improvement-" + name + ".svg",
            bar_chart(name + ": relative improvement, high vs low setting", "relative improvement", attribute_names,
                      ri_series[m]));
  }

  nlohmann::json index;
  index["files"] = w.written();
  std::vector<std::string> metric_names;
  for (Metric m : table.metrics) metric_names.push_back(metrics::to_string(m));
  index["metrics"] = metric_names;
  index["methods"] = table.methods;
  index["slices"] = table.slices;
  w.write("index.json", index.dump(2) + "\n");
  return w.written();
}

}  // namespace vibench::report
