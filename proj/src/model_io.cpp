#include "slt/model_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace slt {

using nlohmann::json;

TransitionModel load_model_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("P")) throw std::invalid_argument("model file: missing P");
  auto P = j.at("P").get<std::vector<std::vector<double>>>();

  std::optional<std::vector<double>> pi;
  if (j.contains("pi")) pi = j.at("pi").get<std::vector<double>>();
  std::optional<std::vector<double>> nu;
  if (j.contains("nu")) nu = j.at("nu").get<std::vector<double>>();

  std::vector<std::vector<double>> metric;
  if (j.contains("metric") && !j.at("metric").is_string())
    metric = j.at("metric").get<std::vector<std::vector<double>>>();
  // the string form "discrete" (and absence) means the default metric

  std::vector<std::string> names;
  if (j.contains("states")) {
    for (const auto& s : j.at("states"))
      names.push_back(s.is_string() ? s.get<std::string>() : s.dump());
  }

  double gamma = j.value("gamma", 1.0);
  double beta = j.value("beta", 0.0);
  std::optional<double> phi;
  if (j.contains("phi")) phi = j.at("phi").get<double>();

  return validate_model(P, pi, nu, gamma, std::move(metric), beta, phi,
                        std::move(names));
}

TransitionModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model_json(ss.str());
}

void write_trace_csv(std::ostream& os, const SltTrace& trace,
                     const TransitionModel& model) {
  os << "step,site,xi,height\n";
  for (std::size_t i = 0; i < trace.n; ++i)
    os << (i + 1) << ',' << model.space.states[trace.sites[i]] << ','
       << trace.xi[i] << ',' << trace.heights[i] << '\n';
}

void write_curve_csv(std::ostream& os, const SltTrace& trace,
                     const TransitionModel& model) {
  os << "site,G\n";
  for (std::size_t x = 0; x < trace.curve.size(); ++x)
    os << model.space.states[x] << ',' << trace.curve[x] << '\n';
}

}  // namespace slt
