#pragma once

// The result record every CLI command produces, and its three encodings.
// Machine formats (JSON, CSV) carry 15 significant digits, text carries 9.
// Nothing here depends on the locale or on timing unless wall time is set
// explicitly, so equal records encode to equal bytes.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace plyap::cli {

enum class Format { text, csv, json };

inline constexpr int kMachineDigits = 15;
inline constexpr int kTextDigits = 9;

/// %.{digits}g in the C locale; non-finite values as nan / inf / -inf.
inline std::string format_number(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

/// x rounded to 15 significant digits.
inline double machine_round(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x, kMachineDigits).c_str(), nullptr);
}

using InputValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

struct Check {
  std::string name;
  double residual;
  double tolerance;
  bool passed;
};

class ResultRecord {
 public:
  explicit ResultRecord(std::string command) : command_(std::move(command)) {}

  ResultRecord& input(std::string name, InputValue v) {
    inputs_.emplace_back(std::move(name), std::move(v));
    return *this;
  }
  ResultRecord& label(std::string name, std::string v) {
    labels_.emplace_back(std::move(name), std::move(v));
    return *this;
  }
  ResultRecord& scalar(std::string name, double v) {
    scalars_.emplace_back(std::move(name), v);
    return *this;
  }
  ResultRecord& series(std::string name, std::vector<double> v) {
    if (!series_.empty() && series_.front().second.size() != v.size()) {
      throw std::invalid_argument("ResultRecord: series '" + name + "' length differs from '" +
                                  series_.front().first + "'");
    }
    series_.emplace_back(std::move(name), std::move(v));
    return *this;
  }
  ResultRecord& converged(std::string name, bool v) {
    converged_.emplace_back(std::move(name), v);
    return *this;
  }
  ResultRecord& check(Check c) {
    checks_.push_back(std::move(c));
    return *this;
  }
  void set_wall_time(double seconds) { wall_time_ = seconds; }

  const std::string& command() const { return command_; }
  const auto& inputs() const { return inputs_; }
  const auto& labels() const { return labels_; }
  const auto& scalars() const { return scalars_; }
  const auto& series() const { return series_; }
  const auto& converged_flags() const { return converged_; }
  const std::vector<Check>& checks() const { return checks_; }
  std::optional<double> wall_time() const { return wall_time_; }

  double scalar_value(const std::string& name) const {
    for (const auto& [k, v] : scalars_) {
      if (k == name) return v;
    }
    throw std::out_of_range("ResultRecord: no scalar '" + name + "'");
  }
  const std::vector<double>& series_values(const std::string& name) const {
    for (const auto& [k, v] : series_) {
      if (k == name) return v;
    }
    throw std::out_of_range("ResultRecord: no series '" + name + "'");
  }

  bool all_converged() const {
    for (const auto& [k, v] : converged_) {
      if (!v) return false;
    }
    return true;
  }
  bool all_checks_passed() const {
    for (const Check& c : checks_) {
      if (!c.passed) return false;
    }
    return true;
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, InputValue>> inputs_;
  std::vector<std::pair<std::string, std::string>> labels_;
  std::vector<std::pair<std::string, double>> scalars_;
  std::vector<std::pair<std::string, std::vector<double>>> series_;
  std::vector<std::pair<std::string, bool>> converged_;
  std::vector<Check> checks_;
  std::optional<double> wall_time_;
};

namespace detail {

using ordered_json = nlohmann::ordered_json;

// Non-finite reals become the strings "nan", "inf", "-inf".
inline ordered_json json_number(double x) {
  if (!std::isfinite(x)) return format_number(x, kMachineDigits);
  return machine_round(x);
}

inline ordered_json json_input(const InputValue& v) {
  return std::visit(
      [](const auto& x) -> ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return json_number(x);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          ordered_json a = ordered_json::array();
          for (double e : x) a.push_back(json_number(e));
          return a;
        } else {
          return x;
        }
      },
      v);
}

inline std::string text_input(const InputValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(x, kTextDigits);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          std::string s;
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) s += ' ';
            s += format_number(x[i], kTextDigits);
          }
          return s;
        }
      },
      v);
}

}  // namespace detail

inline std::string to_json(const ResultRecord& r) {
  using detail::ordered_json;
  ordered_json j;
  j["command"] = r.command();
  ordered_json inputs = ordered_json::object();
  for (const auto& [k, v] : r.inputs()) inputs[k] = detail::json_input(v);
  j["inputs"] = inputs;
  ordered_json labels = ordered_json::object();
  for (const auto& [k, v] : r.labels()) labels[k] = v;
  j["labels"] = labels;
  ordered_json scalars = ordered_json::object();
  for (const auto& [k, v] : r.scalars()) scalars[k] = detail::json_number(v);
  j["scalars"] = scalars;
  ordered_json series = ordered_json::object();
  for (const auto& [k, v] : r.series()) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(detail::json_number(x));
    series[k] = a;
  }
  j["series"] = series;
  ordered_json conv = ordered_json::object();
  for (const auto& [k, v] : r.converged_flags()) conv[k] = v;
  j["converged"] = conv;
  ordered_json checks = ordered_json::array();
  for (const Check& c : r.checks()) {
    checks.push_back({{"name", c.name},
                      {"residual", detail::json_number(c.residual)},
                      {"tolerance", detail::json_number(c.tolerance)},
                      {"passed", c.passed}});
  }
  j["checks"] = checks;
  if (r.wall_time()) j["wall_time"] = detail::json_number(*r.wall_time());
  return j.dump(2) + "\n";
}

/// The series as columns when present; otherwise the checks table; otherwise
/// one quantity,value row per scalar.
inline std::string to_csv(const ResultRecord& r) {
  std::string out;
  auto num = [](double x) { return format_number(x, kMachineDigits); };
  if (!r.series().empty()) {
    const auto& cols = r.series();
    for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + cols[c].first;
    out += '\n';
    for (std::size_t i = 0; i < cols.front().second.size(); ++i) {
      for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + num(cols[c].second[i]);
      out += '\n';
    }
  } else if (!r.checks().empty()) {
    out += "check,residual,tolerance,passed\n";
    for (const Check& c : r.checks()) {
      out += c.name + ',' + num(c.residual) + ',' + num(c.tolerance) + ',' + (c.passed ? "1" : "0") + '\n';
    }
  } else {
    out += "quantity,value\n";
    for (const auto& [k, v] : r.scalars()) out += k + ',' + num(v) + '\n';
  }
  return out;
}

inline std::string to_text(const ResultRecord& r) {
  std::ostringstream os;
  auto num = [](double x) { return format_number(x, kTextDigits); };
  os << r.command() << '\n';
  for (const auto& [k, v] : r.inputs()) os << "  " << k << " = " << detail::text_input(v) << '\n';
  for (const auto& [k, v] : r.labels()) os << "  " << k << ": " << v << '\n';
  for (const auto& [k, v] : r.scalars()) os << "  " << k << " = " << num(v) << '\n';
  for (const auto& [k, v] : r.converged_flags()) os << "  converged[" << k << "] = " << (v ? "yes" : "no") << '\n';
  for (const Check& c : r.checks()) {
    os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << "  residual " << num(c.residual) << " (tol "
       << num(c.tolerance) << ")\n";
  }
  if (!r.series().empty()) {
    const auto& cols = r.series();
    os << '\n';
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "\t" : "") << cols[c].first;
    os << '\n';
    for (std::size_t i = 0; i < cols.front().second.size(); ++i) {
      for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "\t" : "") << num(cols[c].second[i]);
      os << '\n';
    }
  }
  if (r.wall_time()) os << "  wall_time = " << num(*r.wall_time()) << " s\n";
  return os.str();
}

inline std::string encode(const ResultRecord& r, Format f) {
  switch (f) {
    case Format::json: return to_json(r);
    case Format::csv: return to_csv(r);
    case Format::text: return to_text(r);
  }
  return {};
}

}  // namespace plyap::cli
