#include "lightclock/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lightclock/decay.hpp"
#include "lightclock/errors.hpp"
#include "lightclock/line_element.hpp"
#include "lightclock/lightclock_radar.hpp"

namespace lightclock::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kZScoreGate = 5.0;

Error config_error(const std::string& what) { return Error(ErrorKind::Config, what); }

double require_number(const json& value, const std::string& key) {
  if (!value.is_number()) throw config_error("key '" + key + "' must be a number");
  return value.get<double>();
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw Error(ErrorKind::Parameter, "format must be csv or json, got '" + text + "'");
}

double parse_double(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const double den = parse_double(text.substr(slash + 1));
    if (den == 0.0) throw Error(ErrorKind::Parameter, "zero denominator in '" + text + "'");
    return parse_double(text.substr(0, slash)) / den;
  }
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || errno == ERANGE || !std::isfinite(value)) {
    throw Error(ErrorKind::Parameter, "not a finite number: '" + text + "'");
  }
  return value;
}

json coeff_array(const Hyper& x) {
  json arr = json::array();
  for (Eigen::Index k = 0; k <= x.order(); ++k) arr.push_back(x[k]);
  return arr;
}

json coeff_array(const ExactHyper& x) {
  json arr = json::array();
  for (Eigen::Index k = 0; k <= x.order(); ++k) arr.push_back(to_double(x[k]));
  return arr;
}

json exact_array(const ExactHyper& x) {
  json arr = json::array();
  for (Eigen::Index k = 0; k <= x.order(); ++k) arr.push_back(to_string(x[k]));
  return arr;
}

class Output {
 public:
  Output(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
    if (path && !path->empty()) {
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(ErrorKind::Parameter, "cannot open output file '" + *path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  if (const char* env = std::getenv("LIGHTCLOCK_CONFIG"); env && *env) return std::string(env);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// radar

struct RadarOptions {
  double x0 = 0.0;
  double v = 0.0;
  std::vector<double> t1{0.0};
  double c = 1.0;
  std::string format = "csv";
  std::optional<std::string> out;
};

int cmd_radar(const RadarOptions& opt, std::ostream& stdout_stream) {
  const Reflector refl{opt.x0, opt.v};
  std::vector<RadarRecord> pings;
  pings.reserve(opt.t1.size());
  for (double t1 : opt.t1) pings.push_back(simulate_ping(refl, t1, opt.c));

  std::vector<std::optional<double>> velocity(pings.size());
  for (std::size_t i = 1; i < pings.size(); ++i) velocity[i] = radar_velocity(pings[i - 1], pings[i]);

  Output output(opt.out, stdout_stream);
  std::ostream& os = output.stream();
  if (parse_format(opt.format) == OutputFormat::Csv) {
    os << "t1,t3,c,tE,rE,vE,v_radar\n";
    for (std::size_t i = 0; i < pings.size(); ++i) {
      const auto& p = pings[i];
      os << format_number(p.t1) << ',' << format_number(p.t3) << ',' << format_number(p.c) << ','
         << format_number(p.t_e) << ',' << format_number(p.r_e) << ','
         << (p.v_e ? format_number(*p.v_e) : "") << ','
         << (velocity[i] ? format_number(*velocity[i]) : "") << '\n';
    }
  } else {
    ordered_json doc;
    doc["reflector"] = {{"x0", opt.x0}, {"v", opt.v}};
    doc["c"] = opt.c;
    doc["pings"] = json::array();
    for (std::size_t i = 0; i < pings.size(); ++i) {
      const auto& p = pings[i];
      ordered_json row;
      row["t1"] = p.t1;
      row["t3"] = p.t3;
      row["c"] = p.c;
      row["tE"] = p.t_e;
      row["rE"] = p.r_e;
      row["vE"] = p.v_e ? json(*p.v_e) : json(nullptr);
      row["v_radar"] = velocity[i] ? json(*velocity[i]) : json(nullptr);
      doc["pings"].push_back(row);
    }
    os << doc.dump(2) << '\n';
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// derive

struct DeriveOptions {
  std::string v;
  std::string d = "0";
  std::optional<std::string> c;
  bool exact = false;
  std::optional<std::string> out;
};

template <FieldScalar Scalar>
bool within(const Scalar& value, const Scalar& expected, double tolerance, bool relative) {
  const Scalar gap = abs_of(Scalar(value - expected));
  if constexpr (ExactScalar<Scalar>) {
    return gap == 0;
  } else {
    const double scale = relative ? std::max(std::abs(expected), 1e-300) : 1.0;
    return gap <= tolerance * scale;
  }
}

template <FieldScalar Scalar>
ordered_json certify(const LineElementParams<Scalar>& p, int order, double tolerance) {
  const Scalar one(1);
  const Scalar eta = lambda_factor(p);
  const TransformCoeffs<Scalar> coeffs = solve_transform_coeffs(p);
  const QuadraticCoeffs<Scalar> quad = expand_quadratic(coeffs.alpha, coeffs.beta);

  // probe displacement dr^m = c eps / 4, dt^m = eps
  const auto drm = TruncatedHyper<Scalar>::infinitesimal(Scalar(p.c * Scalar(1) / Scalar(4)), 1, order);
  const auto dtm = TruncatedHyper<Scalar>::infinitesimal(one, 1, order);
  const auto [drs, dTs] = transform_differentials(coeffs, drm, Scalar(p.c) * dtm);
  const Displacement<Scalar> s_disp{drs, dTs * Scalar(one / p.c), Frame::S};
  const Displacement<Scalar> m_disp{drm, dtm, Frame::M};
  const Displacement<Scalar> m_reversed{drm, -dtm, Frame::M};
  const auto ds2_s = line_element_s(s_disp, p.c);
  const auto ds2_m = line_element_m(m_disp, p);
  const auto ds2_m_reversed = line_element_m(m_reversed, p);

  bool series_match = true;
  for (Eigen::Index k = 0; k <= ds2_s.order(); ++k) {
    if (k == 2) continue;
    series_match = series_match && within(ds2_s[k], Scalar(0), tolerance, false);
  }
  // measured against the size of the two terms, since the probe can sit near the light cone
  const Scalar term_scale = eta * Scalar(p.c * p.c) * dtm[1] * dtm[1] + drm[1] * drm[1] / eta;
  const Scalar second_order_gap = abs_of(Scalar(ds2_s[2] - ds2_m[2]));
  const bool second_order_match = [&] {
    if constexpr (ExactScalar<Scalar>) return second_order_gap == 0;
    else return second_order_gap <= tolerance * term_scale;
  }();

  const Scalar stationary_ratio = velocity_ratio(coeffs, Scalar(0));
  const bool eta_square = [&] {
    if constexpr (ExactScalar<Scalar>) return is_rational_square(Scalar(one - eta));
    else return true;
  }();
  bool routes_agree = true;
  if constexpr (ExactScalar<Scalar>) {
    const auto via_eta = solve_transform_coeffs(eta);
    routes_agree = via_eta.alpha == coeffs.alpha && via_eta.beta == coeffs.beta;
  }

  const BranchDiagnostic branch = check_rejected_branch(to_double(eta));

  const double rel_error = [&] {
    return to_double(Scalar(second_order_gap / term_scale));
  }();

  ordered_json checks;
  checks["cross_term_zero"] = within(quad.cross, Scalar(0), tolerance, false);
  checks["dT2_equals_eta"] = within(quad.dT2, eta, tolerance, true);
  checks["dr2_equals_minus_inverse_eta"] = within(quad.dr2, Scalar(-(one / eta)), tolerance, true);
  checks["line_element_reproduced"] = series_match && second_order_match;
  checks["time_reversal_symmetric"] = ds2_m == ds2_m_reversed;
  checks["stationary_velocity_ratio"] = within(stationary_ratio, Scalar(p.combined() / p.c), tolerance, true);
  checks["rejected_branch_negative"] = branch.rejected || branch.branches_coincide;
  checks["one_minus_eta_is_square"] = eta_square;
  checks["coefficient_routes_agree"] = routes_agree;

  bool pass = true;
  for (const auto& item : checks.items()) pass = pass && item.value().template get<bool>();

  ordered_json doc;
  doc["mode"] = ExactScalar<Scalar> ? "exact" : "float";
  doc["inputs"] = {{"v", to_double(p.v)}, {"d", to_double(p.d)}, {"c", to_double(p.c)}};
  doc["derived"] = {{"eta", to_double(eta)},
                    {"lambda", to_double(eta)},
                    {"gamma", std::sqrt(to_double(eta))},
                    {"alpha", to_double(coeffs.alpha)},
                    {"beta", to_double(coeffs.beta)}};
  doc["quadratic"] = {{"dT2", to_double(quad.dT2)},
                      {"cross", to_double(quad.cross)},
                      {"dr2", to_double(quad.dr2)}};
  doc["probe"] = {{"drm", coeff_array(drm)},
                  {"dtm", coeff_array(dtm)},
                  {"drs", coeff_array(drs)},
                  {"dts", coeff_array(s_disp.dt)},
                  {"ds2_s", coeff_array(ds2_s)},
                  {"ds2_m", coeff_array(ds2_m)},
                  {"relative_error", rel_error}};
  doc["rejected_branch"] = {{"alpha", branch.alpha},
                            {"beta", branch.beta},
                            {"ratio", branch.ratio},
                            {"rejected", branch.rejected}};
  if constexpr (ExactScalar<Scalar>) {
    doc["exact"] = {{"v", to_string(p.v)},
                    {"d", to_string(p.d)},
                    {"c", to_string(p.c)},
                    {"eta", to_string(eta)},
                    {"alpha", to_string(coeffs.alpha)},
                    {"beta", to_string(coeffs.beta)},
                    {"dT2", to_string(quad.dT2)},
                    {"cross", to_string(quad.cross)},
                    {"dr2", to_string(quad.dr2)},
                    {"ds2_s", exact_array(ds2_s)},
                    {"ds2_m", exact_array(ds2_m)}};
  }
  doc["checks"] = checks;
  doc["pass"] = pass;
  return doc;
}

int cmd_derive(const DeriveOptions& opt, const RunConfig& config, std::ostream& stdout_stream) {
  if (config.order < 2) throw Error(ErrorKind::Parameter, "derivation needs truncation order >= 2");
  ordered_json doc;
  if (opt.exact) {
    LineElementParams<Rational> p{parse_rational(opt.v), parse_rational(opt.d),
                                  opt.c ? parse_rational(*opt.c) : rational_from_double(config.c)};
    doc = certify(p, config.order, 0.0);
  } else {
    LineElementParams<double> p{parse_double(opt.v), parse_double(opt.d),
                                opt.c ? parse_double(*opt.c) : config.c};
    doc = certify(p, config.order, config.identity_tolerance);
  }
  Output output(opt.out, stdout_stream);
  output.stream() << doc.dump(2) << '\n';
  return doc["pass"].get<bool>() ? kSuccess : kCertificationFailure;
}

// ---------------------------------------------------------------------------
// decay

struct DecayOptions {
  double tau_s = 1.0;
  double v = 0.0;
  double c = 1.0;
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  std::string format = "json";
  std::optional<std::string> out;
  unsigned threads = 0;
};

int cmd_decay(const DecayOptions& opt, const RunConfig& config, std::ostream& stdout_stream) {
  if (!(opt.tau_s > 0.0)) throw Error(ErrorKind::Parameter, "--tau-s must be positive");
  if (opt.samples == 0) throw Error(ErrorKind::Parameter, "--samples must be at least 1");
  const LineElementParams<double> p{opt.v, 0.0, opt.c};
  const FrameComparison cmp =
      compare_frames(opt.tau_s, p, opt.samples, opt.seed, opt.threads, config.lifetime_bound);

  Output output(opt.out, stdout_stream);
  std::ostream& os = output.stream();
  if (parse_format(opt.format) == OutputFormat::Json) {
    ordered_json doc;
    doc["tau_s"] = cmp.tau_s;
    doc["v"] = cmp.v;
    doc["c"] = cmp.c;
    doc["lambda"] = cmp.lambda;
    doc["gamma"] = cmp.gamma;
    doc["tau_m_analytic"] = cmp.tau_m_analytic;
    doc["tau_hat_s"] = cmp.tau_hat_s;
    doc["tau_hat_m"] = cmp.tau_hat_m;
    doc["ratio"] = cmp.ratio;
    doc["z_score"] = cmp.z_score;
    doc["samples"] = cmp.samples;
    doc["seed"] = cmp.seed;
    os << doc.dump(2) << '\n';
  } else {
    os << "tau_s,v,c,lambda,gamma,tau_m_analytic,tau_hat_s,tau_hat_m,ratio,z_score,samples,seed\n";
    os << format_number(cmp.tau_s) << ',' << format_number(cmp.v) << ',' << format_number(cmp.c) << ','
       << format_number(cmp.lambda) << ',' << format_number(cmp.gamma) << ','
       << format_number(cmp.tau_m_analytic) << ',' << format_number(cmp.tau_hat_s) << ','
       << format_number(cmp.tau_hat_m) << ',' << format_number(cmp.ratio) << ','
       << format_number(cmp.z_score) << ',' << cmp.samples << ',' << cmp.seed << '\n';
  }
  return std::abs(cmp.z_score) <= kZScoreGate ? kSuccess : kStatisticalFailure;
}

// ---------------------------------------------------------------------------
// velmap

struct VelmapOptions {
  double vmax = 0.9;
  std::size_t steps = 9;
  double c = 1.0;
  bool alternate = false;
  std::optional<std::string> out;
};

int cmd_velmap(const VelmapOptions& opt, std::ostream& stdout_stream) {
  if (!(opt.c > 0.0)) throw Error(ErrorKind::Parameter, "--c must be positive");
  if (!(opt.vmax >= 0.0) || !(opt.vmax < opt.c)) {
    throw Error(ErrorKind::Parameter, "--vmax must satisfy 0 <= vmax < c");
  }
  if (opt.steps == 0) throw Error(ErrorKind::Parameter, "--steps must be at least 1");

  Output output(opt.out, stdout_stream);
  std::ostream& os = output.stream();
  os << (opt.alternate ? "v,w,w_alt\n" : "v,w\n");
  for (std::size_t i = 0; i <= opt.steps; ++i) {
    const double v = opt.vmax * static_cast<double>(i) / static_cast<double>(opt.steps);
    os << format_number(v) << ',' << format_number(nsppm_velocity(v, opt.c));
    if (opt.alternate) os << ',' << format_number(standard_rapidity(v, opt.c));
    os << '\n';
  }
  return kSuccess;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw config_error("config must be a flat JSON object");

  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "c") {
      cfg.c = require_number(value, key);
      if (!(cfg.c > 0.0) || !std::isfinite(cfg.c)) throw config_error("c must be positive");
    } else if (key == "order") {
      if (!value.is_number_integer()) throw config_error("order must be an integer");
      cfg.order = value.get<int>();
      if (cfg.order < 2 || cfg.order > 16) throw config_error("order must lie in [2, 16]");
    } else if (key == "identity_tolerance") {
      cfg.identity_tolerance = require_number(value, key);
      if (!(cfg.identity_tolerance > 0.0 && cfg.identity_tolerance <= 1e-6)) {
        throw config_error("identity_tolerance must lie in (0, 1e-6]");
      }
    } else if (key == "lifetime_bound") {
      cfg.lifetime_bound = require_number(value, key);
      if (!(cfg.lifetime_bound > 0.0) || !std::isfinite(cfg.lifetime_bound)) {
        throw config_error("lifetime_bound must be positive");
      }
    } else if (key == "format") {
      if (!value.is_string()) throw config_error("format must be a string");
      try {
        cfg.format = parse_format(value.get<std::string>());
      } catch (const Error&) {
        throw config_error("format must be csv or json");
      }
    } else if (key == "out") {
      if (!value.is_string()) throw config_error("out must be a string");
      cfg.out = value.get<std::string>();
    } else if (key == "threads") {
      if (!value.is_number_unsigned() || value.get<std::uint64_t>() > 1024) {
        throw config_error("threads must be an integer in [0, 1024]");
      }
      cfg.threads = value.get<unsigned>();
    } else {
      throw config_error("unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    if (auto path = find_config_path(args)) config = load_config(*path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  }
  auto format_default = [&](const char* fallback) -> std::string {
    if (!config.format) return fallback;
    return *config.format == OutputFormat::Json ? "json" : "csv";
  };

  CLI::App app{"Light-clock radar, line-element certification and decay dilation tools", "lightclock"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat JSON config file (overrides LIGHTCLOCK_CONFIG)");

  RadarOptions radar;
  radar.c = config.c;
  radar.format = format_default("csv");
  radar.out = config.out;
  auto* radar_cmd = app.add_subcommand("radar", "Simulate radar pings against a uniformly moving reflector");
  radar_cmd->add_option("--x0", radar.x0, "Reflector position at t = 0")->capture_default_str();
  radar_cmd->add_option("--v", radar.v, "Reflector velocity, |v| < c")->capture_default_str();
  radar_cmd->add_option("--t1", radar.t1, "Emission time (repeatable)")->capture_default_str();
  radar_cmd->add_option("--c", radar.c, "Light speed")->capture_default_str();
  radar_cmd->add_option("--format", radar.format, "csv or json")->capture_default_str();
  radar_cmd->add_option("--out", radar.out, "Write output to PATH instead of stdout");

  DeriveOptions derive;
  derive.out = config.out;
  auto* derive_cmd = app.add_subcommand("derive", "Certify the linear effect line element for (v, d, c)");
  derive_cmd->add_option("--v", derive.v, "Relative velocity (decimal or a/b)")->required();
  derive_cmd->add_option("--d", derive.d, "Secondary velocity term")->capture_default_str();
  derive_cmd->add_option("--c", derive.c, "Light speed (defaults to config c)");
  derive_cmd->add_flag("--exact", derive.exact, "Certify over exact rationals with zero tolerance");
  derive_cmd->add_option("--out", derive.out, "Write output to PATH instead of stdout");

  DecayOptions decay;
  decay.c = config.c;
  decay.format = format_default("json");
  decay.out = config.out;
  decay.threads = config.threads;
  auto* decay_cmd = app.add_subcommand("decay", "Compare simulated lifetimes in the s- and m-frames");
  decay_cmd->add_option("--tau-s", decay.tau_s, "Laboratory mean lifetime")->capture_default_str();
  decay_cmd->add_option("--v", decay.v, "Relative velocity, 0 <= v < c")->capture_default_str();
  decay_cmd->add_option("--c", decay.c, "Light speed")->capture_default_str();
  decay_cmd->add_option("--samples", decay.samples, "Samples per ensemble")->capture_default_str();
  decay_cmd->add_option("--seed", decay.seed, "Stream seed")->capture_default_str();
  decay_cmd->add_option("--format", decay.format, "csv or json")->capture_default_str();
  decay_cmd->add_option("--out", decay.out, "Write output to PATH instead of stdout");
  decay_cmd->add_option("--threads", decay.threads, "Worker threads (0 = hardware)")->capture_default_str();

  VelmapOptions velmap;
  velmap.c = config.c;
  velmap.out = config.out;
  auto* velmap_cmd = app.add_subcommand("velmap", "Tabulate the substratum velocity map w(v)");
  velmap_cmd->add_option("--vmax", velmap.vmax, "Largest tabulated velocity, < c")->capture_default_str();
  velmap_cmd->add_option("--steps", velmap.steps, "Number of intervals")->capture_default_str();
  velmap_cmd->add_option("--c", velmap.c, "Light speed")->capture_default_str();
  velmap_cmd->add_flag("--alternate", velmap.alternate, "Add the conventional rapidity column w_alt");
  velmap_cmd->add_option("--out", velmap.out, "Write output to PATH instead of stdout");

  std::vector<const char*> argv;
  argv.push_back("lightclock");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help / --help-all
      return app.exit(e, out, err);
    }
    err << "error: " << e.what() << '\n';
    return kParameterError;
  }

  try {
    if (radar_cmd->parsed()) return cmd_radar(radar, out);
    if (derive_cmd->parsed()) return cmd_derive(derive, config, out);
    if (decay_cmd->parsed()) return cmd_decay(decay, config, out);
    if (velmap_cmd->parsed()) return cmd_velmap(velmap, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  }
  return kParameterError;
}

}  // namespace lightclock::cli
