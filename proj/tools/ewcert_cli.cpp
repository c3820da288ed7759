// ewcert: command-line front end for the entanglement-witness certifier.
//
// Exit codes: certify returns 0 for EW, 1 for any other verdict, 2 for
// INDETERMINATE; oracle-compare returns 1 when the gap exceeds 1e-4; every
// command returns 3 on input errors.

#include "ewcert/ewcert.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using ewcert::io::Json;

constexpr int kExitInputError = 3;

struct Options {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::string preset;
  std::string dims;
  std::uint64_t seed = 0;
  int multistarts = 64;
  double zero_tol = 1e-7;
  double tangent_tol = 1e-8;
  int resolution = 24;
  bool no_reduce = false;
};

std::optional<ewcert::Dims> parse_dims(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<int> d;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      d.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ewcert::RejectedInput("--dims: cannot parse '" + text + "'");
    }
  }
  return ewcert::Dims(std::move(d));
}

ewcert::CertifierConfig certifier_config(const Options& opts) {
  ewcert::CertifierConfig c;
  c.seesaw.seed = opts.seed;
  c.seesaw.multistarts = opts.multistarts;
  c.seesaw.zero_tol = opts.zero_tol;
  c.tangent_tol = opts.tangent_tol;
  c.oracle_resolution = opts.resolution;
  c.reduce_zero_states = !opts.no_reduce;
  c.validate();
  return c;
}

ewcert::HermitianOperator load_operator(const Options& opts) {
  if (!opts.preset.empty() && !opts.input_path.empty()) {
    throw ewcert::RejectedInput("give either --input or --preset, not both");
  }
  if (!opts.preset.empty()) return ewcert::make_preset(opts.preset, opts.seed, parse_dims(opts.dims));
  if (opts.input_path.empty()) throw ewcert::RejectedInput("an operator is required: use --input or --preset");
  return ewcert::io::operator_from_json(ewcert::io::read_file(opts.input_path));
}

void emit(const Options& opts, const Json& j) {
  const std::string text = ewcert::io::dump(j);
  if (opts.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output_path);
  if (!out) throw ewcert::RejectedInput("cannot write '" + opts.output_path + "'");
  out << text;
}

int cmd_certify(const Options& opts) {
  const ewcert::HermitianOperator a = load_operator(opts);
  const ewcert::Certificate cert = ewcert::certify(a, certifier_config(opts));
  emit(opts, ewcert::io::to_json(cert));
  switch (cert.verdict) {
    case ewcert::Verdict::EntanglementWitness: return 0;
    case ewcert::Verdict::Indeterminate: return 2;
    default: return 1;
  }
}

int cmd_minimize(const Options& opts) {
  const ewcert::HermitianOperator a = load_operator(opts);
  const ewcert::CertifierConfig config = certifier_config(opts);
  emit(opts, ewcert::io::to_json(ewcert::seesaw_minimize(a, config.seesaw), config.seesaw));
  return 0;
}

int cmd_oracle_compare(const Options& opts) {
  constexpr double kPassGap = 1e-4;
  const ewcert::HermitianOperator a = load_operator(opts);
  const ewcert::CertifierConfig config = certifier_config(opts);
  const double grid = ewcert::grid_oracle_min(a, opts.resolution);
  const ewcert::SeesawResult run = ewcert::seesaw_minimize(a, config.seesaw);
  const double gap = std::abs(run.min_value - grid);
  Json out = Json::object();
  out["dims"] = ewcert::io::dims_to_json(a.dims());
  out["seesaw_min"] = run.min_value;
  out["grid_min"] = grid;
  out["gap"] = gap;
  out["resolution"] = opts.resolution;
  out["pass_threshold"] = kPassGap;
  out["pass"] = gap <= kPassGap;
  out["seed"] = opts.seed;
  out["multistarts"] = opts.multistarts;
  emit(opts, out);
  return gap <= kPassGap ? 0 : 1;
}

int cmd_make_witness(const Options& opts) {
  if (opts.preset.empty()) throw ewcert::RejectedInput("make-witness needs --preset");
  emit(opts, ewcert::io::to_json(ewcert::make_preset(opts.preset, opts.seed, parse_dims(opts.dims))));
  return 0;
}

int cmd_cj_convert(const Options& opts) {
  if (opts.input_path.empty()) throw ewcert::RejectedInput("cj-convert needs --input");
  const Json in = ewcert::io::read_file(opts.input_path);
  if (ewcert::io::looks_like_map(in)) {
    emit(opts, ewcert::io::to_json(ewcert::witness_from_map(ewcert::io::map_from_json(in))));
  } else {
    emit(opts, ewcert::io::to_json(ewcert::map_from_witness(ewcert::io::operator_from_json(in))));
  }
  return 0;
}

int cmd_classify_map(const Options& opts) {
  if (opts.input_path.empty()) throw ewcert::RejectedInput("classify-map needs --input");
  const ewcert::OperatorMap m = ewcert::io::map_from_json(ewcert::io::read_file(opts.input_path));
  const ewcert::CertifierConfig config = certifier_config(opts);
  Json out = Json::object();
  out["dim"] = m.in_dim();
  out["hermiticity_preserving"] = m.hermiticity_preserving();
  if (!m.hermiticity_preserving()) {
    out["completely_positive"] = false;
    emit(opts, out);
    return 0;
  }
  const bool cp = ewcert::is_completely_positive(m);
  const ewcert::HermitianOperator w = ewcert::witness_from_map(m);
  const ewcert::Certificate cert = ewcert::certify(w, config);
  out["completely_positive"] = cp;
  out["positive"] = cert.min_product_expectation >= -config.seesaw.zero_tol;
  out["choi_min_eigenvalue"] = cert.condition3.min_eigenvalue;
  out["choi_min_product_expectation"] = cert.min_product_expectation;
  out["positive_not_completely_positive"] = !cp && cert.min_product_expectation >= -config.seesaw.zero_tol;
  out["witness_verdict"] = std::string(ewcert::to_string(cert.verdict));
  emit(opts, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-witness certification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  app.add_option("--input", opts.input_path, "Operator, map or state JSON file");
  app.add_option("--output", opts.output_path, "Write JSON here instead of stdout");
  app.add_option("--seed", opts.seed, "Base seed; start j uses seed + j");
  app.add_option("--multistarts", opts.multistarts, "See-saw starts")->check(CLI::PositiveNumber);
  app.add_option("--zero-tol", opts.zero_tol, "Threshold for zero expectations")->check(CLI::PositiveNumber);
  app.add_option("--tangent-tol", opts.tangent_tol, "Tangent-condition tolerance")->check(CLI::PositiveNumber);
  app.add_option("--resolution", opts.resolution, "Grid oracle points per angle")->check(CLI::Range(2, 1000));
  app.add_option("--preset", opts.preset, "swap-NxN, bell-pt-2x2, decomposable-random, identity-D, negident-D");
  app.add_option("--dims", opts.dims, "Local dimensions for presets, e.g. 2,3");
  app.add_flag("--no-reduce", opts.no_reduce, "Keep all zero states instead of an independent subset");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"certify", "Decide whether the operator is an entanglement witness"},
      {"minimize", "See-saw minimum over pure product states"},
      {"oracle-compare", "Compare the see-saw minimum with the grid oracle"},
      {"make-witness", "Emit a preset operator"},
      {"cj-convert", "Convert between a map and its Choi observable"},
      {"classify-map", "Classify a map as CP / positive"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&opts, name = name] { opts.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (opts.command == "certify") return cmd_certify(opts);
    if (opts.command == "minimize") return cmd_minimize(opts);
    if (opts.command == "oracle-compare") return cmd_oracle_compare(opts);
    if (opts.command == "make-witness") return cmd_make_witness(opts);
    if (opts.command == "cj-convert") return cmd_cj_convert(opts);
    if (opts.command == "classify-map") return cmd_classify_map(opts);
  } catch (const ewcert::RejectedInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  std::cerr << "error: unknown command\n";
  return kExitInputError;
}
