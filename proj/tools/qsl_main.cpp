// Copyright 2026 The qsl project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

// qsl: command-line front end for the quantitative safety and liveness
// library. Subcommands: eval, monitor, classify, decompose, synth,
// closure. Every diagnostic is a single stderr line prefixed "error:";
// exit codes: 0 success, 1/2 classify and decompose findings, 3 depth
// bound hit during synthesis, 64 usage, 65 malformed input, 70 other
// operational failures. Output is byte-identical for identical argv and
// seed.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "qsl/classify.hpp"
#include "qsl/closure.hpp"
#include "qsl/decompose.hpp"
#include "qsl/errors.hpp"
#include "qsl/monitor.hpp"
#include "qsl/property.hpp"
#include "qsl/property_io.hpp"
#include "qsl/trace.hpp"
#include "qsl/value_domain.hpp"

namespace {

using namespace qsl;

/// Command-line mistakes detected after CLI11 parsing (bad flag payloads,
/// missing mode-specific flags). Mapped to exit 64.
struct CliUsage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalArgs {
  std::string property;
  std::string lasso;
};

struct MonitorArgs {
  std::string property;
  std::string trace_file;
  std::vector<std::string> hypotheses;
};

struct ClassifyArgs {
  std::string property;
  std::uint64_t budget = 6;
  std::uint64_t seed = 0;
  std::vector<std::string> require;
};

struct DecomposeArgs {
  std::string property;
  std::string mode;
  std::string symbols;
  std::uint64_t samples = 100;
  std::uint64_t seed = 0;
  std::uint64_t budget = 6;
};

struct SynthArgs {
  std::string property;
  double delta = 0.0;
  std::uint64_t max_depth = 32;
  std::string out;
  std::string dot;
};

struct ClosureArgs {
  std::string property;
  std::string kind;
};

std::string backend_name(const Property& p) {
  if (p.is_machine()) return "machine";
  if (p.is_oracle()) return "oracle";
  return "derived";
}

std::string render_witness(const Witness& w) {
  std::string out;
  if (w.lasso) out += " witness=\"" + format_lasso(*w.lasso) + "\"";
  if (w.prefix) out += " prefix=\"" + format_trace(*w.prefix) + "\"";
  if (w.value) out += " value=" + format_value(*w.value);
  if (w.bound) out += " bound=" + format_value(*w.bound);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
  if (!out.flush()) throw Error("cannot write file: " + path);
}

int run_eval(const EvalArgs& args) {
  const PropertyPtr p = load_property(args.property);
  const ParsedTrace parsed = parse_trace(args.lasso, p->alphabet);
  Value v = std::holds_alternative<Lasso>(parsed)
                ? eval_on_lasso(*p, std::get<Lasso>(parsed))
                : eval_finitary(*p, std::get<FiniteTrace>(parsed));
  std::cout << format_value(v) << "\n";
  return 0;
}

Hypothesis parse_hypothesis(const std::string& spec, const DomainPtr& domain) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  if (colon == std::string::npos || (kind != "ge" && kind != "le")) {
    throw CliUsage("--hyp expects ge:VALUE or le:VALUE, got '" + spec + "'");
  }
  Value v = [&] {
    try {
      return parse_value(domain, spec.substr(colon + 1));
    } catch (const Error& e) {
      throw CliUsage("--hyp " + spec + ": " + e.what());
    }
  }();
  return Hypothesis{kind == "ge" ? HypothesisKind::GE : HypothesisKind::LE,
                    std::move(v), std::nullopt};
}

void print_monitor_row(const StepReport& r, const std::string& symbol,
                       const std::vector<Hypothesis>& hypotheses) {
  std::cout << r.step << "\t" << symbol << "\t" << format_value(r.pi) << "\t"
            << format_value(r.lower) << "\t" << format_value(r.upper) << "\t";
  if (r.sup_realizable) {
    std::cout << (*r.sup_realizable ? "yes" : "no");
  } else {
    std::cout << "-";
  }
  for (const Hypothesis& h : hypotheses) {
    std::cout << "\t";
    if (h.open()) {
      std::cout << "open";
    } else {
      std::cout << "rejected:" << *h.rejected_at_step;
    }
  }
  std::cout << "\n" << std::flush;
}

int run_monitor(const MonitorArgs& args) {
  const PropertyPtr p = load_property(args.property);
  std::vector<Hypothesis> hyps;
  hyps.reserve(args.hypotheses.size());
  for (const std::string& spec : args.hypotheses) {
    hyps.push_back(parse_hypothesis(spec, p->domain));
  }
  GhostState ghost = make_ghost(p, std::move(hyps));

  std::cout << "step\tsymbol\tpi\tlower\tupper\trealizable";
  for (const std::string& spec : args.hypotheses) std::cout << "\t" << spec;
  std::cout << "\n" << std::flush;
  print_monitor_row(ghost_report(ghost), "-", ghost.hypotheses);

  std::ifstream file;
  if (!args.trace_file.empty()) {
    file.open(args.trace_file);
    if (!file) throw ParseError("cannot read trace file: " + args.trace_file);
  }
  std::istream& in = args.trace_file.empty() ? std::cin : file;

  std::string line;
  for (std::uint64_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      const auto symbol = p->alphabet->find(token);
      if (!symbol) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": unknown symbol '" + token + "'");
      }
      print_monitor_row(ghost_step(ghost, *symbol), token, ghost.hypotheses);
    }
  }
  return 0;
}

int run_classify(const ClassifyArgs& args) {
  static const std::vector<std::string> kKinds = {
      "safe",      "cosafe",     "live",         "colive",
      "multilive", "sup_closed", "verdict_safe", "verdict_live"};
  for (const std::string& r : args.require) {
    if (std::find(kKinds.begin(), kKinds.end(), r) == kKinds.end()) {
      throw CliUsage("--require: unknown check '" + r + "'");
    }
  }
  const PropertyPtr p = load_property(args.property);
  const ClassificationReport report = classify(p, args.budget, args.seed);

  std::cout << "property: " << p->name << "\n";
  std::cout << "backend: " << backend_name(*p) << "\n";
  for (const auto& [key, verdict] : report.verdicts) {
    std::cout << key << ": " << to_string(verdict);
    const auto w = report.witnesses.find(key);
    if (w != report.witnesses.end()) std::cout << render_witness(w->second);
    std::cout << "\n";
  }
  std::cout << "alpha_min: "
            << (report.alpha_min ? format_value(*report.alpha_min) : "-")
            << "\n";
  std::cout << "beta_min: "
            << (report.beta_min ? format_value(*report.beta_min) : "-")
            << "\n";

  bool some_no = false;
  bool some_bounded = false;
  for (const std::string& r : args.require) {
    const Verdict* v = report.find(r);
    if (!v || v->kind == VerdictKind::NotComputable ||
        v->kind == VerdictKind::NoViolationFoundUpTo) {
      some_bounded = true;
    } else if (v->kind == VerdictKind::No) {
      some_no = true;
    }
  }
  if (some_no) return 1;
  if (some_bounded) return 2;
  return 0;
}

int run_decompose(const DecomposeArgs& args) {
  const PropertyPtr p = load_property(args.property);
  DecomposeMode mode;
  std::pair<PropertyPtr, PropertyPtr> parts;
  if (args.mode == "safety-liveness") {
    mode = DecomposeMode::SafetyLiveness;
    parts = safety_liveness(p);
  } else if (args.mode == "cosafety-coliveness") {
    mode = DecomposeMode::CosafetyColiveness;
    parts = cosafety_coliveness(p);
  } else {
    mode = DecomposeMode::LivenessLiveness;
    const auto comma = args.symbols.find(',');
    if (args.symbols.empty() || comma == std::string::npos) {
      throw CliUsage("--symbols a,b is required for live-live mode");
    }
    parts = liveness_liveness(p, args.symbols.substr(0, comma),
                              args.symbols.substr(comma + 1));
  }
  const DecompositionReport report =
      verify_decomposition(p, parts, mode, args.samples, args.seed);

  std::cout << "mode: " << args.mode << "\n";
  std::cout << "part[0]: " << parts.first->name
            << " backend=" << backend_name(*parts.first) << "\n";
  std::cout << "part[1]: " << parts.second->name
            << " backend=" << backend_name(*parts.second) << "\n";
  std::cout << "lassos_checked: " << report.lassos_checked << "\n";
  if (report.identity_ok) {
    std::cout << "identity: ok\n";
  } else {
    std::cout << "identity: FAIL";
    if (report.counterexample) {
      std::cout << " counterexample=\"" << format_lasso(*report.counterexample)
                << "\"";
    }
    std::cout << "\n";
  }
  for (const auto& [name, verdict] : report.part_checks) {
    std::cout << "check " << name << ": " << to_string(verdict) << "\n";
  }
  const bool passed = report.passed();
  std::cout << "result: " << (passed ? "PASS" : "FAIL") << "\n";
  return passed ? 0 : 1;
}

int run_synth(const SynthArgs& args) {
  if (!(args.delta > 0.0)) throw CliUsage("--delta must be positive");
  const PropertyPtr p = load_property(args.property);
  const AbstractMonitor m = synthesize(p, args.delta, args.max_depth);
  write_file(args.out, export_monitor(m, MonitorFormat::Json));
  if (!args.dot.empty()) {
    write_file(args.dot, export_monitor(m, MonitorFormat::Dot));
  }
  std::cout << "classes: " << m.class_count() << "\n";
  return 0;
}

int run_closure(const ClosureArgs& args) {
  const PropertyPtr p = load_property(args.property);
  const PropertyPtr c =
      args.kind == "safety" ? safety_closure(p) : cosafety_closure(p);
  std::cout << property_to_json(*c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantitative safety and liveness toolkit"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "evaluate a property on a lasso or prefix");
  eval_cmd->add_option("--property", eval_args.property, "property file")
      ->required();
  eval_cmd
      ->add_option("--lasso", eval_args.lasso,
                   "trace text: \"stem ; cycle\" or a finite prefix")
      ->required();

  MonitorArgs monitor_args;
  CLI::App* monitor_cmd = app.add_subcommand(
      "monitor", "stream observations through the ghost monitor");
  monitor_cmd->add_option("--property", monitor_args.property, "property file")
      ->required();
  monitor_cmd->add_option("--trace", monitor_args.trace_file,
                          "observation file, one or more symbols per line "
                          "(default: stdin)");
  monitor_cmd->add_option("--hyp", monitor_args.hypotheses,
                          "hypothesis to track: ge:VALUE or le:VALUE");

  ClassifyArgs classify_args;
  CLI::App* classify_cmd =
      app.add_subcommand("classify", "run the full classification report");
  classify_cmd
      ->add_option("--property", classify_args.property, "property file")
      ->required();
  classify_cmd->add_option("--budget", classify_args.budget,
                           "stem and cycle bound for bounded searches");
  classify_cmd->add_option("--seed", classify_args.seed, "sampling seed");
  classify_cmd->add_option(
      "--require", classify_args.require,
      "check that must come out Yes: exit 1 if any is No, 2 if "
      "any is only bounded");

  DecomposeArgs decompose_args;
  CLI::App* decompose_cmd = app.add_subcommand(
      "decompose", "split a property into parts and verify the identity");
  decompose_cmd
      ->add_option("--property", decompose_args.property, "property file")
      ->required();
  decompose_cmd
      ->add_option("--mode", decompose_args.mode, "decomposition identity")
      ->required()
      ->check(CLI::IsMember(
          {"safety-liveness", "cosafety-coliveness", "live-live"}));
  decompose_cmd->add_option("--symbols", decompose_args.symbols,
                            "two comma-separated symbols for live-live");
  decompose_cmd->add_option("--samples", decompose_args.samples,
                            "random lassos to check");
  decompose_cmd->add_option("--seed", decompose_args.seed, "sampling seed");
  decompose_cmd->add_option("--budget", decompose_args.budget,
                            "bound for the part liveness checks");

  SynthArgs synth_args;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "synthesize an abstract monitor");
  synth_cmd->add_option("--property", synth_args.property, "property file")
      ->required();
  synth_cmd->add_option("--delta", synth_args.delta, "precision (> 0)")
      ->required();
  synth_cmd->add_option("--max-depth", synth_args.max_depth,
                        "unfolding depth bound");
  synth_cmd->add_option("--out", synth_args.out, "monitor JSON output file")
      ->required();
  synth_cmd->add_option("--dot", synth_args.dot, "also write a DOT rendering");

  ClosureArgs closure_args;
  CLI::App* closure_cmd = app.add_subcommand(
      "closure", "print the safety or co-safety closure machine");
  closure_cmd->add_option("--property", closure_args.property, "property file")
      ->required();
  closure_cmd->add_option("--kind", closure_args.kind, "closure kind")
      ->required()
      ->check(CLI::IsMember({"safety", "cosafety"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  }

  try {
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (monitor_cmd->parsed()) return run_monitor(monitor_args);
    if (classify_cmd->parsed()) return run_classify(classify_args);
    if (decompose_cmd->parsed()) return run_decompose(decompose_args);
    if (synth_cmd->parsed()) return run_synth(synth_args);
    if (closure_cmd->parsed()) return run_closure(closure_args);
    std::cerr << "error: no subcommand given\n";
    return 64;
  } catch (const CliUsage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const DepthExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const UnknownSymbol& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const EmptyCycle& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
}
