#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"
#include "sprw/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInputError = 2;
constexpr int kRuntimeDiagnostic = 3;

struct InputError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path + ": cannot open"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sprw::Program load_program(const std::string& path) {
  std::string text = read_file(path);
  try {
    sprw::Program program = sprw::parse_program(text);
    sprw::Program expanded = sprw::expand(program);
    sprw::Network check(expanded);
    return program;
  } catch (const sprw::Error& e) {
    throw InputError{path + ": " + e.what()};
  }
}

std::vector<sprw::TraceEvent> load_trace(const std::string& path) {
  std::string text = read_file(path);
  try {
    return sprw::parse_trace(text);
  } catch (const sprw::TraceError& e) {
    throw InputError{path + ": " + e.what()};
  }
}

std::optional<sprw::TimeMs> lifetime_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    return sprw::parse_lifetime(text);
  } catch (const std::exception& e) {
    throw InputError{std::string("--lifetime: ") + e.what()};
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{path + ": cannot write"};
  out << text;
}

int report_diagnostics(const std::vector<sprw::Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << "diagnostic at " << d.at << " in " << d.pattern << ": " << d.message << "\n";
  return diags.empty() ? kOk : kRuntimeDiagnostic;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("SPRW_SEED");
  if (!s || !*s) return 1;
  return std::strtoull(s, nullptr, 10);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Join-pattern engine trace replay and checking"};
  app.require_subcommand(1);

  std::string patterns, trace, out, lifetime;
  bool diff = false, perturb = false;
  std::size_t cases = 200, max_events = 1000;
  std::optional<std::uint64_t> emit_seed;

  auto* run = app.add_subcommand("run", "Replay a trace through one actor and print output records");
  run->add_option("--patterns", patterns, "Pattern file (.sprw)")->required();
  run->add_option("--trace", trace, "Trace file (JSON lines)")->required();
  run->add_option("--out", out, "Output file (default: stdout)");
  run->add_option("--lifetime", lifetime, "Message lifetime, e.g. '{1, :hours}' or milliseconds");

  auto* check = app.add_subcommand("check", "Parse, expand and compile; print the expansion and alpha-node report");
  check->add_option("--patterns", patterns, "Pattern file (.sprw)")->required();

  auto* oracle = app.add_subcommand("oracle", "Replay with the reference matcher, optionally diffing against the engine");
  oracle->add_option("--patterns", patterns, "Pattern file (.sprw)")->required();
  oracle->add_option("--trace", trace, "Trace file (JSON lines)")->required();
  oracle->add_option("--out", out, "Output file for the reference records (default: stdout)");
  oracle->add_option("--lifetime", lifetime, "Message lifetime");
  oracle->add_flag("--diff", diff, "Compare engine and reference output");
  oracle->add_flag("--perturb-engine", perturb)->group("");

  auto* fuzz = app.add_subcommand("fuzz", "Compare engine and reference on random programs (seed from SPRW_SEED)");
  fuzz->add_option("--cases", cases, "Number of random cases");
  fuzz->add_option("--max-events", max_events, "Upper bound on trace length");
  fuzz->add_option("--emit", emit_seed, "Print the program and trace of one case seed instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      sprw::Program program = load_program(patterns);
      auto events = load_trace(trace);
      auto result = sprw::replay_engine(program, events, lifetime_flag(lifetime));
      write_output(out, sprw::render_records(result.records));
      return report_diagnostics(result.diagnostics);
    }
    if (*check) {
      sprw::Program program = load_program(patterns);
      std::cout << sprw::check_report(program);
      return kOk;
    }
    if (*oracle) {
      sprw::Program program = load_program(patterns);
      auto events = load_trace(trace);
      auto life = lifetime_flag(lifetime);
      auto reference = sprw::replay_oracle(program, events, life);
      if (!diff) {
        write_output(out, sprw::render_records(reference.records));
        return report_diagnostics(reference.diagnostics);
      }
      auto engine = sprw::replay_engine(program, events, life);
      if (perturb) {
        if (engine.records.empty()) engine.records.push_back(sprw::OutputRecord{0, "<perturbed>", {}, {}, {}, {}});
        else engine.records.front().at += 1;
      }
      auto d = sprw::first_divergence(engine.records, reference.records);
      if (!d) {
        std::cout << "identical (" << engine.records.size() << " records)\n";
        return kOk;
      }
      std::cout << "divergence at record " << d->index + 1 << "\n";
      std::cout << "  engine: " << d->engine.value_or("<none>") << "\n";
      std::cout << "  oracle: " << d->oracle.value_or("<none>") << "\n";
      return kFailure;
    }
    if (*fuzz) {
      const std::uint64_t base = seed_from_env();
      if (emit_seed) {
        auto c = sprw::random_case(*emit_seed, max_events);
        std::cout << "# lifetime: " << (c.lifetime ? std::to_string(*c.lifetime) : "none") << "\n"
                  << c.program_text << "---\n"
                  << sprw::render_trace(c.trace);
        return kOk;
      }
      std::size_t divergent = 0;
      for (std::size_t i = 0; i < cases; ++i) {
        auto c = sprw::random_case(base + i, max_events);
        sprw::Program program = sprw::parse_program(c.program_text);
        auto engine = sprw::replay_engine(program, c.trace, c.lifetime);
        auto reference = sprw::replay_oracle(program, c.trace, c.lifetime);
        if (auto d = sprw::first_divergence(engine.records, reference.records)) {
          ++divergent;
          std::cout << "seed " << c.seed << ": divergence at record " << d->index + 1 << "\n"
                    << "  engine: " << d->engine.value_or("<none>") << "\n"
                    << "  oracle: " << d->oracle.value_or("<none>") << "\n";
        }
      }
      std::cout << cases << " cases from seed " << base << ", " << divergent << " divergent\n";
      return divergent ? kFailure : kOk;
    }
  } catch (const InputError& e) {
    std::cerr << e.message << "\n";
    return kInputError;
  } catch (const sprw::TimeRegression& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const sprw::Error& e) {
    std::cerr << e.what() << "\n";
    return kRuntimeDiagnostic;
  }
  return kOk;
}
