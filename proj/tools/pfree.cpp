// pfree: analyze sets, extract product-free subsets, verify certificates,
// and tabulate benchmarks.
//
// Exit codes: 0 verified, 2 a math stage found nothing or a claim failed,
// 1 usage or I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pfree/pfree.hpp"

namespace {

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return;
  }
  std::ofstream f(*out);
  if (!f) throw pfree::Error("cannot write '" + *out + "'");
  f << text;
}

pfree::Rational parse_q(const std::string& s) { return pfree::parse_rational(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Product-free subsets of finite sets in groups"};
  app.require_subcommand(1);

  pfree::RunConfig cfg;
  std::string input, delta = "1/4", alpha = "1/2", k = "2", set_file, certificate;
  std::uint64_t budget = 0, seed = 0;
  std::string out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--set-file", set_file, "Read the input set from a set file");
    sub->add_option("--budget", budget, "Cap on the size of any intermediate product set")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "Write the result here instead of stdout");
  };

  auto* analyze = app.add_subcommand("analyze", "Doubling, covering and product-free diagnostics");
  analyze->add_option("input", input, "Family spec or group spec");
  analyze->add_option("--k", k, "k for the approximate-group test (p/q)");
  add_common(analyze);

  auto* extract = app.add_subcommand("extract", "Extract a product-free subset and write a certificate");
  extract->add_option("algorithm", cfg.algorithm, "Algorithm")
      ->required()
      ->check(CLI::IsMember(pfree::algorithm_names()));
  extract->add_option("input", input, "Family spec or group spec");
  extract->add_option("--delta", delta, "Homogeneous-tuple density (p/q)");
  extract->add_option("--alpha", alpha, "Halving target (p/q)");
  extract->add_option("--seed", seed, "Seed for randomized search stages");
  add_common(extract);

  auto* verify = app.add_subcommand("verify", "Re-check a certificate against its input set");
  verify->add_option("certificate", certificate, "Certificate JSON file")->required()->check(CLI::ExistingFile);
  verify->add_option("input", input, "Family spec or group spec");
  add_common(verify);

  auto* bench = app.add_subcommand("bench", "CSV table over families and algorithms");
  // family specs contain commas, so the list separator is ';' or whitespace
  bench->add_option("--families", cfg.families, "Family specs, space- or ';'-separated")->delimiter(';');
  bench->add_option("--algorithms", cfg.algorithms, "Algorithms, comma-separated")->delimiter(',')->check(CLI::IsMember(pfree::algorithm_names()));
  bench->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--delta", delta, "Homogeneous-tuple density (p/q)");
  bench->add_option("--alpha", alpha, "Halving target (p/q)");
  bench->add_option("--seed", seed, "Seed for randomized search stages");
  bench->add_option("--budget", budget, "Cap on the size of any intermediate product set")->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "Write the CSV here instead of stdout");

  auto* gen = app.add_subcommand("generate", "Write a family instance as a set file");
  gen->add_option("input", input, "Family spec or group spec")->required();
  gen->add_option("--out", out, "Output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!input.empty()) cfg.input = input;
    if (!set_file.empty()) cfg.set_file = set_file;
    if (!out.empty()) cfg.out = out;
    if (budget) cfg.budget.max_elements = budget;
    cfg.delta = parse_q(delta);
    cfg.alpha = parse_q(alpha);
    cfg.k = parse_q(k);
    for (auto* sub : {extract, bench}) {
      if (sub->count("--seed")) cfg.seed = seed;
    }

    if (*analyze) {
      const auto x = pfree::resolve_input(cfg);
      emit(cfg.out, pfree::cmd_analyze(x, cfg).dump(2) + "\n");
      return 0;
    }
    if (*extract) {
      const auto x = pfree::resolve_input(cfg);
      const auto cert = pfree::run_algorithm(cfg.algorithm, x, cfg);
      emit(cfg.out, pfree::to_json(cert).dump(2) + "\n");
      const int code = pfree::certificate_exit_code(cert);
      if (code != 0) std::cerr << "extraction did not verify" << (cert.failure.empty() ? "" : ": " + cert.failure) << "\n";
      return code;
    }
    if (*verify) {
      const auto x = pfree::resolve_input(cfg);
      std::ifstream f(certificate);
      pfree::Json j;
      try {
        j = pfree::Json::parse(f);
      } catch (const pfree::Json::exception& e) {
        throw pfree::ParseError(std::string("certificate is not JSON: ") + e.what());
      }
      const auto report = pfree::cmd_verify(j, x, cfg);
      for (const auto& why : report.failures) std::cout << "FAIL " << why << "\n";
      if (report.pass()) std::cout << "PASS\n";
      return report.pass() ? 0 : 2;
    }
    if (*bench) {
      emit(cfg.out, pfree::cmd_bench(cfg));
      return 0;
    }
    if (*gen) {
      emit(cfg.out, pfree::format_set_text(pfree::resolve_set_source(input)));
      return 0;
    }
  } catch (const pfree::NotFound& e) {
    std::cerr << "not found (" << e.stage() << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
