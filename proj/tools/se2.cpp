// Command-line front end. Exit codes: 0 success or certified, 2 inconclusive,
// 1 usage or data error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "se2/abelian.hpp"
#include "se2/barcomplex.hpp"
#include "se2/config.hpp"
#include "se2/presentation.hpp"
#include "se2/presentation_io.hpp"
#include "se2/rewriting.hpp"
#include "se2/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInconclusive = 2;

void emit_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    se2::write_file_atomic(path, text);
  }
}

// Completion flags shared by `kb` and `verify-h2`. Only flags actually given
// override the config file.
struct CompletionFlags {
  std::string config_path;
  std::size_t max_rules = 0;
  std::size_t tidy_interval = 0;
  std::size_t max_equations = 0;
  std::size_t max_overlap_length = 0;
  std::size_t max_stored_length = 0;
  std::vector<CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value parameter file");
    options = {
        app->add_option("--max-rules", max_rules, "rule cap (default 500000)"),
        app->add_option("--tidy-interval", tidy_interval, "tidy after this many new rules (default 1000)"),
        app->add_option("--max-equations", max_equations, "cap on processed equations"),
        app->add_option("--max-overlap-length", max_overlap_length, "defer longer critical pairs (0 = off)"),
        app->add_option("--max-stored-length", max_stored_length, "discard rules with longer lhs (0 = off)"),
    };
  }

  se2::Config flags_config() const {
    se2::Config c;
    const char* keys[] = {"max_rules", "tidy_interval", "max_equations", "max_overlap_length", "max_stored_length"};
    const std::size_t values[] = {max_rules, tidy_interval, max_equations, max_overlap_length, max_stored_length};
    for (std::size_t i = 0; i < options.size(); ++i)
      if (options[i]->count()) c.set(keys[i], std::to_string(values[i]));
    return c;
  }

  se2::Config resolved(const se2::Config& extra_flags = {}) const {
    se2::Config file;
    if (!config_path.empty()) file = se2::Config::parse(se2::read_file(config_path));
    return file.merged(flags_config()).merged(extra_flags);
  }
};

int cmd_gen(unsigned ell, bool reduced, const std::string& out) {
  se2::Presentation p = se2::generate(ell);
  if (reduced) p = se2::reduced_form(p);
  emit_output(out, se2::serialize(p));
  return kOk;
}

int cmd_kb(const std::string& file, const CompletionFlags& flags, const std::string& checkpoint,
           const std::string& resume, const std::string& out, bool quiet) {
  const se2::Presentation p = se2::parse_presentation(se2::read_file(file));
  const se2::VerifyParams params = flags.resolved().to_params();
  se2::RewriteSystem rs = resume.empty() ? se2::from_presentation(p, {})
                                         : se2::RewriteSystem::restore(se2::read_file(resume));
  if (!(*rs.alphabet() == *p.alphabet)) throw std::runtime_error("checkpoint alphabet does not match " + file);
  std::uint64_t next_checkpoint = params.checkpoint_every;
  std::uint64_t next_report = 0;
  const auto status = rs.complete(params.completion, [&](const se2::CompletionStats& s) {
    if (!checkpoint.empty() && s.equations_processed >= next_checkpoint) {
      next_checkpoint = s.equations_processed + params.checkpoint_every;
      se2::write_file_atomic(checkpoint, rs.checkpoint());
    }
    if (!quiet && s.equations_processed >= next_report) {
      next_report = s.equations_processed + 100'000;
      std::cerr << "equations " << s.equations_processed << ", rules " << s.rules << '\n';
    }
    return false;
  });
  if (!checkpoint.empty()) se2::write_file_atomic(checkpoint, rs.checkpoint());
  emit_output(out, rs.checkpoint());
  const auto st = rs.stats();
  std::cerr << se2::state_name(status.state);
  if (!status.reason.empty()) std::cerr << " (" << status.reason << ")";
  std::cerr << ": " << st.rules << " rules, " << st.equations_processed << " equations processed\n";
  return status.state == se2::CompletionState::Confluent ? kOk : kInconclusive;
}

int cmd_reduce(const std::string& rules, const std::string& word) {
  const se2::RewriteSystem rs = se2::RewriteSystem::restore(se2::read_file(rules));
  const se2::Word w = se2::parse_word(word, rs.alphabet());
  std::cout << se2::to_string(rs.reduce(w)) << '\n';
  return kOk;
}

int cmd_verify(unsigned ell, const CompletionFlags& flags, const se2::Config& extra, const std::string& checkpoint,
               const std::string& resume, bool skip_completion, const std::string& report_path, bool quiet) {
  if (ell != 3 && ell != 5) throw CLI::ValidationError("--ell", "must be 3 or 5");
  se2::VerifyParams params = flags.resolved(extra).to_params();
  params.checkpoint_path = checkpoint;
  params.resume_path = resume;
  params.skip_completion = skip_completion;
  if (!quiet) params.progress = [](const std::string& m) { std::cerr << m << '\n'; };
  const se2::VerificationReport report = ell == 3 ? se2::verify_ell3(params) : se2::verify_ell5(params);
  const std::string text = report.format();
  if (!report_path.empty()) se2::write_file_atomic(report_path, text);
  std::cout << text;
  return report.certified() ? kOk : kInconclusive;
}

int cmd_etale(unsigned ell, bool enumerate, bool count, bool cycles) {
  const se2::PrimeContext ctx(ell);
  if (count || (!enumerate && !cycles)) {
    std::cout << se2::obstruction_count(ctx) << '\n';
    return kOk;
  }
  auto unit_name = [&](unsigned v) { return v == 0 ? std::string("-xi") : "eps" + std::to_string(v); };
  if (enumerate) {
    for (const auto& c : se2::enumerate_obstructions(ctx)) {
      std::cout << "s=" << c.s << " j=" << c.j() << " degree=" << c.degree << " weight=" << c.weight << " units=";
      for (std::size_t i = 0; i < c.subset.size(); ++i) std::cout << (i ? "," : "") << unit_name(c.subset[i]);
      std::cout << '\n';
    }
  }
  if (cycles) {
    for (const auto& c : se2::se2_obstruction_cycles(ctx)) {
      std::cout << "s=" << c.cls.s << " j=" << c.cls.j() << " se2_degree=" << c.degree;
      if (c.hopf_word) std::cout << " hopf=" << se2::to_string(*c.hopf_word);
      std::cout << "\n  " << c.chain.format() << '\n';
    }
  }
  return kOk;
}

int cmd_snf(const std::string& file, bool transforms) {
  const se2::IntMatrix m = se2::parse_matrix(se2::read_file(file));
  const se2::SnfResult res = se2::smith_normal_form(m, transforms);
  for (std::size_t i = 0; i < res.diag.size(); ++i) std::cout << (i ? " " : "") << res.diag[i].get_str();
  std::cout << '\n';
  if (transforms) {
    std::cout << "U\n";
    se2::write_matrix(std::cout, *res.U);
    std::cout << "V\n";
    se2::write_matrix(std::cout, *res.V);
  }
  return kOk;
}

int cmd_abelian(const std::string& file) {
  const se2::Presentation p = se2::parse_presentation(se2::read_file(file));
  std::cout << se2::format_invariants(se2::abelian_invariants(*p.alphabet, p.words())) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SE_2 presentations, rewriting and H_2 verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(se2::kToolVersion));

  unsigned ell = 0;
  std::string out;
  std::string file;
  std::string checkpoint;
  std::string resume;
  bool quiet = false;

  auto* gen = app.add_subcommand("gen", "write the SE_2(ell) presentation");
  bool reduced = false;
  gen->add_option("--ell", ell, "odd prime")->required();
  gen->add_flag("--reduced", reduced, "drop definitional generators");
  gen->add_option("-o,--output", out, "output file (default stdout)");

  auto* kb = app.add_subcommand("kb", "Knuth-Bendix completion of a presentation file");
  CompletionFlags kb_flags;
  kb->add_option("file", file, "presentation file")->required()->check(CLI::ExistingFile);
  kb_flags.attach(kb);
  kb->add_option("--checkpoint", checkpoint, "periodic checkpoint file");
  kb->add_option("--resume", resume, "resume from a checkpoint")->check(CLI::ExistingFile);
  kb->add_option("-o,--output", out, "rules file (default stdout)");
  kb->add_flag("-q,--quiet", quiet, "no progress output");

  auto* reduce = app.add_subcommand("reduce", "reduce a word with a rules file");
  std::string word;
  reduce->add_option("rules", file, "rules file written by kb")->required()->check(CLI::ExistingFile);
  reduce->add_option("--word", word, "word to reduce")->required();

  auto* verify = app.add_subcommand("verify-h2", "H_2 verification for ell = 3 or 5");
  CompletionFlags v_flags;
  std::uint64_t check_every = 0;
  std::uint64_t checkpoint_every = 0;
  bool skip_completion = false;
  bool no_early_stop = false;
  std::string report_path;
  verify->add_option("--ell", ell, "3 or 5")->required();
  v_flags.attach(verify);
  auto* check_opt = verify->add_option("--check-every", check_every, "test targets every N processed equations");
  auto* cpe_opt = verify->add_option("--checkpoint-every", checkpoint_every, "checkpoint every N processed equations");
  verify->add_flag("--no-early-stop", no_early_stop, "keep completing after all targets are certified");
  verify->add_flag("--skip-completion", skip_completion, "ell = 5: skip the long completion step");
  verify->add_option("--checkpoint", checkpoint, "checkpoint file for the completion step");
  verify->add_option("--resume", resume, "resume the completion step")->check(CLI::ExistingFile);
  verify->add_option("--report", report_path, "write the report here as well");
  verify->add_flag("-q,--quiet", quiet, "no progress output");

  auto* etale = app.add_subcommand("etale", "etale obstruction classes");
  bool enumerate = false;
  bool count = false;
  bool cycles = false;
  etale->add_option("--ell", ell, "odd prime")->required();
  auto* g1 = etale->add_flag("--enumerate", enumerate, "list the classes");
  auto* g2 = etale->add_flag("--count", count, "number of classes");
  auto* g3 = etale->add_flag("--cycles", cycles, "SE_2 cycles mod ell");
  g1->excludes(g2)->excludes(g3);
  g2->excludes(g3);

  auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix file");
  bool transforms = false;
  snf->add_option("file", file, "matrix file: 'rows cols' then entries")->required()->check(CLI::ExistingFile);
  snf->add_flag("--transforms", transforms, "also print U and V with U*A*V = D");

  auto* abelian = app.add_subcommand("abelian", "abelian invariants of a presentation file");
  abelian->add_option("file", file, "presentation file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*gen) return cmd_gen(ell, reduced, out);
    if (*kb) return cmd_kb(file, kb_flags, checkpoint, resume, out, quiet);
    if (*reduce) return cmd_reduce(file, word);
    if (*verify) {
      se2::Config extra;
      if (check_opt->count()) extra.set("check_every", std::to_string(check_every));
      if (cpe_opt->count()) extra.set("checkpoint_every", std::to_string(checkpoint_every));
      if (no_early_stop) extra.set("stop_when_certified", "false");
      return cmd_verify(ell, v_flags, extra, checkpoint, resume, skip_completion, report_path, quiet);
    }
    if (*etale) return cmd_etale(ell, enumerate, count, cycles);
    if (*snf) return cmd_snf(file, transforms);
    if (*abelian) return cmd_abelian(file);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
