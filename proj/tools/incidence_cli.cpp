// Command-line front end: exact counts of incidence matrices, asymptotic
// evaluations, uniform random sampling and the embedded verification suite.
// Every invocation emits one machine-readable record (JSON; CSV for `table`).
//
// Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 numeric failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "incidence/incidence.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace incidence;

constexpr std::uint64_t default_seed = 1;

struct cli_options {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t l = 0;
  std::string method;
  std::string target;
  std::optional<std::size_t> trunc;
  std::uint64_t trials = 10000;
  std::uint64_t seed = default_seed;
  std::string emit_path;
  std::string format = "json";
  unsigned jobs = 1;
  bool timing = false;
};

class timer {
 public:
  timer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

json make_record(const std::string& command, json inputs, json result,
                 json metadata, const cli_options& opt, const timer& t) {
  if (opt.timing) metadata["runtime_ms"] = t.elapsed_ms();
  json record;
  record["command"] = command;
  record["inputs"] = std::move(inputs);
  record["result"] = std::move(result);
  record["metadata"] = std::move(metadata);
  return record;
}

void print_record(const json& record) { std::cout << record.dump(2) << "\n"; }

void require_json_format(const cli_options& opt) {
  if (opt.format != "json") {
    throw CLI::ValidationError("--format", "only json is valid here");
  }
}

int run_count_f(const cli_options& opt) {
  require_json_format(opt);
  timer t;
  json result;
  if (opt.method == "stirling") {
    result["f"] = f_via_stirling(opt.n).str();
  } else if (opt.method == "msum") {
    result["f"] = f_via_msum(opt.n).str();
  } else if (opt.method == "positive") {
    if (!opt.trunc) {
      throw CLI::RequiredError("--trunc (required with --method positive)");
    }
    if (opt.n < 1) {
      throw CLI::ValidationError("--n", "method positive needs n >= 1");
    }
    const bounded_value bounds = f_positive_bounds(opt.n, *opt.trunc);
    result["lower"] = bounds.lower.str();
    result["upper"] = bounds.upper.str();
    const auto pinned = bounds.pinned_integer();
    result["pins_integer"] = pinned.has_value();
    if (pinned) result["f"] = pinned->str();
  } else {
    throw CLI::ValidationError("--method", "expected msum|stirling|positive");
  }
  json inputs{{"n", opt.n}};
  if (opt.trunc) inputs["trunc"] = *opt.trunc;
  print_record(make_record("count f", inputs, result,
                           json{{"method", opt.method}}, opt, t));
  return 0;
}

int run_count_m(const cli_options& opt) {
  require_json_format(opt);
  timer t;
  Nat m;
  if (opt.method == "mobius") {
    m = m_mobius(opt.k, opt.l, opt.n);
  } else if (opt.method == "stirling") {
    m = m_exact(opt.k, opt.l, opt.n, stirling_cache(opt.n));
  } else {
    throw CLI::ValidationError("--method", "expected mobius|stirling");
  }
  print_record(make_record(
      "count m", json{{"n", opt.n}, {"k", opt.k}, {"l", opt.l}},
      json{{"m", m.str()}}, json{{"method", opt.method}}, opt, t));
  return 0;
}

int run_table(const cli_options& opt) {
  if (opt.n < 1) throw CLI::ValidationError("--n", "need n >= 1");
  timer t;
  const stirling_cache cache(opt.n);
  const count_table table = make_count_table(opt.n, cache);
  if (opt.format == "csv") {
    std::cout << "k,l,m\n";
    for (const auto& [kl, m] : table.entries) {
      std::cout << kl.first << ',' << kl.second << ',' << m.str() << '\n';
    }
    std::cout << "total,," << table.total().str() << '\n';
  } else {
    json rows = json::array();
    for (const auto& [kl, m] : table.entries) {
      rows.push_back(json{{"k", kl.first}, {"l", kl.second}, {"m", m.str()}});
    }
    print_record(make_record("table", json{{"n", opt.n}},
                             json{{"entries", std::move(rows)},
                                  {"total", table.total().str()}},
                             json{{"method", "stirling"}}, opt, t));
  }
  return 0;
}

int run_asym(const cli_options& opt) {
  require_json_format(opt);
  timer t;
  json result;
  std::optional<Nat> exact;
  log_estimate estimate;
  if (opt.target == "f") {
    if (opt.n < 1) throw CLI::ValidationError("--n", "need n >= 1");
    estimate = f_asym(opt.n);
    if (opt.n <= 200) exact = f_via_stirling(opt.n);
  } else if (opt.target == "p") {
    if (opt.n < 1) throw CLI::ValidationError("--n", "need n >= 1");
    estimate = p_asym(opt.n);
    if (opt.n <= 500) exact = ordered_bell(opt.n);
  } else if (opt.target == "m") {
    if (opt.k == 0 || opt.l == 0) {
      throw CLI::RequiredError("--k and --l (required with target m)");
    }
    estimate = m_asym(opt.k, opt.l, opt.n);
    const double nd = static_cast<double>(opt.n);
    const saddle_point s = saddle_solve(static_cast<double>(opt.k) / nd);
    const saddle_point u = saddle_solve(static_cast<double>(opt.l) / nd);
    result["kappa"] = s.kappa;
    result["lambda"] = u.kappa;
    result["sigma"] = s.sigma;
    result["tau"] = u.sigma;
    if (opt.n <= 200) exact = m_exact(opt.k, opt.l, opt.n, stirling_cache(opt.n));
  } else {
    throw CLI::ValidationError("target", "expected f|m|p");
  }
  result["log_value"] = estimate.log_value;
  if (estimate.value) result["value"] = *estimate.value;
  if (exact && *exact > 0) {
    result["exact"] = exact->str();
    result["ratio"] = std::exp(estimate.log_value - log_of(*exact));
  }
  json inputs{{"target", opt.target}, {"n", opt.n}};
  if (opt.target == "m") {
    inputs["k"] = opt.k;
    inputs["l"] = opt.l;
  }
  print_record(make_record("asym", inputs, result,
                           json{{"method", "log-space"}}, opt, t));
  return 0;
}

int run_sample(const cli_options& opt) {
  require_json_format(opt);
  timer t;
  std::vector<incidence_matrix> matrices;
  const bool want_matrices = !opt.emit_path.empty();
  const sample_report report =
      run_stats(opt.n, opt.trials, opt.seed, opt.jobs,
                want_matrices ? &matrices : nullptr);

  if (want_matrices) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const bool nonempty =
        fs::exists(opt.emit_path, ec) && fs::file_size(opt.emit_path, ec) > 0;
    std::ofstream out(opt.emit_path, std::ios::app);
    if (!out) {
      throw CLI::ValidationError("--emit", "cannot open '" + opt.emit_path +
                                               "' for appending");
    }
    bool first = !nonempty;
    for (const auto& m : matrices) {
      if (!first) out << '\n';
      first = false;
      write_matrix_block(out, m);
    }
    if (!out.flush()) {
      throw CLI::ValidationError("--emit", "write failed on '" +
                                               opt.emit_path + "'");
    }
  }

  json hist;
  for (const auto& [w, c] : report.w_histogram) hist[std::to_string(w)] = c;
  json result{{"accepted", report.accepted},
              {"acceptance_rate", report.acceptance_rate},
              {"mean_w", report.mean_w},
              {"w_histogram", std::move(hist)}};
  if (opt.n <= 200) {
    const Rat acceptance = exact_acceptance(opt.n);
    result["exact_acceptance"] = acceptance.str();
    result["exact_acceptance_value"] = acceptance.convert_to<double>();
  }
  if (want_matrices) result["emitted"] = matrices.size();
  print_record(make_record(
      "sample", json{{"n", opt.n}, {"trials", opt.trials}}, result,
      json{{"method", "preorder-pair-rejection"}, {"seed", opt.seed}}, opt,
      t));
  return 0;
}

int run_verify(const cli_options& opt) {
  timer t;
  const stirling_cache cache(12);
  const auto results = run_verification(cache);
  const bool ok = all_passed(results);
  if (opt.format == "json") {
    json checks = json::array();
    for (const auto& r : results) {
      checks.push_back(json{{"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
    }
    print_record(make_record("verify", json::object(),
                             json{{"passed", ok}, {"checks", std::move(checks)}},
                             json::object(), opt, t));
  } else {
    throw CLI::ValidationError("--format", "only json is valid here");
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and asymptotic enumeration of incidence matrices"};
  app.require_subcommand(1);
  cli_options opt;
  int (*selected)(const cli_options&) = nullptr;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_timing = [&](CLI::App* cmd) {
    cmd->add_flag("--timing", opt.timing, "Include runtime_ms in metadata");
  };

  CLI::App* count = app.add_subcommand("count", "Exact counts");
  count->require_subcommand(1);

  CLI::App* count_f = count->add_subcommand("f", "F(n), matrices with n ones");
  opt.method = "stirling";
  count_f->add_option("--n", opt.n, "Number of ones")->required();
  count_f->add_option("--method", opt.method, "msum|stirling|positive");
  count_f->add_option("--trunc", [&opt](const std::vector<std::string>& vals) {
    opt.trunc = std::stoul(vals.at(0));
    return true;
  }, "Truncation K for --method positive");
  add_format(count_f);
  add_timing(count_f);
  count_f->callback([&] { selected = run_count_f; });

  CLI::App* count_m = count->add_subcommand("m", "m_kl(n), k x l matrices");
  count_m->add_option("--n", opt.n, "Number of ones")->required();
  count_m->add_option("--k", opt.k, "Rows")->required();
  count_m->add_option("--l", opt.l, "Columns")->required();
  count_m->add_option("--method", opt.method, "mobius|stirling");
  add_format(count_m);
  add_timing(count_m);
  count_m->callback([&] { selected = run_count_m; });

  CLI::App* table = app.add_subcommand("table", "CSV of all m_kl(n)");
  table->add_option("--n", opt.n, "Number of ones")->required();
  opt.format = "json";
  add_format(table);
  add_timing(table);
  table->callback([&] {
    // table defaults to CSV unless asked otherwise
    if (table->count("--format") == 0) opt.format = "csv";
    selected = run_table;
  });

  CLI::App* asym = app.add_subcommand("asym", "Asymptotic evaluation");
  asym->add_option("target", opt.target, "f|m|p")->required();
  asym->add_option("--n", opt.n, "Weight n")->required();
  asym->add_option("--k", opt.k, "Rows (target m)");
  asym->add_option("--l", opt.l, "Columns (target m)");
  add_format(asym);
  add_timing(asym);
  asym->callback([&] { selected = run_asym; });

  CLI::App* sample = app.add_subcommand("sample", "Random incidence matrices");
  sample->add_option("--n", opt.n, "Number of ones")->required();
  sample->add_option("--trials", opt.trials, "Preorder-pair trials")
      ->check(CLI::PositiveNumber);
  sample->add_option("--seed", opt.seed, "RNG seed (fixed default)");
  sample->add_option("--emit", opt.emit_path, "Append accepted matrices here");
  sample->add_option("--jobs", opt.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  add_format(sample);
  add_timing(sample);
  sample->callback([&] { selected = run_sample; });

  CLI::App* verify = app.add_subcommand("verify", "Embedded self-checks");
  add_format(verify);
  add_timing(verify);
  verify->callback([&] { selected = run_verify; });

  try {
    app.parse(argc, argv);
    if (opt.n < 1 && selected == run_sample) {
      throw CLI::ValidationError("--n", "need n >= 1");
    }
    return selected(opt);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  } catch (const internal_consistency_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const saddle_convergence_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
