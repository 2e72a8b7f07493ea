// Command-line front end. Uses only the public C API.
//
// Exit codes: 0 passing report, 2 failing report, 1 usage or I/O error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blocktrid/blocktrid.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bt_status s) {
  if (s != BT_OK) throw UsageError(std::string(bt_status_string(s)) + ": " + bt_last_error());
}

struct MatrixDeleter {
  void operator()(bt_matrix* m) const { bt_matrix_destroy(m); }
};
struct ScheduleDeleter {
  void operator()(bt_schedule* s) const { bt_schedule_destroy(s); }
};
struct FormDeleter {
  void operator()(bt_form* f) const { bt_form_destroy(f); }
};
struct StringDeleter {
  void operator()(char* s) const { bt_string_free(s); }
};
using MatrixPtr = std::unique_ptr<bt_matrix, MatrixDeleter>;
using SchedulePtr = std::unique_ptr<bt_schedule, ScheduleDeleter>;
using FormPtr = std::unique_ptr<bt_form, FormDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Options {
  std::vector<std::string> inputs;
  std::string format;
  std::string schedule = "canonical";
  std::string kind = "general";
  std::size_t dim = 0;
  double tol_dep = 1e-10;
  std::optional<double> threshold;
  std::string output;
  std::string report;
  bool svg = false;
  std::string seed_vector = "1";
  bool alt = false;
  std::string pattern;
  bool selfadjoint = false;
  bool schedule_given = false;
};

double default_threshold() {
  const char* env = std::getenv("BLOCKTRID_THRESHOLD");
  if (!env || !*env) return 1e-10;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (*end != '\0' || !(v > 0.0)) throw UsageError(std::string("invalid BLOCKTRID_THRESHOLD '") + env + "'");
  return v;
}

double threshold_of(const Options& o) { return o.threshold ? *o.threshold : default_threshold(); }

bt_options options_of(const Options& o) {
  bt_options b;
  bt_options_default(&b);
  b.dependence_tol = o.tol_dep;
  b.threshold = threshold_of(o);
  return b;
}

// Output format follows the input: explicit --format, else the extension.
std::string format_of(const Options& o, const std::string& path) {
  if (!o.format.empty()) return o.format;
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".csv") return "csv";
  if (ext == ".json") return "json";
  return "mm";
}

MatrixPtr load(const Options& o, const std::string& path) {
  bt_matrix* m = nullptr;
  check(bt_matrix_read(path.c_str(), format_of(o, path).c_str(), &m));
  return MatrixPtr(m);
}

MatrixPtr load_single(const Options& o) {
  if (o.inputs.size() != 1) throw UsageError("exactly one --input is required");
  return load(o, o.inputs.front());
}

bt_schedule_kind kind_of(const std::string& k) {
  if (k == "general") return BT_SCHEDULE_GENERAL;
  if (k == "cyclic") return BT_SCHEDULE_CYCLIC;
  throw UsageError("--kind must be general or cyclic");
}

SchedulePtr schedule_of(const Options& o, std::size_t dim) {
  bt_schedule* s = nullptr;
  check(bt_schedule_parse(o.schedule.c_str(), kind_of(o.kind), dim, &s));
  return SchedulePtr(s);
}

// "k" is the 1-based standard vector e_k; "random:SEED" draws entries
// uniformly from the unit square with a splitmix64 stream.
std::vector<double> seed_vector_of(const std::string& text, std::size_t d) {
  std::vector<double> v(2 * d, 0.0);
  if (text.rfind("random:", 0) == 0) {
    std::uint64_t state = 0;
    try {
      state = std::stoull(text.substr(7));
    } catch (const std::exception&) {
      throw UsageError("malformed --seed-vector '" + text + "'");
    }
    auto next = [&state] {
      std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      z ^= z >> 31;
      return static_cast<double>(z >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    };
    for (double& x : v) x = next();
    return v;
  }
  std::size_t k = 0;
  try {
    std::size_t used = 0;
    k = std::stoul(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("malformed --seed-vector '" + text + "'");
  }
  if (k < 1 || k > d) throw UsageError("--seed-vector index out of range 1.." + std::to_string(d));
  v[2 * (k - 1)] = 1.0;
  return v;
}

std::string report_json(const bt_form* f) {
  char* s = nullptr;
  check(bt_form_report_json(f, &s));
  return StringPtr(s).get();
}

void write_form(const Options& o, const bt_form* f, const std::string& prefix) {
  if (o.output.empty()) return;
  check(bt_form_write(f, o.output.c_str(), format_of(o, o.inputs.front()).c_str(), o.svg ? 1 : 0,
                      prefix.c_str()));
}

void print_summary(const char* label, const bt_form* f) {
  std::cout << label << ": " << (bt_form_passing(f) ? "PASS" : "FAIL") << " (" << bt_form_kind(f)
            << ", dim " << bt_form_dim(f) << ")\n";
}

// Reports, writes and returns the exit code for a list of forms.
int finish(const Options& o, const std::vector<const bt_form*>& forms) {
  bool passing = true;
  for (std::size_t k = 0; k < forms.size(); ++k) {
    const bt_form* f = forms[k];
    passing = passing && bt_form_passing(f);
    const std::string prefix = forms.size() > 1 ? "S" + std::to_string(k + 1) + "_" : "";
    write_form(o, f, prefix);
    if (o.report == "json") {
      std::cout << report_json(f) << '\n';
    } else {
      print_summary(forms.size() > 1 ? ("S" + std::to_string(k + 1)).c_str() : bt_form_kind(f), f);
    }
  }
  return passing ? kExitPass : kExitFail;
}

int run_single(const Options& o, bt_form* raw) {
  FormPtr f(raw);
  return finish(o, {f.get()});
}

int cmd_staircase(const Options& o) {
  auto t = load_single(o);
  const auto b = options_of(o);
  bt_form* f = nullptr;
  check(bt_staircase(t.get(), &b, &f));
  return run_single(o, f);
}

int cmd_tridiag(const Options& o) {
  auto t = load_single(o);
  auto s = schedule_of(o, bt_matrix_rows(t.get()));
  const auto b = options_of(o);
  bt_form* f = nullptr;
  check(bt_block_tridiagonalize(t.get(), s.get(), &b, &f));
  return run_single(o, f);
}

int cmd_polar(const Options& o) {
  auto t = load_single(o);
  auto s = schedule_of(o, bt_matrix_rows(t.get()));
  const auto b = options_of(o);
  bt_form* f = nullptr;
  check(bt_polar_sparsify(t.get(), s.get(), o.alt ? 1 : 0, &b, &f));
  return run_single(o, f);
}

int cmd_trisparse(const Options& o) {
  auto t = load_single(o);
  const auto b = options_of(o);
  bt_form* f = nullptr;
  check(bt_tri_sparsify(t.get(), o.alt ? 1 : 0, &b, &f));
  return run_single(o, f);
}

int cmd_cyclic(const Options& o, bool joint) {
  auto t = load_single(o);
  const auto v = seed_vector_of(o.seed_vector, bt_matrix_rows(t.get()));
  const auto b = options_of(o);
  bt_form* f = nullptr;
  check(joint ? bt_joint_cyclic(t.get(), v.data(), &b, &f) : bt_krylov_hessenberg(t.get(), v.data(), &b, &f));
  return run_single(o, f);
}

int cmd_family(const Options& o) {
  if (o.inputs.empty()) throw UsageError("family needs at least one --input");
  std::vector<MatrixPtr> owned;
  std::vector<const bt_matrix*> ops;
  for (const auto& path : o.inputs) {
    owned.push_back(load(o, path));
    ops.push_back(owned.back().get());
  }
  const auto b = options_of(o);
  std::vector<bt_form*> raw(ops.size(), nullptr);
  check(bt_family_staircase(ops.data(), ops.size(), o.selfadjoint ? 1 : 0, &b, raw.data()));
  std::vector<FormPtr> forms;
  std::vector<const bt_form*> view;
  for (bt_form* f : raw) {
    forms.emplace_back(f);
    view.push_back(f);
  }
  return finish(o, view);
}

int cmd_decompose(const Options& o) {
  auto t = load_single(o);
  const auto b = options_of(o);
  bt_form* raw = nullptr;
  check(bt_decompose(t.get(), &b, &raw));
  FormPtr f(raw);
  const std::size_t count = bt_form_summand_count(f.get());
  if (!o.output.empty()) {
    write_form(o, f.get(), "");
    for (std::size_t k = 0; k < count; ++k) {
      bt_form* s = nullptr;
      check(bt_form_summand(f.get(), k, &s));
      FormPtr summand(s);
      write_form(o, summand.get(), "summand" + std::to_string(k + 1) + "_");
    }
  }
  if (o.report == "json") {
    std::cout << report_json(f.get()) << '\n';
  } else {
    print_summary("decompose", f.get());
    std::cout << "summands: " << count << " (dims";
    for (std::size_t k = 0; k < count; ++k) {
      bt_form* s = nullptr;
      check(bt_form_summand(f.get(), k, &s));
      FormPtr summand(s);
      std::cout << ' ' << bt_form_dim(summand.get());
    }
    std::cout << ")\n";
  }
  return bt_form_passing(f.get()) ? kExitPass : kExitFail;
}

int cmd_schedule(const Options& o) {
  auto s = schedule_of(o, o.dim);
  std::size_t k = 0;
  check(bt_schedule_validate(s.get(), kind_of(o.kind), &k));
  char* text = nullptr;
  check(bt_schedule_to_string(s.get(), &text));
  StringPtr owned(text);
  if (k == 0) {
    std::cout << "schedule " << text << ": valid (" << o.kind << ")\n";
    return kExitPass;
  }
  std::cout << "schedule " << text << ": invalid (" << o.kind << "), violation at k=" << k << '\n';
  return kExitFail;
}

int cmd_verify(const Options& o) {
  if (o.pattern.empty()) throw UsageError("verify needs --pattern");
  if (o.inputs.size() != 1) throw UsageError("exactly one --input is required");
  bt_matrix* raw = nullptr;
  check(bt_matrix_read(o.inputs.front().c_str(), format_of(o, o.inputs.front()).c_str(), &raw));
  MatrixPtr m(raw);
  SchedulePtr s;
  if (o.schedule_given) s = schedule_of(o, bt_matrix_rows(m.get()));
  int passing = 0;
  char* json = nullptr;
  check(bt_verify(m.get(), o.pattern.c_str(), s.get(), threshold_of(o), &passing, &json));
  StringPtr owned(json);
  if (o.report == "json") std::cout << json << '\n';
  else std::cout << "verify " << o.pattern << ": " << (passing ? "PASS" : "FAIL") << '\n';
  return passing ? kExitPass : kExitFail;
}

int cmd_render(const Options& o) {
  auto m = load_single(o);
  SchedulePtr s;
  if (o.schedule_given) s = schedule_of(o, bt_matrix_rows(m.get()));
  char* text = nullptr;
  if (o.svg) {
    check(bt_render_svg(m.get(), threshold_of(o), s.get(), &text));
    StringPtr owned(text);
    if (o.output.empty()) {
      std::cout << text;
    } else {
      std::filesystem::create_directories(o.output);
      const auto path = std::filesystem::path(o.output) / "M.svg";
      std::ofstream out(path);
      if (!(out << text)) throw UsageError("cannot write '" + path.string() + "'");
    }
  } else {
    check(bt_render_ascii(m.get(), threshold_of(o), s.get(), &text));
    StringPtr owned(text);
    std::cout << text;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unitary-similarity sparsified forms of complex matrices"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub, bool many) {
    auto* opt = sub->add_option("--input", o.inputs, many ? "Input matrix files" : "Input matrix file")->required();
    if (!many) opt->expected(1);
    sub->add_option("--format", o.format, "Input format: mm, csv or json (default: by extension)")
        ->check(CLI::IsMember({"mm", "mm-coord", "csv", "json"}));
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol-dep", o.tol_dep, "Gram-Schmidt dependence tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--threshold", o.threshold, "Pattern zero threshold")->check(CLI::PositiveNumber);
    sub->add_option("--output", o.output, "Directory for M, U, report.json");
    sub->add_option("--report", o.report, "Print the full report")->check(CLI::IsMember({"json"}));
    sub->add_flag("--svg", o.svg, "Also write an SVG of the sparsity pattern");
  };
  auto add_schedule = [&](CLI::App* sub) {
    sub->add_option("--schedule", o.schedule, "canonical, cyclic or custom:1,2,6,...");
    sub->add_option("--kind", o.kind, "Kind for custom schedules")->check(CLI::IsMember({"general", "cyclic"}));
  };

  auto* staircase = app.add_subcommand("staircase", "Staircase form");
  add_input(staircase, false);
  add_common(staircase);

  auto* tridiag = app.add_subcommand("tridiag", "Block tridiagonal form");
  add_input(tridiag, false);
  add_common(tridiag);
  add_schedule(tridiag);

  auto* polar = app.add_subcommand("polar", "Polar-sparsified block tridiagonal form");
  add_input(polar, false);
  add_common(polar);
  add_schedule(polar);
  polar->add_flag("--alt", o.alt, "Sparsify the subdiagonal blocks instead");

  auto* trisparse = app.add_subcommand("trisparse", "Triangular-sparsified block tridiagonal form");
  add_input(trisparse, false);
  add_common(trisparse);
  trisparse->add_flag("--alt", o.alt, "Mirror-image variant");

  auto* hessenberg = app.add_subcommand("hessenberg", "Upper Hessenberg form from a start vector");
  add_input(hessenberg, false);
  add_common(hessenberg);
  hessenberg->add_option("--seed-vector", o.seed_vector, "k (1-based e_k) or random:SEED");

  auto* jointcyclic = app.add_subcommand("jointcyclic", "Joint-cyclic staircase from a start vector");
  add_input(jointcyclic, false);
  add_common(jointcyclic);
  jointcyclic->add_option("--seed-vector", o.seed_vector, "k (1-based e_k) or random:SEED");

  auto* family = app.add_subcommand("family", "Simultaneous staircase form of a family");
  add_input(family, true);
  add_common(family);
  family->add_flag("--selfadjoint", o.selfadjoint, "Family of selfadjoint operators");

  auto* decompose = app.add_subcommand("decompose", "Direct sum of joint-cyclic summands");
  add_input(decompose, false);
  add_common(decompose);

  auto* schedule = app.add_subcommand("schedule", "Validate a block schedule");
  schedule->add_option("--schedule", o.schedule, "canonical, cyclic or custom:1,2,6,...")->required();
  schedule->add_option("--kind", o.kind, "general or cyclic")->check(CLI::IsMember({"general", "cyclic"}));
  schedule->add_option("--dim", o.dim, "Dimension (needed for canonical and cyclic)");

  auto* verify = app.add_subcommand("verify", "Check a matrix against a sparsity pattern");
  add_input(verify, false);
  verify->add_option("--pattern", o.pattern, "staircase, staircase-refined, jointcyclic, hessenberg, "
                                             "family:S, band, polar, polar-alt, tri, tri-alt")
      ->required();
  auto* verify_schedule = verify->add_option("--schedule", o.schedule, "Schedule for block patterns");
  verify->add_option("--kind", o.kind, "Kind for custom schedules")->check(CLI::IsMember({"general", "cyclic"}));
  verify->add_option("--threshold", o.threshold, "Pattern zero threshold")->check(CLI::PositiveNumber);
  verify->add_option("--report", o.report, "Print the full report")->check(CLI::IsMember({"json"}));

  auto* render = app.add_subcommand("render", "Render the sparsity pattern (ASCII, or SVG with --svg)");
  add_input(render, false);
  auto* render_schedule = render->add_option("--schedule", o.schedule, "Schedule for gridlines");
  render->add_option("--kind", o.kind, "Kind for custom schedules")->check(CLI::IsMember({"general", "cyclic"}));
  render->add_option("--threshold", o.threshold, "Pattern zero threshold")->check(CLI::PositiveNumber);
  render->add_flag("--svg", o.svg, "Emit SVG instead of ASCII");
  render->add_option("--output", o.output, "Directory for M.svg (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    o.schedule_given = verify_schedule->count() > 0 || render_schedule->count() > 0;
    if (staircase->parsed()) return cmd_staircase(o);
    if (tridiag->parsed()) return cmd_tridiag(o);
    if (polar->parsed()) return cmd_polar(o);
    if (trisparse->parsed()) return cmd_trisparse(o);
    if (hessenberg->parsed()) return cmd_cyclic(o, false);
    if (jointcyclic->parsed()) return cmd_cyclic(o, true);
    if (family->parsed()) return cmd_family(o);
    if (decompose->parsed()) return cmd_decompose(o);
    if (schedule->parsed()) return cmd_schedule(o);
    if (verify->parsed()) return cmd_verify(o);
    if (render->parsed()) return cmd_render(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::cerr << app.help();
  return kExitUsage;
}
