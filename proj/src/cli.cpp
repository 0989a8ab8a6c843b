#include "imp/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "imp/frontend.hpp"
#include "imp/fuzz.hpp"
#include "imp/hoare.hpp"
#include "imp/mips.hpp"
#include "imp/optimizer.hpp"
#include "imp/stack_machine.hpp"
#include "imp/typecheck.hpp"

namespace imp::cli {

namespace {

// A failure with its exit code and a fully rendered diagnostic.
struct Failure {
  int code;
  std::string message;
};

struct Config {
  std::string input;
  std::string backend = "stack";
  std::string engine = "bigstep";
  std::string regalloc = "su";
  bool emulate_mul = false;
  int opt_level = 0;
  Fuel fuel = 100'000;
  std::uint64_t budget = 10'000'000;
  std::string store_in;
  std::string output;
  std::string pre = "true";
  std::string post;
  std::string smt2_dir;
  std::int64_t bounded = 0;
  std::uint64_t seed = 0;
  std::size_t count = 100;
  std::string engines;
  bool typed = false;
  bool fail_fast = false;
  int depth = 3;
  int loop_bound = 4;
};

std::string diagnostic(const std::string &file, const SourcePos &pos, const std::string &msg) {
  if (pos.valid())
    return file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": error: " + msg;
  return file + ": error: " + msg;
}

Failure user_error(const std::string &file, const std::string &msg) {
  return {kUserError, diagnostic(file, {}, msg)};
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw user_error(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `f`, turning toolchain errors into diagnostics located in `file`.
template <class F>
auto located(const std::string &file, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error &e) {
    throw Failure{kUserError, diagnostic(file, e.pos(), e.what())};
  }
}

Program load_program(const Config &cfg) {
  std::string src = read_file(cfg.input);
  Program p = located(cfg.input, [&] { return parse_program(src); });
  if (p.typed()) located(cfg.input, [&] { return typecheck(p); });
  return located(cfg.input, [&] { return opt::optimize(p, cfg.opt_level); });
}

void write_output(const Config &cfg, const std::string &text, std::ostream &out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw user_error(cfg.output, "cannot write file");
  f << text;
}

void check_level(int level) {
  if (level < 0 || level > 2) throw user_error("cimp", "-O expects 0, 1 or 2");
}

// Every variable the program mentions plus the initial bindings.
std::set<std::string> reported_names(const Program &p, const std::vector<std::string> &extra) {
  std::set<std::string> names = free_vars(p);
  for (const auto &d : p.decls) names.insert(d.name);
  names.insert(extra.begin(), extra.end());
  return names;
}

std::string show_store(const Program &p, const Store &initial, const Store &final_store) {
  std::vector<std::string> extra;
  for (const auto &[k, v] : initial.bindings()) extra.push_back(k);
  std::string out;
  for (const auto &n : reported_names(p, extra)) out += n + "=" + to_string(final_store.get(n)) + "\n";
  return out;
}

std::string show_words(const Program &p, const TypeEnv &env, const Store32 &initial,
                       const Store32 &final_store) {
  std::vector<std::string> extra;
  for (const auto &[k, v] : initial) extra.push_back(k);
  std::string out;
  for (const auto &n : reported_names(p, extra)) {
    auto it = final_store.find(n);
    auto t = env.find(n);
    out += n + "=" + render(it == final_store.end() ? 0u : it->second, t == env.end() ? Ty::I32 : t->second) +
           "\n";
  }
  return out;
}

int cmd_compile(const Config &cfg, std::ostream &out) {
  check_level(cfg.opt_level);
  if (cfg.backend != "stack" && cfg.backend != "mips")
    throw user_error("cimp", "unknown backend '" + cfg.backend + "'");
  Program p = load_program(cfg);
  if (cfg.backend == "stack") {
    if (p.typed()) throw user_error(cfg.input, "the stack backend only accepts untyped programs");
    stack::Code code = located(cfg.input, [&] { return stack::compile_program(p); });
    write_output(cfg, stack::listing(code), out);
    return kSuccess;
  }
  mips::CodegenOptions opts;
  opts.strategy = cfg.regalloc == "naive" ? mips::Strategy::Naive : mips::Strategy::RegAlloc;
  opts.emulate_mul = cfg.emulate_mul;
  mips::MipsProgram prog = located(cfg.input, [&] { return mips::codegen(p, opts); });
  write_output(cfg, mips::emit_asm(prog), out);
  return kSuccess;
}

int cmd_run(const Config &cfg, std::ostream &out) {
  check_level(cfg.opt_level);
  static const std::set<std::string> engines{"bigstep", "smallstep", "stackvm", "mips"};
  if (!engines.count(cfg.engine)) throw user_error("cimp", "unknown engine '" + cfg.engine + "'");
  Program p = load_program(cfg);
  Store initial;
  if (!cfg.store_in.empty()) {
    std::string text = read_file(cfg.store_in);
    initial = located(cfg.store_in, [&] { return parse_store(text); });
  }

  if (p.typed() || cfg.engine == "mips") {
    if (cfg.engine == "smallstep" || cfg.engine == "stackvm")
      throw user_error(cfg.input, "engine '" + cfg.engine + "' only runs untyped programs");
    TypedProgram tp = located(cfg.input, [&] { return p.typed() ? typecheck(p) : typecheck(p, default_env(p)); });
    Store32 words = inject(initial);
    if (cfg.engine == "bigstep") {
      Outcome32 o = ceval_fixed(cfg.fuel, tp.program.body, words);
      if (std::holds_alternative<OutOfFuel>(o)) {
        out << "OutOfFuel\n";
        return kSuccess;
      }
      out << show_words(p, tp.env, words, std::get<Done32>(o).store);
      return kSuccess;
    }
    mips::MipsProgram prog =
        located(cfg.input, [&] { return mips::codegen(p, {mips::Strategy::RegAlloc, true}); });
    mips::SimOutcome o = mips::simulate(prog, words, cfg.budget);
    if (const auto *t = std::get_if<mips::Trap>(&o))
      throw Failure{kInternalError, diagnostic(cfg.input, {}, "simulator trap: " + t->reason)};
    if (std::holds_alternative<mips::BudgetExhausted>(o)) {
      out << "OutOfFuel\n";
      return kSuccess;
    }
    Store32 final_words = words;
    for (const auto &[k, w] : std::get<mips::Halted>(o).vars) final_words[k] = w;
    out << show_words(p, tp.env, words, final_words);
    return kSuccess;
  }

  Outcome o = OutOfFuel{};
  if (cfg.engine == "bigstep") {
    o = located(cfg.input, [&] { return ceval_fuel(cfg.fuel, p.body, initial); });
  } else if (cfg.engine == "smallstep") {
    o = located(cfg.input, [&] { return run_small(cfg.budget, p.body, initial); });
  } else {
    stack::Code code = located(cfg.input, [&] { return stack::compile_program(p); });
    stack::VmOutcome v = stack::vm_exec(cfg.budget, code, initial);
    if (const auto *e = std::get_if<stack::MachineError>(&v))
      throw Failure{kInternalError, diagnostic(cfg.input, {}, "machine error at pc " + std::to_string(e->pc) +
                                                                  ": " + e->reason)};
    if (const auto *d = std::get_if<Done>(&v)) o = *d;
  }
  if (!is_done(o)) {
    out << "OutOfFuel\n";
    return kSuccess;
  }
  out << show_store(p, initial, std::get<Done>(o).store);
  return kSuccess;
}

// Feeds a script to the solver named by CIMP_SMT_SOLVER and returns its first line.
std::string run_solver(const std::string &solver, const std::string &path) {
  std::string cmd = solver + " '" + path + "' 2>&1";
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "error";
  char buf[256];
  std::string line;
  if (fgets(buf, sizeof buf, pipe)) line = buf;
  pclose(pipe);
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  return line;
}

int cmd_vc(const Config &cfg, std::ostream &out) {
  if (cfg.smt2_dir.empty() == (cfg.bounded <= 0))
    throw user_error("cimp", "vc needs exactly one of --smt2 DIR or --bounded-check B (B >= 1)");
  Program p = load_program(cfg);
  hoare::HoareTriple t;
  t.com = p.body;
  t.pre = located("<pre>", [&] { return parse_assertion(cfg.pre); });
  t.post = located("<post>", [&] { return parse_assertion(cfg.post); });
  auto vcs = located(cfg.input, [&] { return hoare::vcgen(t); });

  if (!cfg.smt2_dir.empty()) {
    std::filesystem::create_directories(cfg.smt2_dir);
    const char *solver = std::getenv("CIMP_SMT_SOLVER");
    int code = kSuccess;
    for (std::size_t i = 0; i < vcs.size(); ++i) {
      std::string name = "vc_" + std::to_string(i) + "_" + std::string(hoare::to_string(vcs[i].origin));
      auto path = std::filesystem::path(cfg.smt2_dir) / (name + ".smt2");
      std::ofstream f(path, std::ios::binary);
      if (!f) throw user_error(path.string(), "cannot write file");
      f << hoare::emit_smtlib(vcs[i]);
      f.close();
      out << path.string();
      if (solver && *solver) {
        std::string verdict = run_solver(solver, path.string());
        out << ": " << verdict;
        if (verdict != "unsat") code = kUserError;
      }
      out << "\n";
    }
    return code;
  }

  int code = kSuccess;
  for (std::size_t i = 0; i < vcs.size(); ++i) {
    auto r = located(cfg.input, [&] { return hoare::bounded_check(vcs[i], cfg.bounded); });
    out << "vc " << i << " " << hoare::to_string(vcs[i].origin) << ": " << pretty(vcs[i].formula) << "\n";
    if (std::holds_alternative<hoare::Valid>(r)) {
      out << "  valid on [-" << cfg.bounded << ", " << cfg.bounded << "]\n";
      continue;
    }
    code = kUserError;
    out << "  counterexample:";
    for (const auto &[k, v] : std::get<hoare::Counterexample>(r).store.bindings())
      out << " " << k << "=" << to_string(v);
    out << "\n";
  }
  return code;
}

int cmd_typecheck(const Config &cfg, std::ostream &out) {
  std::string src = read_file(cfg.input);
  Program p = located(cfg.input, [&] { return parse_program(src); });
  TypedProgram tp = located(cfg.input, [&] { return p.typed() ? typecheck(p) : typecheck(p, default_env(p)); });
  for (const auto &[name, ty] : tp.env) out << name << ": " << to_string(ty) << "\n";
  return kSuccess;
}

int cmd_fuzz(const Config &cfg, std::ostream &out) {
  fuzz::GenSpec spec;
  spec.seed = cfg.seed;
  spec.typed = cfg.typed;
  spec.max_depth = cfg.depth;
  spec.max_loop_bound = cfg.loop_bound;
  if (spec.max_depth < 1) throw user_error("cimp", "--depth must be at least 1");
  if (spec.max_loop_bound < 0) throw user_error("cimp", "--loop-bound must not be negative");

  std::vector<std::string> names;
  if (cfg.engines.empty()) {
    names = fuzz::engine_names(cfg.typed);
  } else {
    std::stringstream ss(cfg.engines);
    for (std::string n; std::getline(ss, n, ',');)
      if (!n.empty()) names.push_back(n);
  }
  if (names.empty()) throw user_error("cimp", "--engines names no engine");
  if (cfg.typed && names.front() != "bigstep") names.insert(names.begin(), "bigstep");
  std::vector<fuzz::Engine> engines;
  for (const auto &n : names) {
    try {
      engines.push_back(fuzz::make_engine(n, cfg.typed));
    } catch (const std::invalid_argument &e) {
      throw user_error("cimp", e.what());
    }
  }
  fuzz::DiffReport report = fuzz::run_diff(spec, cfg.count, engines, cfg.fail_fast);
  out << report.summary();
  return report.divergences == 0 ? kSuccess : kInternalError;
}

int cmd_bench(const Config &cfg, std::ostream &out) {
  std::string src = read_file(cfg.input);
  Program p = located(cfg.input, [&] { return parse_program(src); });
  if (p.typed()) located(cfg.input, [&] { return typecheck(p); });
  out << "level  ast-nodes  stack-instrs  mips-naive  mips-su\n";
  for (int level = 0; level <= 2; ++level) {
    Program q = located(cfg.input, [&] { return opt::optimize(p, level); });
    std::string stack_size = "-";
    if (!q.typed()) stack_size = std::to_string(stack::compile_program(q).size());
    auto mips_size = [&](mips::Strategy s) {
      return std::to_string(mips::instruction_count(located(cfg.input, [&] {
        return mips::codegen(q, {s, cfg.emulate_mul});
      })));
    };
    out << "-O" << level << "    " << node_count(q.body) << "  " << stack_size << "  "
        << mips_size(mips::Strategy::Naive) << "  " << mips_size(mips::Strategy::RegAlloc) << "\n";
  }
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Config cfg;
  CLI::App app{"cimp: compiler toolchain for the imp language", "cimp"};
  app.require_subcommand(1);

  auto *compile = app.add_subcommand("compile", "compile a program to stack code or MIPS assembly");
  compile->add_option("FILE", cfg.input)->required();
  compile->add_option("--backend", cfg.backend)->check(CLI::IsMember({"stack", "mips"}));
  compile->add_option("--regalloc", cfg.regalloc)->check(CLI::IsMember({"naive", "su"}));
  compile->add_flag("--emulate-mul", cfg.emulate_mul);
  compile->add_option("-O", cfg.opt_level);
  compile->add_option("-o", cfg.output);

  auto *run = app.add_subcommand("run", "execute a program and print the final store");
  run->add_option("FILE", cfg.input)->required();
  run->add_option("--engine", cfg.engine)->check(CLI::IsMember({"bigstep", "smallstep", "stackvm", "mips"}));
  run->add_option("--fuel", cfg.fuel);
  run->add_option("--budget", cfg.budget);
  run->add_option("--store-in", cfg.store_in);
  run->add_option("-O", cfg.opt_level);

  auto *vc = app.add_subcommand("vc", "generate verification conditions");
  vc->add_option("FILE", cfg.input)->required();
  vc->add_option("--post", cfg.post)->required();
  vc->add_option("--pre", cfg.pre);
  vc->add_option("--smt2", cfg.smt2_dir);
  vc->add_option("--bounded-check", cfg.bounded);

  auto *tc = app.add_subcommand("typecheck", "type check a program");
  tc->add_option("FILE", cfg.input)->required();

  auto *fz = app.add_subcommand("fuzz", "differential testing over generated programs");
  fz->add_option("--seed", cfg.seed);
  fz->add_option("--count", cfg.count);
  fz->add_option("--engines", cfg.engines);
  fz->add_flag("--typed", cfg.typed);
  fz->add_flag("--fail-fast", cfg.fail_fast);
  fz->add_option("--depth", cfg.depth);
  fz->add_option("--loop-bound", cfg.loop_bound);

  auto *bench = app.add_subcommand("bench", "code size at each optimization level");
  bench->add_option("FILE", cfg.input)->required();
  bench->add_flag("--emulate-mul", cfg.emulate_mul);

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::Success &) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError &e) {
    err << "cimp: error: " << e.what() << "\n";
    return kUserError;
  }

  try {
    if (*compile) return cmd_compile(cfg, out);
    if (*run) return cmd_run(cfg, out);
    if (*vc) return cmd_vc(cfg, out);
    if (*tc) return cmd_typecheck(cfg, out);
    if (*fz) return cmd_fuzz(cfg, out);
    if (*bench) return cmd_bench(cfg, out);
  } catch (const Failure &f) {
    err << f.message << "\n";
    return f.code;
  } catch (const std::exception &e) {
    err << (cfg.input.empty() ? "cimp" : cfg.input) << ": error: internal: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace imp::cli
