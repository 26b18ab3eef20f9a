// expdec: construct expander-based codes, corrupt codewords, and run the
// unique/list decoders. All randomness sits behind explicit --seed flags;
// identical invocations produce byte-identical outputs.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>

#include "expdec/covering.hpp"
#include "expdec/io.hpp"
#include "expdec/pipelines.hpp"
#include "expdec/selfcheck.hpp"

using namespace expdec;
using nlohmann::json;

namespace {

int log_level() {
  const char* v = std::getenv("EXPDEC_LOG");
  if (!v) return 1;
  std::string s(v);
  if (s == "error") return 0;
  if (s == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[expdec] " << msg << '\n';
}

constexpr int kExitOk = 0;
constexpr int kExitDecodeEmpty = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitSolverFailed = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expander-code list decoding toolkit"};
  app.require_subcommand(1);

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "construct a bipartite d-regular graph");
  std::string g_kind = "random_regular", g_out;
  int g_n = 8, g_d = 3;
  std::uint64_t g_seed = 0;
  gen->add_option("--kind", g_kind, "complete | cycle | random_regular");
  gen->add_option("--n", g_n);
  gen->add_option("--d", g_d);
  gen->add_option("--seed", g_seed);
  gen->add_option("--out", g_out)->required();

  // build-code
  auto* build = app.add_subcommand("build-code", "build a code descriptor");
  std::string b_kind, b_graph, b_inner, b_outer, b_out;
  std::uint32_t b_q = 2;
  int b_n = 0, b_k = 0;
  build->add_option("kind", b_kind, "tanner | ael | concat | rs")->required();
  build->add_option("--graph", b_graph);
  build->add_option("--inner", b_inner);
  build->add_option("--outer", b_outer);
  build->add_option("--q", b_q);
  build->add_option("--n", b_n);
  build->add_option("--k", b_k);
  build->add_option("--out", b_out)->required();

  // encode
  auto* enc = app.add_subcommand("encode", "encode messages through a code descriptor");
  std::string e_code, e_msg, e_out;
  enc->add_option("--code", e_code)->required();
  enc->add_option("--message", e_msg)->required();
  enc->add_option("--out", e_out)->required();

  // corrupt
  auto* cor = app.add_subcommand("corrupt", "flip a fixed number of symbols");
  std::string c_word, c_out;
  int c_errors = 1;
  std::uint64_t c_seed = 0, c_q = 2;
  cor->add_option("--word", c_word)->required();
  cor->add_option("--errors", c_errors);
  cor->add_option("--seed", c_seed);
  cor->add_option("--q", c_q)->required();
  cor->add_option("--out", c_out)->required();

  // unique-decode
  auto* ud = app.add_subcommand("unique-decode", "decode within the unique radius");
  std::string u_code, u_received, u_out;
  ud->add_option("--code", u_code)->required();
  ud->add_option("--received", u_received)->required();
  ud->add_option("--out", u_out)->required();

  // list-decode
  auto* ld = app.add_subcommand("list-decode", "list decode up to the Johnson bound");
  std::string l_kind, l_code, l_received, l_out;
  double l_eps = 0.05, l_delta_dec = 0, l_kappa = 0, l_eta = 0;
  int l_kmax = 0, l_jobs = 1;
  std::uint64_t l_seed = 0;
  bool l_no_checks = false;
  ld->add_option("--kind", l_kind, "tanner | ael | concat")->required();
  ld->add_option("--code", l_code)->required();
  ld->add_option("--received", l_received)->required();
  ld->add_option("--eps", l_eps);
  ld->add_option("--k-max", l_kmax);
  ld->add_option("--eta", l_eta);
  ld->add_option("--delta-dec", l_delta_dec);
  ld->add_option("--kappa", l_kappa);
  ld->add_option("--seed", l_seed);
  ld->add_option("--jobs", l_jobs);
  ld->add_flag("--no-runtime-checks", l_no_checks);
  ld->add_option("--out", l_out)->required();

  // johnson
  auto* jn = app.add_subcommand("johnson", "Johnson bound calculator");
  std::uint64_t j_q = 2;
  std::string j_delta;
  jn->add_option("--q", j_q)->required();
  jn->add_option("--delta", j_delta, "rational like 4/9")->required();

  // near-mds-params
  auto* nm = app.add_subcommand("near-mds-params", "near-MDS parameter calculator");
  double n_eps1 = 0.125, n_c = 1.0, n_rho0 = 0.5;
  nm->add_option("--eps1", n_eps1)->required();
  nm->add_option("--c", n_c);
  nm->add_option("--rho0", n_rho0);

  // verify
  auto* vf = app.add_subcommand("verify", "run the invariant suites");
  bool v_fast = false;
  vf->add_flag("--fast", v_fast);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      BipartiteExpander g = [&] {
        if (g_kind == "complete") return BipartiteExpander::complete(g_n);
        if (g_kind == "cycle") return BipartiteExpander::cycle(g_n);
        if (g_kind == "random_regular")
          return BipartiteExpander::random_regular(g_n, g_d, g_seed);
        throw std::invalid_argument("unknown graph kind " + g_kind);
      }();
      io::save_graph(g_out, g);
      info("graph written: lambda = " + std::to_string(g.lambda()));
      return kExitOk;
    }

    if (*build) {
      if (b_kind == "rs") {
        io::save_code(b_out, rs_build(Field::of_order(b_q), b_n, b_k));
      } else if (b_kind == "tanner") {
        TannerCode code(io::load_graph(b_graph), io::load_code(b_inner));  // validates
        io::save_tanner(b_out, b_graph, b_inner);
      } else if (b_kind == "ael") {
        AELCode code(io::load_graph(b_graph), io::load_code(b_inner), io::load_code(b_outer));
        io::save_ael(b_out, b_graph, b_inner, b_outer);
      } else if (b_kind == "concat") {
        ConcatCode code(io::load_code(b_inner), io::load_code(b_outer));
        io::save_concat(b_out, b_inner, b_outer);
      } else {
        std::cerr << "unknown code kind " << b_kind << '\n';
        return kExitInvalidInput;
      }
      return kExitOk;
    }

    if (*enc) {
      std::string kind = io::code_kind(e_code);
      std::vector<Word> out;
      if (kind == "linear") {
        LinearCode code = io::load_code(e_code);
        for (const Word& m : io::load_words(e_msg, code.field().q()))
          out.push_back(code.encode(m));
      } else if (kind == "tanner") {
        TannerCode code = io::load_tanner(e_code);
        // messages are coefficient vectors over the enumerated codeword basis
        auto words = code.enumerate();
        for (const Word& m : io::load_words(e_msg, words.size()))
          out.push_back(words.at(m[0]));
      } else if (kind == "ael") {
        AELCode code = io::load_ael(e_code);
        for (const Word& m : io::load_words(e_msg, code.q1()))
          out.push_back(code.encode_folded(code.outer().encode(m)));
      } else if (kind == "concat") {
        ConcatCode code = io::load_concat(e_code);
        for (const Word& m : io::load_words(e_msg, code.q1()))
          out.push_back(code.encode(code.outer().encode(m)));
      }
      io::save_words(e_out, out);
      return kExitOk;
    }

    if (*cor) {
      auto words = io::load_words(c_word, c_q);
      std::mt19937_64 rng(c_seed);
      for (Word& w : words) {
        if (c_errors > static_cast<int>(w.size()))
          throw std::invalid_argument("corrupt: more errors than symbols");
        std::vector<std::size_t> idx(w.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int i = 0; i < c_errors; ++i) {
          std::uint64_t delta = 1 + rng() % (w.q - 1);
          w[idx[i]] = (w[idx[i]] + delta) % w.q;
        }
      }
      io::save_words(c_out, words);
      return kExitOk;
    }

    if (*ud) {
      std::string kind = io::code_kind(u_code);
      std::vector<Word> decoded;
      if (kind == "linear") {
        LinearCode code = io::load_code(u_code);
        for (const Word& w : io::load_words(u_received, code.field().q())) {
          std::optional<Word> dec = code.is_reed_solomon() ? rs_unique_decode(code, w)
                                                           : std::optional<Word>{};
          if (!dec) {
            auto [cand, dist] = code.nearest_codeword(w);
            int t = (code.n() - code.k()) / 2;
            if (!(dist > Rat(t, code.n()))) dec = cand;
          }
          if (!dec) return kExitDecodeEmpty;
          decoded.push_back(*dec);
        }
      } else if (kind == "tanner") {
        TannerCode code = io::load_tanner(u_code);
        for (const Word& w : io::load_words(u_received, code.q())) {
          auto dec = code.zemor_unique_decode(w);
          if (!dec) return kExitDecodeEmpty;
          decoded.push_back(*dec);
        }
      } else if (kind == "ael") {
        AELCode code = io::load_ael(u_code);
        for (const Word& w : io::load_words(u_received, code.folded_alphabet())) {
          auto dec = code.unique_decode(w);
          if (!dec) return kExitDecodeEmpty;
          decoded.push_back(code.encode_folded(*dec));
        }
      } else {
        std::cerr << "unique-decode: unsupported kind " << kind << '\n';
        return kExitInvalidInput;
      }
      io::save_words(u_out, decoded);
      return kExitOk;
    }

    if (*ld) {
      DecodeConfig cfg;
      cfg.eps = l_eps;
      cfg.k_max = l_kmax;
      cfg.eta = l_eta;
      cfg.delta_dec = l_delta_dec;
      cfg.kappa = l_kappa;
      cfg.seed = l_seed;
      cfg.jobs = l_jobs;
      cfg.runtime_checks = !l_no_checks;
      json cfgj = {{"eps", l_eps},   {"k_max", l_kmax},  {"eta", l_eta},
                   {"delta_dec", l_delta_dec}, {"kappa", l_kappa}, {"seed", l_seed}};
      DecodingList list;
      if (l_kind == "tanner") {
        TannerCode code = io::load_tanner(l_code);
        list = list_decode_tanner(code, io::load_words(l_received, code.q()).at(0), cfg);
      } else if (l_kind == "ael") {
        AELCode code = io::load_ael(l_code);
        list = list_decode_ael(code, io::load_words(l_received, code.folded_alphabet()).at(0),
                               cfg);
      } else if (l_kind == "concat") {
        ConcatCode code = io::load_concat(l_code);
        list = list_decode_concat(code, io::load_words(l_received, code.q0()).at(0), cfg);
      } else {
        std::cerr << "unknown list-decode kind " << l_kind << '\n';
        return kExitInvalidInput;
      }
      json j = io::list_to_json(list, cfgj);
      j["manifest"] = io::manifest("list-decode", cfgj, {l_code, l_received});
      std::ofstream out(l_out);
      out << j.dump(2) << '\n';
      if (list.stats.solver_status == SolveStatus::max_iters) return kExitSolverFailed;
      if (list.entries.empty()) return kExitDecodeEmpty;
      return kExitOk;
    }

    if (*jn) {
      JohnsonParams jp = johnson(j_q, Rat::parse(j_delta));
      json j;
      j["delta"] = jp.delta.str();
      j["beta"] = jp.beta.str();
      j["johnson"] = jp.johnson_exact ? jp.johnson_exact->str() : std::to_string(jp.johnson);
      std::cout << j.dump() << '\n';
      return kExitOk;
    }

    if (*nm) {
      NearMdsReport rep = near_mds_params(n_eps1, n_c, n_rho0);
      json j;
      j["eps1"] = rep.eps1;
      j["delta_dec"] = rep.delta_dec;
      j["kappa"] = rep.kappa;
      j["lambda"] = rep.lambda;
      j["d"] = rep.d;
      j["q0"] = rep.q0;
      j["rho0"] = rep.rho0;
      j["rho"] = rep.rho;
      j["alphabet_bits"] = rep.alphabet_bits;
      j["distance_bound"] = rep.distance_bound;
      j["degenerate"] = rep.degenerate;
      std::cout << j.dump() << '\n';
      return kExitOk;
    }

    if (*vf) {
      bool ok = selfcheck::run(!v_fast);
      std::cout << (ok ? "verify: all invariant suites passed"
                       : "verify: FAILURES detected")
                << '\n';
      return ok ? kExitOk : kExitDecodeEmpty;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitOk;
}
