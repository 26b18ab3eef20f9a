#include "expdec/io.hpp"

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace expdec::io {

namespace fs = std::filesystem;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string resolve(const std::string& base_file, const std::string& rel) {
  fs::path p(rel);
  if (p.is_absolute()) return rel;
  return (fs::path(base_file).parent_path() / p).string();
}

}  // namespace

json code_to_json(const LinearCode& code) {
  json j;
  j["q"] = code.field().q();
  j["n"] = code.n();
  j["k"] = code.k();
  std::vector<std::vector<std::uint32_t>> gen(code.k(), std::vector<std::uint32_t>(code.n()));
  for (int i = 0; i < code.k(); ++i)
    for (int c = 0; c < code.n(); ++c) gen[i][c] = code.generator().at(i, c);
  j["generator"] = gen;
  const FMatrix& H = code.parity_check();
  std::vector<std::vector<std::uint32_t>> par(H.rows(), std::vector<std::uint32_t>(H.cols()));
  for (int i = 0; i < H.rows(); ++i)
    for (int c = 0; c < H.cols(); ++c) par[i][c] = H.at(i, c);
  j["paritycheck"] = par;
  if (code.is_reed_solomon()) j["rs"] = true;
  return j;
}

LinearCode code_from_json(const json& j) {
  Field f = Field::of_order(j.at("q").get<std::uint32_t>());
  int n = j.at("n").get<int>(), k = j.at("k").get<int>();
  auto gen = j.at("generator").get<std::vector<std::vector<std::uint32_t>>>();
  if (static_cast<int>(gen.size()) != k)
    throw std::runtime_error("code json: generator row count != k");
  FMatrix G(f, k, n);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(gen[i].size()) != n)
      throw std::runtime_error("code json: generator column count != n");
    for (int c = 0; c < n; ++c) G.at(i, c) = gen[i][c];
  }
  LinearCode code(f, std::move(G));
  if (j.contains("paritycheck")) {
    auto par = j.at("paritycheck").get<std::vector<std::vector<std::uint32_t>>>();
    for (const auto& row : par) {
      if (static_cast<int>(row.size()) != n)
        throw std::runtime_error("code json: paritycheck shape");
      for (int gi = 0; gi < k; ++gi) {
        std::uint32_t acc = 0;
        for (int c = 0; c < n; ++c)
          acc = f.add(acc, f.mul(row[c], code.generator().at(gi, c)));
        if (acc != 0) throw std::runtime_error("code json: G H^T != 0");
      }
    }
  }
  if (j.value("rs", false)) code.set_reed_solomon(true);
  return code;
}

json graph_to_json(const BipartiteExpander& g) {
  json j;
  j["n"] = g.n();
  j["d"] = g.d();
  std::vector<std::vector<int>> edges;
  for (auto [l, r] : g.edges()) edges.push_back({l, r});
  j["edges"] = edges;
  std::vector<std::vector<int>> lo, ro;
  for (int v = 0; v < g.n(); ++v) {
    lo.push_back(g.left_edges(v));
    ro.push_back(g.right_edges(v));
  }
  j["left_order"] = lo;
  j["right_order"] = ro;
  if (g.lambda_exact()) j["lambda_exact"] = g.lambda_exact()->str();
  j["lambda"] = g.lambda();
  return j;
}

BipartiteExpander graph_from_json(const json& j) {
  int n = j.at("n").get<int>(), d = j.at("d").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  BipartiteExpander g = BipartiteExpander::from_edges(n, d, std::move(edges));
  if (j.contains("left_order")) {
    auto lo = j.at("left_order").get<std::vector<std::vector<int>>>();
    auto ro = j.at("right_order").get<std::vector<std::vector<int>>>();
    for (int v = 0; v < n; ++v)
      if (lo[v] != g.left_edges(v) || ro[v] != g.right_edges(v))
        throw std::runtime_error("graph json: edge order tables inconsistent with edge list");
  }
  if (j.contains("lambda_exact")) g.set_lambda_exact(Rat::parse(j.at("lambda_exact").get<std::string>()));
  return g;
}

void save_code(const std::string& path, const LinearCode& code) {
  write_json(path, code_to_json(code));
}
LinearCode load_code(const std::string& path) { return code_from_json(read_json(path)); }
void save_graph(const std::string& path, const BipartiteExpander& g) {
  write_json(path, graph_to_json(g));
}
BipartiteExpander load_graph(const std::string& path) { return graph_from_json(read_json(path)); }

void save_tanner(const std::string& path, const std::string& graph_path,
                 const std::string& inner_path) {
  json j;
  j["kind"] = "tanner";
  j["graph"] = graph_path;
  j["inner"] = inner_path;
  write_json(path, j);
}

TannerCode load_tanner(const std::string& path) {
  json j = read_json(path);
  if (j.at("kind") != "tanner") throw std::runtime_error("not a tanner descriptor");
  return TannerCode(load_graph(resolve(path, j.at("graph"))),
                    load_code(resolve(path, j.at("inner"))));
}

void save_ael(const std::string& path, const std::string& graph_path,
              const std::string& inner_path, const std::string& outer_path) {
  json j;
  j["kind"] = "ael";
  j["graph"] = graph_path;
  j["inner"] = inner_path;
  j["outer"] = outer_path;
  write_json(path, j);
}

AELCode load_ael(const std::string& path) {
  json j = read_json(path);
  if (j.at("kind") != "ael") throw std::runtime_error("not an ael descriptor");
  return AELCode(load_graph(resolve(path, j.at("graph"))),
                 load_code(resolve(path, j.at("inner"))),
                 load_code(resolve(path, j.at("outer"))));
}

void save_concat(const std::string& path, const std::string& inner_path,
                 const std::string& outer_path) {
  json j;
  j["kind"] = "concat";
  j["inner"] = inner_path;
  j["outer"] = outer_path;
  write_json(path, j);
}

ConcatCode load_concat(const std::string& path) {
  json j = read_json(path);
  if (j.at("kind") != "concat") throw std::runtime_error("not a concat descriptor");
  return ConcatCode(load_code(resolve(path, j.at("inner"))),
                    load_code(resolve(path, j.at("outer"))));
}

std::string code_kind(const std::string& path) {
  json j = read_json(path);
  if (j.contains("kind")) return j.at("kind").get<std::string>();
  return "linear";
}

std::vector<Word> load_words(const std::string& path, std::uint64_t q) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Word> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::uint64_t> syms;
    std::uint64_t v;
    while (ls >> v) syms.push_back(v);
    if (!syms.empty()) out.emplace_back(q, std::move(syms));
  }
  return out;
}

void save_words(const std::string& path, const std::vector<Word>& words) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const Word& w : words) {
    for (std::size_t i = 0; i < w.size(); ++i) out << (i ? " " : "") << w[i];
    out << '\n';
  }
}

std::vector<std::vector<double>> load_weights_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

json list_to_json(const DecodingList& list, const json& config) {
  json j;
  j["list"] = json::array();
  for (const auto& e : list.entries) {
    json item;
    item["word"] = e.word.s;
    item["distance"] = e.distance.str();
    j["list"].push_back(item);
  }
  json st;
  st["psi"] = list.stats.psi;
  st["margin"] = list.stats.margin;
  st["eta_hat"] = list.stats.eta_hat_best;
  st["branches"] = list.stats.branches;
  st["solver_iters"] = list.stats.solver_iters;
  st["residuals"] = {list.stats.primal_residual, list.stats.dual_residual};
  st["note"] = list.stats.note;
  st["checks_ok"] = list.stats.checks.all_ok();
  j["stats"] = st;
  j["config"] = config;
  return j;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i)
      h = (h ^ static_cast<unsigned char>(buf[i])) * 1099511628211ull;
    if (!in) break;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json manifest(const std::string& command, const json& config,
              const std::vector<std::string>& input_paths) {
  json j;
  j["command"] = command;
  j["version"] = "expdec 0.1.0";
  std::uint64_t h = 1469598103934665603ull;
  std::string cfg = config.dump();
  for (unsigned char c : cfg) h = (h ^ c) * 1099511628211ull;
  std::ostringstream os;
  os << std::hex << h;
  j["config_hash"] = os.str();
  j["config"] = config;
  json inputs = json::object();
  for (const auto& p : input_paths) inputs[p] = file_digest(p);
  j["inputs"] = inputs;
  return j;
}

}  // namespace expdec::io
