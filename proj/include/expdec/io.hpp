#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "expdec/code.hpp"
#include "expdec/graph.hpp"
#include "expdec/graph_codes.hpp"
#include "expdec/pipelines.hpp"

namespace expdec::io {

using nlohmann::json;

json code_to_json(const LinearCode& code);
LinearCode code_from_json(const json& j);

json graph_to_json(const BipartiteExpander& g);
BipartiteExpander graph_from_json(const json& j);

// code descriptors reference component files by path (relative to the
// descriptor's directory)
void save_code(const std::string& path, const LinearCode& code);
LinearCode load_code(const std::string& path);
void save_graph(const std::string& path, const BipartiteExpander& g);
BipartiteExpander load_graph(const std::string& path);

void save_tanner(const std::string& path, const std::string& graph_path,
                 const std::string& inner_path);
TannerCode load_tanner(const std::string& path);
void save_ael(const std::string& path, const std::string& graph_path,
              const std::string& inner_path, const std::string& outer_path);
AELCode load_ael(const std::string& path);
void save_concat(const std::string& path, const std::string& inner_path,
                 const std::string& outer_path);
ConcatCode load_concat(const std::string& path);

std::string code_kind(const std::string& path);  // "linear" | "tanner" | "ael" | "concat"

// word files: one whitespace-separated symbol list per line
std::vector<Word> load_words(const std::string& path, std::uint64_t q);
void save_words(const std::string& path, const std::vector<Word>& words);

std::vector<std::vector<double>> load_weights_csv(const std::string& path);

json list_to_json(const DecodingList& list, const json& config);

// FNV-1a 64 digest of a file's bytes, hex
std::string file_digest(const std::string& path);
json manifest(const std::string& command, const json& config,
              const std::vector<std::string>& input_paths);

}  // namespace expdec::io
