#pragma once

// Corpus file format, version 1.
//
// Directory form:
//   root/<PackageName>/package.json   {"name": "...", "units": ["file.json", ...]}
//   root/<PackageName>/<unit file>    {"name": "...",
//                                      "defines": [{"name": "...", "kind": "class"|"global"}, ...],
//                                      "methods": [{"id": "...", "refs": ["Name", ...]}, ...]}
// Single-file form (path is a regular file):
//   {"name": "...", "packages": [{"name": "...", "units": [<unit object>, ...]}, ...]}
//
// UTF-8 throughout; names are matched byte-exactly.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scopecomplete/corpus.hpp"

namespace scopecomplete {

struct CorpusOptions {
  std::string separator = "-";  // package-name segment separator
};

namespace detail {

using nlohmann::json;

inline json parse_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw MalformedCorpus("cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw MalformedCorpus(file.string() + ": " + e.what());
  }
}

inline std::string require_string(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string())
    throw MalformedCorpus(where + ": missing string field \"" + key + "\"");
  return j[key].get<std::string>();
}

inline Unit parse_unit(const json& j, const std::string& where) {
  Unit u;
  u.name = require_string(j, "name", where);
  if (j.contains("defines")) {
    if (!j["defines"].is_array()) throw MalformedCorpus(where + ": \"defines\" must be an array");
    for (const json& d : j["defines"]) {
      SymbolDef def;
      def.name = require_string(d, "name", where);
      const std::string kind = require_string(d, "kind", where);
      auto parsed = symbol_kind_from_string(kind);
      if (!parsed) throw MalformedCorpus(where + ": unknown symbol kind \"" + kind + "\"");
      def.kind = *parsed;
      u.definedSymbols.push_back(std::move(def));
    }
  }
  if (j.contains("methods")) {
    if (!j["methods"].is_array()) throw MalformedCorpus(where + ": \"methods\" must be an array");
    for (const json& m : j["methods"]) {
      Method method;
      method.id = require_string(m, "id", where);
      if (m.contains("refs")) {
        if (!m["refs"].is_array()) throw MalformedCorpus(where + ": \"refs\" must be an array");
        for (const json& r : m["refs"]) {
          if (!r.is_string()) throw MalformedCorpus(where + ": refs must be strings");
          ReferenceSite site;
          site.symbolName = r.get<std::string>();
          method.references.push_back(std::move(site));
        }
      }
      u.methods.push_back(std::move(method));
    }
  }
  return u;
}

inline std::string directory_repo_name(const std::filesystem::path& root) {
  std::filesystem::path p = root;
  if (p.filename().empty()) p = p.parent_path();  // trailing slash
  std::string name = p.filename().string();
  return name.empty() ? std::string("corpus") : name;
}

}  // namespace detail

inline Repository load_corpus(const std::filesystem::path& path, const CorpusOptions& options = {}) {
  namespace fs = std::filesystem;
  using detail::json;
  if (!fs::exists(path)) throw MalformedCorpus("no such corpus: " + path.string());

  Repository repo;
  repo.segmentSeparator = options.separator;

  if (fs::is_regular_file(path)) {
    const json root = detail::parse_json_file(path);
    repo.name = detail::require_string(root, "name", path.string());
    if (!root.contains("packages") || !root["packages"].is_array())
      throw MalformedCorpus(path.string() + ": missing \"packages\" array");
    for (const json& pj : root["packages"]) {
      Package pkg;
      pkg.name = detail::require_string(pj, "name", path.string());
      if (pj.contains("units")) {
        if (!pj["units"].is_array())
          throw MalformedCorpus(path.string() + ": \"units\" must be an array");
        for (const json& uj : pj["units"])
          pkg.units.push_back(detail::parse_unit(uj, path.string() + " package " + pkg.name));
      }
      repo.packages.push_back(std::move(pkg));
    }
  } else if (fs::is_directory(path)) {
    repo.name = detail::directory_repo_name(path);
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_directory() && fs::exists(entry.path() / "package.json"))
        dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());  // directory_iterator order is unspecified
    for (const fs::path& dir : dirs) {
      const fs::path manifest = dir / "package.json";
      const json pj = detail::parse_json_file(manifest);
      Package pkg;
      pkg.name = detail::require_string(pj, "name", manifest.string());
      if (pj.contains("units")) {
        if (!pj["units"].is_array())
          throw MalformedCorpus(manifest.string() + ": \"units\" must be an array");
        for (const json& fj : pj["units"]) {
          if (!fj.is_string())
            throw MalformedCorpus(manifest.string() + ": unit file names must be strings");
          const fs::path unitFile = dir / fj.get<std::string>();
          pkg.units.push_back(detail::parse_unit(detail::parse_json_file(unitFile), unitFile.string()));
        }
      }
      repo.packages.push_back(std::move(pkg));
    }
  } else {
    throw MalformedCorpus("corpus path is neither file nor directory: " + path.string());
  }

  canonicalize(repo);
  return repo;
}

namespace detail {

inline json unit_to_json(const Unit& u) {
  json uj;
  uj["name"] = u.name;
  uj["defines"] = json::array();
  for (const SymbolDef& d : u.definedSymbols)
    uj["defines"].push_back({{"name", d.name}, {"kind", std::string(to_string(d.kind))}});
  uj["methods"] = json::array();
  for (const Method& m : u.methods) {
    json mj;
    mj["id"] = m.id;
    mj["refs"] = json::array();
    for (const ReferenceSite& s : m.references) mj["refs"].push_back(s.symbolName);
    uj["methods"].push_back(std::move(mj));
  }
  return uj;
}

}  // namespace detail

// Writes the directory form; output reloads via load_corpus bit-for-bit.
inline void write_corpus(const Repository& repo, const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  using detail::json;
  fs::create_directories(root);
  for (const Package& p : repo.packages) {
    const fs::path dir = root / p.name;
    fs::create_directories(dir);
    json manifest;
    manifest["name"] = p.name;
    manifest["units"] = json::array();
    std::set<std::string> used;
    std::size_t idx = 0;
    for (const Unit& u : p.units) {
      std::string file = u.name + ".json";
      while (!used.insert(file).second) file = u.name + "_" + std::to_string(idx++) + ".json";
      manifest["units"].push_back(file);
      std::ofstream out(dir / file);
      out << detail::unit_to_json(u).dump(2) << '\n';
    }
    std::ofstream out(dir / "package.json");
    out << manifest.dump(2) << '\n';
  }
}

inline void write_corpus_single_file(const Repository& repo, const std::filesystem::path& file) {
  using detail::json;
  json root;
  root["name"] = repo.name;
  root["packages"] = json::array();
  for (const Package& p : repo.packages) {
    json pj;
    pj["name"] = p.name;
    pj["units"] = json::array();
    for (const Unit& u : p.units) pj["units"].push_back(detail::unit_to_json(u));
    root["packages"].push_back(std::move(pj));
  }
  std::ofstream out(file);
  out << root.dump(2) << '\n';
}

}  // namespace scopecomplete
